"""Certify the solver's minima with the grid primal and the matching dual.

Usage: python3 scripts/run_certificates.py [outdir]
"""

import sys
from pathlib import Path

from advbayes.cli import main as cli_main

CASES = [
    ("gaussians_equal_variances", 0.5),
    ("gaussians_equal_means", 0.5),
    ("non_uniqueness_all", 0.2),
    ("degenerate", 0.05),
    ("non_uniqueness_single", 0.1),
    ("deg_eta_0_1_counterexample", 0.1),
]


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, eps in CASES:
        out = outdir / f"certificate_{name}.json"
        code = cli_main(
            ["certify", "--example", name, "--eps", str(eps), "--out", str(out)]
        )
        print(f"{name} @ eps={eps}: exit {code} -> {out}")
        worst = max(worst, code)
    code = cli_main(
        ["certify", "--example", "non_equiv", "--eps", "0.3",
         "--out", str(outdir / "certificate_atomic.json")]
    )
    print(f"atomic pair @ eps=0.3: exit {code}")
    return max(worst, code)


if __name__ == "__main__":
    sys.exit(main())
