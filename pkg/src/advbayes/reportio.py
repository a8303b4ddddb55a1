"""Deterministic report serialization.

JSON output sorts every object's keys and prints floats with 17 significant
digits, so identical runs produce byte-identical files.  Interval sets
serialize as rows ``[lo, hi, lo_closed, hi_closed]`` with "-inf"/"inf"
sentinels.
"""

from __future__ import annotations

import csv
import math
from typing import Any, Iterable

from .certify import DualCertificate, GapReport
from .conditions import FirstOrderScan
from .intervals import IntervalSet
from .risk import RiskBreakdown
from .solver import (
    CandidateClassifier,
    DegenerateReport,
    EquivalenceClass,
    SolveReport,
)


def fmt_float(x: float) -> str:
    if math.isnan(x):
        raise ValueError("NaN is not serializable")
    if x == math.inf:
        return '"inf"'
    if x == -math.inf:
        return '"-inf"'
    return format(float(x), ".17g")


def dumps(obj: Any, indent: int = 0) -> str:
    pad = " " * indent
    child = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted(obj.items(), key=lambda kv: kv[0])
        rows = [f'{child}"{k}": {dumps(v, indent + 2)}' for k, v in items]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{child}{dumps(v, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def interval_set_to_rows(s: IntervalSet) -> list[list]:
    return s.to_rows()


def risk_to_dict(r: RiskBreakdown) -> dict:
    return r.to_dict()


def candidate_to_dict(c: CandidateClassifier) -> dict:
    return {
        "set": c.set.to_rows(),
        "risk": c.risk.to_dict(),
        "regular": c.regular,
        "second_order_clean": c.second_order_clean,
    }


def class_to_dict(c: EquivalenceClass) -> dict:
    return {
        "representative": c.representative.to_rows(),
        "members": [m.set.to_rows() for m in c.members],
        "degenerate_core": c.degenerate_core.to_rows(),
        "risk": c.risk,
        "assumptions_met": c.assumptions_met,
    }


def degenerate_to_dict(d: DegenerateReport) -> dict:
    return {
        "small_components": d.small_components.to_rows(),
        "maximal_degenerate": d.maximal_degenerate.to_rows(),
        "assumptions_met": d.assumptions_met,
        "detected_intervals": IntervalSet(d.detected_intervals).to_rows(),
    }


def scan_to_dict(scan: FirstOrderScan | None) -> dict | None:
    if scan is None:
        return None
    return {
        "a_candidates": [c.to_dict() for c in scan.a_candidates],
        "b_candidates": [c.to_dict() for c in scan.b_candidates],
        "window": [scan.window.lo, scan.window.hi],
        "window_widened": scan.window_widened,
        "truncated": scan.truncated,
    }


def solve_report_to_dict(r: SolveReport) -> dict:
    return {
        "epsilon": r.epsilon,
        "min_risk": r.min_risk,
        "unique_up_to_degeneracy": r.unique_up_to_degeneracy,
        "n_classes": len(r.classes),
        "candidates": [candidate_to_dict(c) for c in r.candidates],
        "minimizers": [candidate_to_dict(c) for c in r.minimizers],
        "classes": [class_to_dict(c) for c in r.classes],
        "first_order": scan_to_dict(r.first_order),
        "plateau_checks": [
            {
                "kind": p.kind,
                "plateau": list(p.plateau),
                "verified": p.verified,
                "checked_points": p.checked_points,
            }
            for p in r.plateau_checks
        ],
        "degenerate_reports": [degenerate_to_dict(d) for d in r.degenerate],
        "warnings": r.warnings,
    }


def certificate_to_dict(c: DualCertificate, full_matching: bool = False) -> dict:
    out = {
        "dual_value": c.dual_value,
        "grid_h": c.grid_h,
        "pairing_radius": c.pairing_radius,
        "matching_stats": c.matching_stats(),
    }
    if full_matching:
        out["matching"] = [[i, j, m] for i, j, m in c.matching]
    return out


def gap_to_dict(g: GapReport, full_matching: bool = False) -> dict:
    return {
        "primal": g.primal,
        "dual": g.dual,
        "gap": g.gap,
        "argmin": g.argmin.to_rows(),
        "grid_h": g.grid_h,
        "max_k": g.max_k,
        "certificate": certificate_to_dict(g.certificate, full_matching),
    }


def representative_string(s: IntervalSet) -> str:
    if s.is_empty:
        return "empty"
    parts = []
    for iv in s.intervals:
        lo = "-inf" if math.isinf(iv.lo) else format(iv.lo, ".12g")
        hi = "inf" if math.isinf(iv.hi) else format(iv.hi, ".12g")
        parts.append(f"({lo},{hi})")
    return "u".join(parts)


SWEEP_COLUMNS = [
    "epsilon",
    "min_risk",
    "n_classes",
    "comp_classifier",
    "comp_complement",
    "unique_up_to_degeneracy",
    "representative",
    "monotonic_vs_prev",
]

SOLVE_COLUMNS = [
    "epsilon",
    "min_risk",
    "n_classes",
    "unique_up_to_degeneracy",
    "representative",
]


def write_csv(path: str, columns: list[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(list(row))


def solve_csv_row(r: SolveReport) -> list:
    rep = r.classes[0].representative if r.classes else IntervalSet.empty()
    return [
        fmt_float(r.epsilon),
        fmt_float(r.min_risk),
        len(r.classes),
        "true" if r.unique_up_to_degeneracy else "false",
        representative_string(rep),
    ]
