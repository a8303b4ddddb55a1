import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from advbayes import examples


@pytest.fixture(scope="session")
def eqvar_pair():
    return examples.gaussians_equal_variances()


@pytest.fixture(scope="session")
def eqmeans_pair():
    return examples.gaussians_equal_means()


@pytest.fixture(scope="session")
def nus_pair():
    return examples.non_uniqueness_single()


@pytest.fixture(scope="session")
def nua_pair():
    return examples.non_uniqueness_all()


@pytest.fixture(scope="session")
def deg_pair():
    return examples.degenerate()
