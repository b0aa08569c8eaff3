import os

import pytest
from mpmath import mp

from zetalab.precision import Precision

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(REPO, "data")
CACHE = os.path.join(REPO, "tests", "_cache")

HEAD_TABLE = os.path.join(DATA, "zeta_zeros_head_100_d50.txt")
BULK_TABLE = os.path.join(DATA, "zeta_zeros_30000.txt")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ZETALAB_FULLSCALE"):
        return
    skip = pytest.mark.skip(reason="full-scale run; set ZETALAB_FULLSCALE=1")
    for item in items:
        if "fullscale" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def cache_dir():
    os.makedirs(CACHE, exist_ok=True)
    return CACHE


@pytest.fixture(scope="session")
def head_zeros():
    """First 100 ordinates at 50 digits from an independent implementation."""
    from zetalab.zeros_io import read_zero_list
    if not os.path.exists(HEAD_TABLE):
        pytest.skip("head zero table not generated")
    return read_zero_list(HEAD_TABLE, digits=50, source="imported")


@pytest.fixture(scope="session")
def bulk_zeros():
    """Large imported table (float-precision ordinates)."""
    from zetalab.zeros_io import read_zero_list
    if not os.path.exists(BULK_TABLE):
        pytest.skip("bulk zero table not generated")
    return read_zero_list(BULK_TABLE, digits=30, source="imported")


@pytest.fixture(scope="session")
def ref_zeros_50(cache_dir):
    """Fifty Xi-oracle reference zeros at 60 digits (cached on disk)."""
    from zetalab.pipeline import cached_reference_zeros
    return cached_reference_zeros(50, Precision(60), cache_dir=cache_dir)


@pytest.fixture(scope="session")
def ci_mode(cache_dir):
    """The CI-scale minimal mode: support [1, 5], N = 60, 120 digits."""
    from zetalab.pipeline import weil_approx_run
    return weil_approx_run(Precision(120), pmax=5, N=60, count=10,
                           cache_dir=cache_dir)
