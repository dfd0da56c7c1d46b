import pytest

from robindisc.diamag import FiberCache, scan_b


@pytest.fixture(scope="session")
def scan_gamma20():
    """The 311-point field scan at gamma=-20 on [0.5, 16]."""
    return scan_b(-20.0, 0.5, 16.0, 311)


@pytest.fixture(scope="session")
def shared_cache():
    return FiberCache()
