import pytest

from modtalg.analysis import compute_artifacts
from modtalg.ffmat import field_ctx
from modtalg.fixtures import corpus

PRIMES = (2, 3, 5, 7)


@pytest.fixture(scope="session")
def schemes():
    return dict(corpus())


@pytest.fixture(scope="session")
def artifacts():
    """Memoized full-pipeline artifacts keyed by (fixture name, p, x)."""
    cache = {}
    named = dict(corpus())

    def get(name, p, x=0):
        key = (name, p, x)
        if key not in cache:
            cache[key] = compute_artifacts(named[name], field_ctx(p), x)
        return cache[key]

    return get
