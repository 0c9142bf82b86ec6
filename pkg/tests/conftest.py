import math

import pytest


def rel_err(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-300)


@pytest.fixture(scope="session")
def suite_rows():
    """Verification suites, each run once per session (acceptance reuses them)."""
    from genint import verify

    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = verify.run_suite(name)
        return cache[name]

    return get
