import warnings

import pytest

from hjbgap import get_suite
from hjbgap.sweep import run_sweep


@pytest.fixture(scope="session")
def example1_suite():
    return get_suite("example1")


@pytest.fixture(scope="session")
def example2_suite():
    return get_suite("example2")


# Shared sweeps: several acceptance criteria (4, 5, 6, 9) examine the same
# rollouts, so they are computed once per session.

@pytest.fixture(scope="session")
def veps_sweep(example2_suite):
    return run_sweep(example2_suite, "veps",
                     example2_suite.default_eps["veps"], steps=10_000)


@pytest.fixture(scope="session")
def v2_sweep(example1_suite):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return run_sweep(example1_suite, "v2",
                         example1_suite.default_eps["v2"], steps=10_000)


@pytest.fixture(scope="session")
def v1_sweep(example1_suite):
    return run_sweep(example1_suite, "v1", [1e-2, 1e-3, 1e-4], steps=10_000)
