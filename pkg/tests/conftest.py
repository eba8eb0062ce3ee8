import numpy as np
import pytest

from invkropina import CurvatureContext, Flag, InvariantMetric, ReductiveSplit, builtin
from invkropina.models import line, so_algebra, su2
from invkropina.oracles import random_m_vectors

# lines collected by test_acceptance and echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for text in ACCEPTANCE_LINES:
            terminalreporter.write_line(text)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def su2_alg():
    return su2()


@pytest.fixture
def su2_ctx(su2_alg):
    return CurvatureContext(su2_alg, ReductiveSplit(3), InvariantMetric(np.eye(3)))


@pytest.fixture
def s2_ctx():
    return builtin("s2_normal").context()


@pytest.fixture
def u2_ks():
    return builtin("u2_central_kropina").kropina()


def u2_algebra():
    return line("b0").direct_sum(su2())


def so4_algebra():
    return so_algebra(4)


BI_INVARIANT_ALGEBRAS = {
    "su2": su2,
    "u2": u2_algebra,
    "so4": so4_algebra,
    "so5": lambda: so_algebra(5),
}


def beta_one_flag(ks, rng):
    """Random orthonormal flag whose flagpole has <Y,X> = 1 exactly (needs |X| >= 1)."""
    nx = ks.metric.norm(ks.x)
    xhat = ks.x / nx
    w = random_m_vectors(ks.ctx, rng, 1)[0]
    w -= ks.metric.inner(w, xhat) * xhat
    w /= ks.metric.norm(w)
    c = 1.0 / nx
    y = c * xhat + np.sqrt(1 - c * c) * w
    return ks.orthonormalize_flag(Flag(y, random_m_vectors(ks.ctx, rng, 1)[0]))
