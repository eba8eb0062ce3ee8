import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invkropina import LieAlgebra, ReductiveSplit, check_jacobi, check_split
from invkropina.errors import DimensionMismatch, StructureError
from invkropina.models import so_algebra, su2

from .conftest import BI_INVARIANT_ALGEBRAS

b1, b2, b3 = np.eye(3)


def jacobi_bruteforce(c):
    """Largest |([x,[y,z]] + [y,[z,x]] + [z,[x,y]])_m| by explicit loops over basis triples."""
    n = c.shape[0]

    def br(x, y):
        out = np.zeros(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    out[k] += x[i] * y[j] * c[i, j, k]
        return out

    e = np.eye(n)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = e[i], e[j], e[k]
                s = br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))
                worst = max(worst, float(np.abs(s).max()))
    return worst


def test_su2_bracket_table(su2_alg):
    np.testing.assert_array_equal(su2_alg.bracket(b1, b2), b3)
    np.testing.assert_array_equal(su2_alg.bracket(b3, b2), -b1)
    np.testing.assert_array_equal(su2_alg.bracket(b2, b3), b1)


def test_bracket_with_itself_vanishes(su2_alg, rng):
    x = rng.standard_normal(3)
    assert np.abs(su2_alg.bracket(x, x)).max() <= 1e-15


def test_bracket_dimension_mismatch(su2_alg):
    with pytest.raises(DimensionMismatch):
        su2_alg.bracket([1.0, 0.0], b1)


def test_non_finite_vector_rejected(su2_alg):
    with pytest.raises(StructureError):
        su2_alg.bracket([np.nan, 0, 0], b1)


def test_ad_matrix_matches_bracket(rng):
    a = so_algebra(4)
    x, y = rng.standard_normal((2, a.dim))
    np.testing.assert_allclose(a.ad(x) @ y, a.bracket(x, y), atol=1e-14)


def test_construction_enforces_antisymmetry():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    with pytest.raises(StructureError, match="antisymmetric"):
        LieAlgebra(c)


@pytest.mark.parametrize("name", sorted(BI_INVARIANT_ALGEBRAS))
def test_shipped_algebras_satisfy_jacobi(name):
    a = BI_INVARIANT_ALGEBRAS[name]()
    check = check_jacobi(a)
    assert check.status == "pass"
    assert check.residual <= 1e-12
    assert jacobi_bruteforce(a.structure) <= 1e-12


def test_abelian_passes_jacobi():
    assert check_jacobi(LieAlgebra.abelian(4)).residual == 0.0


def test_rescaled_su2_table_is_still_a_lie_algebra():
    # [b1,b2] = 1.1 b3 keeps the table diagonal, which is still a Lie algebra
    c = su2().structure.copy()
    c[0, 1, 2], c[1, 0, 2] = 1.1, -1.1
    a = LieAlgebra(c)
    assert jacobi_bruteforce(c) == 0.0
    assert check_jacobi(a).status == "pass"


def test_corrupted_table_fails_jacobi():
    # [b1,b2] = b3 + 0.1 b1: Jacobi on (b1,b2,b3) leaves 0.1 [b3,b1] = 0.1 b2
    c = su2().structure.copy()
    c[0, 1, 0], c[1, 0, 0] = 0.1, -0.1
    expected = jacobi_bruteforce(c)
    assert expected == pytest.approx(0.1, abs=1e-15)
    check = check_jacobi(LieAlgebra(c))
    assert check.status == "fail"
    assert check.residual == pytest.approx(expected, abs=1e-15)
    assert "worst triple" in check.detail


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), scale=st.floats(-3, 3))
def test_bracket_bilinear_antisymmetric(seed, scale):
    a = so_algebra(4)
    r = np.random.default_rng(seed)
    x, y, z = r.standard_normal((3, a.dim))
    lhs = a.bracket(scale * x + z, y)
    rhs = scale * a.bracket(x, y) + a.bracket(z, y)
    size = 1.0 + np.abs(rhs).max()
    assert np.abs(lhs - rhs).max() <= 1e-12 * size
    assert np.abs(a.bracket(x, y) + a.bracket(y, x)).max() <= 1e-12 * size


# -- splits -------------------------------------------------------------------

def test_projections_s2_model():
    s = ReductiveSplit(3, (2,))
    np.testing.assert_array_equal(s.project_m(b3), np.zeros(3))
    np.testing.assert_array_equal(s.project_m(b1 + 2 * b3), b1)
    np.testing.assert_array_equal(s.project_h(b1 + 2 * b3), 2 * b3)
    assert s.m_indices == (0, 1)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), h=st.sets(st.integers(0, 5), max_size=6))
def test_projection_identities(seed, h):
    s = ReductiveSplit(6, tuple(h))
    x = np.random.default_rng(seed).standard_normal(6)
    pm = s.project_m(x)
    np.testing.assert_array_equal(s.project_m(pm), pm)
    np.testing.assert_array_equal(pm + s.project_h(x), x)


def test_check_split_s2_passes(su2_alg):
    assert check_split(su2_alg, ReductiveSplit(3, (2,))).ok


def test_check_split_rejects_non_subalgebra(su2_alg):
    report = check_split(su2_alg, ReductiveSplit(3, (0, 1)))
    assert report["split.subalgebra"].status == "fail"
    assert report["split.subalgebra"].residual == 1.0


@pytest.mark.parametrize("name", sorted(BI_INVARIANT_ALGEBRAS))
def test_trivial_split_always_passes(name):
    a = BI_INVARIANT_ALGEBRAS[name]()
    assert check_split(a, ReductiveSplit(a.dim)).ok


def test_split_rejects_bad_indices():
    with pytest.raises(StructureError):
        ReductiveSplit(3, (3,))
    with pytest.raises(StructureError):
        ReductiveSplit(3, (1, 1))
