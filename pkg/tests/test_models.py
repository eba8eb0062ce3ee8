import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invkropina import InvariantMetric, ReductiveSplit, builtin, catalog, check_metric, random_phi
from invkropina.errors import KropinaError
from invkropina.models import ModelSpec, invariant_phi_basis, so_algebra, su2

from .conftest import BI_INVARIANT_ALGEBRAS


@pytest.mark.parametrize("name", catalog() + ["abelian_1", "abelian_7"])
def test_catalog_models_validate(name):
    spec = builtin(name)
    report = spec.validate()
    assert report.ok, report.format()
    assert spec.name == name


def test_unknown_model():
    with pytest.raises(KeyError, match="unknown model"):
        builtin("su3")
    with pytest.raises(KeyError):
        builtin("abelian_17")


def test_catalog_values():
    assert builtin("su2_biinvariant").context().sectional(*np.eye(3)[:2]) == pytest.approx(0.25)
    s2 = builtin("s2_normal").context()
    assert s2.puttmann_pairing(*np.eye(3)[[0, 1, 1, 0]]) == pytest.approx(1.0)
    report = builtin("u2_central_kropina").validate()
    assert report["hypothesis.nabla_X"].status == "pass"
    assert builtin("s2_normal").x_field is None


def test_circle_model_has_invariant_x():
    spec = builtin("circle_su2_mod_u1")
    report = spec.validate()
    assert report["kropina.x_invariant"].residual == 0.0
    assert report["hypothesis.nabla_X"].status == "unchecked"
    assert report["naturally_reductive"].status == "info"


def test_validate_reports_bad_x():
    base = builtin("s2_normal")
    spec = ModelSpec("bad", base.algebra, base.split, base.metric, x_field=[1.0, 0.0, 0.0])
    report = spec.validate()
    assert report["kropina.x_invariant"].status == "fail"
    assert not report.ok
    with_h = ModelSpec("bad", base.algebra, base.split, base.metric, x_field=[0.0, 0.0, 1.0])
    assert with_h.validate()["kropina.x_in_m"].status == "fail"


def test_validate_su2_with_x_b1_fails_hypothesis():
    base = builtin("su2_biinvariant")
    spec = ModelSpec("su2_x", base.algebra, base.split, base.metric, x_field=[1.0, 0.0, 0.0])
    report = spec.validate()
    check = report["hypothesis.nabla_X"]
    assert check.status == "fail"
    assert check.residual == pytest.approx(0.5, abs=1e-12)


def test_kropina_requires_x():
    with pytest.raises(KropinaError):
        builtin("su2_biinvariant").kropina()


def test_spec_equality():
    assert builtin("u2_central_kropina") == builtin("u2_central_kropina")
    assert builtin("u2_central_kropina") != builtin("circle_su2_mod_u1")


def test_so_algebra_dimensions():
    for n, d in ((3, 3), (4, 6), (5, 10)):
        a = so_algebra(n)
        assert a.dim == d


# -- random_phi ----------------------------------------------------------------------

def test_random_phi_seed_determinism(su2_alg):
    a = random_phi(7, su2_alg, ReductiveSplit(3))
    b = random_phi(7, su2_alg, ReductiveSplit(3))
    c = random_phi(8, su2_alg, ReductiveSplit(3))
    assert a == b
    assert a != c


def test_random_phi_unit_range_is_identity(su2_alg):
    met = random_phi(3, su2_alg, ReductiveSplit(3), (1.0, 1.0))
    np.testing.assert_array_equal(met.phi, np.eye(3))


def test_random_phi_rejects_bad_range(su2_alg):
    with pytest.raises(ValueError):
        random_phi(0, su2_alg, ReductiveSplit(3), (0.0, 1.0))
    with pytest.raises(ValueError):
        random_phi(0, su2_alg, ReductiveSplit(3), (2.0, 1.0))


def test_invariant_phi_basis_dimensions():
    # trivial h: all q0-self-adjoint endomorphisms, k(k+1)/2 of them
    assert len(invariant_phi_basis(su2(), ReductiveSplit(3))) == 6
    # S^2: rotations about b3 commute only with a + b J on span{b1, b2}; self-adjoint leaves a
    assert len(invariant_phi_basis(su2(), ReductiveSplit(3, (2,)))) == 1
    circle = builtin("circle_su2_mod_u1")
    # s-block, scalar on {b1,b2}
    assert len(invariant_phi_basis(circle.algebra, circle.split)) == 2


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1),
       name=st.sampled_from(sorted(BI_INVARIANT_ALGEBRAS) + ["s2", "circle"]),
       lo=st.floats(0.1, 2.0), width=st.floats(0.0, 5.0))
def test_random_phi_always_valid(seed, name, lo, width):
    if name == "s2":
        spec = builtin("s2_normal")
        alg, split = spec.algebra, spec.split
    elif name == "circle":
        spec = builtin("circle_su2_mod_u1")
        alg, split = spec.algebra, spec.split
    else:
        alg = BI_INVARIANT_ALGEBRAS[name]()
        split = ReductiveSplit(alg.dim)
    met = random_phi(seed, alg, split, (lo, lo + width))
    report = check_metric(met, alg, split)
    assert report.ok, report.format()
    m = list(split.m_indices)
    w = np.linalg.eigvalsh(met.phi[np.ix_(m, m)])
    assert w.min() >= lo * (1 - 1e-9)
    assert w.max() <= (lo + width) * (1 + 1e-9)
