"""Built-in example models and random metric generators."""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import DEFAULT_TOL, LieAlgebra, ReductiveSplit, as_vector
from .curvature import CurvatureContext, structural_report
from .errors import KropinaError, ValidationError
from .kropina import KropinaStructure
from .metric import InvariantMetric
from .report import FAIL, INFO, PASS, Check, Report

MAX_DIM = 16


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    algebra: LieAlgebra
    split: ReductiveSplit
    metric: InvariantMetric
    x_field: np.ndarray | None = None
    notes: str = ""

    def __post_init__(self):
        if self.x_field is not None:
            x = as_vector(self.x_field, self.algebra.dim, "x_field").copy()
            x.setflags(write=False)
            object.__setattr__(self, "x_field", x)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def context(self, tol: float = DEFAULT_TOL, validate: bool = True) -> CurvatureContext:
        return CurvatureContext(self.algebra, self.split, self.metric, tol=tol, validate=validate)

    def kropina(self, tol: float = DEFAULT_TOL) -> KropinaStructure:
        if self.x_field is None:
            raise KropinaError(f"model {self.name!r} has no x_field")
        return KropinaStructure(self.context(tol), self.x_field)

    def validate(self, tol: float = DEFAULT_TOL) -> Report:
        """Every structural check, plus the Kropina ones when X is present.

        The naturally reductive condition is reported as information only:
        it selects a closed form but is not required of a model.
        """
        report = structural_report(self.algebra, self.split, self.metric, tol)
        if not report.ok:
            return report
        ctx = self.context(tol, validate=False)
        nr = ctx.naturally_reductive_check(tol)
        report.add(Check(nr.name, INFO, nr.residual, nr.threshold,
                         "holds" if nr.status == PASS else "does not hold"))
        if self.x_field is None:
            return report
        x = self.x_field
        h_part = float(np.abs(x * self.split.h_mask).max(initial=0.0))
        report.add(Check.from_residual("kropina.x_in_m", h_part, tol))
        x_size = float(np.abs(x).max())
        report.add(Check("kropina.x_nonzero", PASS if x_size > tol else FAIL, x_size, tol))
        inv = max((float(np.abs(self.algebra.bracket(self.algebra.basis(i), x)).max())
                   for i in self.split.h_indices), default=0.0)
        report.add(Check.from_residual("kropina.x_invariant", inv, tol))
        if not report.ok:
            return report
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report.add(KropinaStructure(ctx, x).berwald_hypothesis_check(tol))
        return report

    def __eq__(self, other):
        if not isinstance(other, ModelSpec):
            return NotImplemented
        xs = (self.x_field is None, other.x_field is None)
        return (self.name == other.name and self.notes == other.notes
                and np.array_equal(self.algebra.structure, other.algebra.structure)
                and self.algebra.basis_labels == other.algebra.basis_labels
                and self.split == other.split and self.metric == other.metric
                and xs[0] == xs[1]
                and (xs[0] or np.array_equal(self.x_field, other.x_field)))

    __hash__ = None


# -- algebras ------------------------------------------------------------------

def su2(labels=("b1", "b2", "b3")) -> LieAlgebra:
    """[b1,b2] = b3, [b2,b3] = b1, [b3,b1] = b2; the identity Gram matrix is bi-invariant."""
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}, (1, 2): {0: 1.0}, (2, 0): {1: 1.0}}, labels)


def line(label="b0") -> LieAlgebra:
    return LieAlgebra(np.zeros((1, 1, 1)), (label,))


def so_algebra(n: int) -> LieAlgebra:
    """so(n) in the basis E_ab - E_ba (a < b), orthonormal for tr(X^T Y) / 2."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mats = []
    for a, b in pairs:
        m = np.zeros((n, n))
        m[a, b], m[b, a] = 1.0, -1.0
        mats.append(m)
    d = len(pairs)
    c = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            com = mats[i] @ mats[j] - mats[j] @ mats[i]
            c[i, j] = [com[a, b] for a, b in pairs]
    return LieAlgebra(c, tuple(f"L{a}{b}" for a, b in pairs))


# -- catalog -------------------------------------------------------------------

def _su2_biinvariant():
    a = su2()
    return ModelSpec("su2_biinvariant", a, ReductiveSplit(3), InvariantMetric(np.eye(3)),
                     notes="SU(2) with its bi-invariant metric; curvature only, sectional(b1,b2) = 1/4.")


def _u2_central_kropina():
    a = line("b0").direct_sum(su2())
    return ModelSpec("u2_central_kropina", a, ReductiveSplit(4), InvariantMetric(np.eye(4)),
                     x_field=np.array([1.0, 0.0, 0.0, 0.0]),
                     notes="U(2) = R + su(2), bi-invariant, X central; all three flag-curvature theorems apply.")


def _s2_normal():
    a = su2()
    return ModelSpec("s2_normal", a, ReductiveSplit(3, (2,)), InvariantMetric(np.eye(3)),
                     notes="S^2 = SU(2)/U(1), normal metric; naturally reductive, <R(b1,b2)b2,b1> = 1. "
                           "No invariant X exists.")


CIRCLE_LAMBDA0 = 4.0
CIRCLE_LAMBDA = 2.0


def _circle_su2_mod_u1():
    a = line("s").direct_sum(su2())
    phi = np.diag([CIRCLE_LAMBDA0, CIRCLE_LAMBDA, CIRCLE_LAMBDA, 1.0])
    return ModelSpec("circle_su2_mod_u1", a, ReductiveSplit(4, (3,)), InvariantMetric(np.eye(4), phi),
                     x_field=np.array([1.0, 0.0, 0.0, 0.0]),
                     notes="(R + su(2))/u(1), phi = diag(4, 2, 2, 1), X = s; homogeneous Kropina with nontrivial h.")


def _abelian(n):
    a = LieAlgebra(np.zeros((n, n, n)), tuple(f"b{i}" for i in range(n)))
    x = np.zeros(n)
    x[0] = 1.0
    return ModelSpec(f"abelian_{n}", a, ReductiveSplit(n), InvariantMetric(np.eye(n)), x_field=x,
                     notes=f"R^{n}, flat; every curvature vanishes.")


_CATALOG = {
    "su2_biinvariant": _su2_biinvariant,
    "u2_central_kropina": _u2_central_kropina,
    "s2_normal": _s2_normal,
    "circle_su2_mod_u1": _circle_su2_mod_u1,
    "abelian_2": lambda: _abelian(2),
    "abelian_3": lambda: _abelian(3),
}


def catalog() -> list[str]:
    """Names accepted by ``builtin`` (``abelian_<n>`` works for any 1 <= n <= 16)."""
    return list(_CATALOG)


def builtin(name: str, validate: bool = True) -> ModelSpec:
    if name in _CATALOG:
        spec = _CATALOG[name]()
    else:
        match = re.fullmatch(r"abelian_(\d+)", name)
        if not match or not 1 <= int(match.group(1)) <= MAX_DIM:
            raise KeyError(f"unknown model {name!r}; known: {', '.join(catalog())}, abelian_<n>")
        spec = _abelian(int(match.group(1)))
    if validate:
        report = spec.validate()
        if not report.ok:  # pragma: no cover - catalog is tested
            raise ValidationError(f"builtin model {name!r} failed validation", report)
    return spec


# -- random metrics ------------------------------------------------------------

def invariant_phi_basis(algebra: LieAlgebra, split: ReductiveSplit, q0=None) -> list[np.ndarray]:
    """Basis of the m-block endomorphisms S with q0 S self-adjoint and Ad(h)-invariant metric."""
    n = algebra.dim
    q0 = np.eye(n) if q0 is None else np.asarray(q0, dtype=float)
    m = list(split.m_indices)
    k = len(m)
    qm = q0[np.ix_(m, m)]
    ads = [algebra.ad(algebra.basis(i))[np.ix_(m, m)] for i in split.h_indices]
    cols = []
    for idx in range(k * k):
        s = np.zeros(k * k)
        s[idx] = 1.0
        s = s.reshape(k, k)
        g = s.T @ qm
        parts = [(qm @ s - s.T @ qm).ravel()]
        parts += [(a.T @ g + g @ a).ravel() for a in ads]
        cols.append(np.concatenate(parts))
    null = scipy.linalg.null_space(np.array(cols).T)
    return [null[:, j].reshape(k, k) for j in range(null.shape[1])]


def random_phi(seed, algebra: LieAlgebra, split: ReductiveSplit, spectrum_range=(0.5, 2.0),
               q0=None) -> InvariantMetric:
    """Random admissible metric endomorphism with spectrum on m inside ``spectrum_range``.

    A random element of the invariant commutant is rescaled affinely so its
    eigenvalues span the range; affine maps keep it in the commutant.
    """
    lo, hi = (float(v) for v in spectrum_range)
    if not 0 < lo <= hi:
        raise ValueError(f"spectrum_range must satisfy 0 < lo <= hi, got {spectrum_range}")
    n = algebra.dim
    q0 = np.eye(n) if q0 is None else np.asarray(q0, dtype=float)
    m = list(split.m_indices)
    phi = np.eye(n)
    if m:
        k = len(m)
        if hi == lo:
            block = lo * np.eye(k)
        else:
            rng = np.random.default_rng(seed)
            basis = invariant_phi_basis(algebra, split, q0)
            s0 = sum(rng.standard_normal() * b for b in basis)
            w = np.linalg.eigvals(s0).real
            span = w.max() - w.min()
            if span < 1e-12:
                block = lo * np.eye(k)
            else:
                block = lo * np.eye(k) + (hi - lo) * (s0 - w.min() * np.eye(k)) / span
        phi[np.ix_(m, m)] = block
    return InvariantMetric(q0, phi)
