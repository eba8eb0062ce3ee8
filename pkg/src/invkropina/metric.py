"""Reference metric <.,.>_0, metric endomorphism phi, and the induced metric.

The induced inner product is ``<x, y> = <phi x, y>_0``; its Gram matrix
``phi.T @ q0`` is cached at construction.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import DEFAULT_TOL, LieAlgebra, ReductiveSplit, as_vector
from .errors import DimensionMismatch, StructureError
from .report import FAIL, PASS, Check, Report

# smallest eigenvalue relative to the largest
SPD_RTOL = 1e-10


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class InvariantMetric:
    q0: np.ndarray
    phi: np.ndarray | None = None

    def __post_init__(self):
        q0 = _frozen(self.q0)
        if q0.ndim != 2 or q0.shape[0] != q0.shape[1]:
            raise StructureError(f"q0 must be square, got shape {q0.shape}")
        n = q0.shape[0]
        phi = _frozen(np.eye(n) if self.phi is None else self.phi)
        if phi.shape != (n, n):
            raise StructureError(f"phi must be {n} x {n}, got shape {phi.shape}")
        for name, mat in (("q0", q0), ("phi", phi)):
            if not np.all(np.isfinite(mat)):
                raise StructureError(f"{name} has non-finite entries")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(phi, check_finite=False)
        diag = np.abs(np.diag(lu[0]))
        if diag.min() <= 1e-14 * max(diag.max(), 1.0):
            raise StructureError("phi is singular")
        phi_inv = _frozen(scipy.linalg.lu_solve(lu, np.eye(n)))
        object.__setattr__(self, "q0", q0)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "phi_inv", phi_inv)
        object.__setattr__(self, "_phi_lu", lu)
        object.__setattr__(self, "gram", _frozen(phi.T @ q0))

    @property
    def dim(self) -> int:
        return self.q0.shape[0]

    @property
    def is_identity_phi(self) -> bool:
        return bool(np.allclose(self.phi, np.eye(self.dim), rtol=0.0, atol=1e-12))

    def _v(self, x, name="x"):
        return as_vector(x, self.dim, name)

    def inner0(self, x, y) -> float:
        return float(self._v(x) @ self.q0 @ self._v(y, "y"))

    def inner(self, x, y) -> float:
        return float(self._v(x) @ self.gram @ self._v(y, "y"))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    def phi_apply(self, x) -> np.ndarray:
        return self.phi @ self._v(x)

    def phi_inverse(self, x) -> np.ndarray:
        return scipy.linalg.lu_solve(self._phi_lu, self._v(x))

    def b_plus(self, algebra: LieAlgebra, x, y) -> np.ndarray:
        """B_+(x, y) = ([x, phi y] + [y, phi x]) / 2."""
        x, y = self._v(x), self._v(y, "y")
        br = algebra.bracket
        return 0.5 * (br(x, self.phi @ y) + br(y, self.phi @ x))

    def b_minus(self, algebra: LieAlgebra, x, y) -> np.ndarray:
        """B_-(x, y) = ([phi x, y] + [x, phi y]) / 2."""
        x, y = self._v(x), self._v(y, "y")
        br = algebra.bracket
        return 0.5 * (br(self.phi @ x, y) + br(x, self.phi @ y))

    def __eq__(self, other):
        if not isinstance(other, InvariantMetric):
            return NotImplemented
        return np.array_equal(self.q0, other.q0) and np.array_equal(self.phi, other.phi)

    __hash__ = None


def _spd_check(name, sym):
    w = np.linalg.eigvalsh(sym)
    scale = max(abs(w).max(), 1e-300)
    # residual is how far the smallest eigenvalue sits below the floor
    ratio = float(w.min() / scale)
    status = PASS if ratio > SPD_RTOL else FAIL
    return Check(name, status, max(0.0, SPD_RTOL - ratio), SPD_RTOL,
                 f"min/max eigenvalue {ratio:.3e}")


def bi_invariance_residual(algebra: LieAlgebra, q0) -> float:
    """max |<[b_i,b_j],b_k>_0 + <b_j,[b_i,b_k]>_0| over basis triples."""
    c = algebra.structure
    t = np.einsum("ija,ak->ijk", c, q0)
    return float(np.abs(t + t.transpose(0, 2, 1)).max()) if t.size else 0.0


def check_metric(m: InvariantMetric, algebra: LieAlgebra, split: ReductiveSplit,
                 tol: float = DEFAULT_TOL) -> Report:
    """Itemized validation of every InvariantMetric invariant."""
    if m.dim != algebra.dim or split.dim != algebra.dim:
        raise DimensionMismatch("metric, algebra and split dimensions differ")
    report = Report()
    q0, phi = m.q0, m.phi

    asym = float(np.abs(q0 - q0.T).max())
    report.add(Check.from_residual("metric.q0_symmetric", asym, tol))
    report.add(_spd_check("metric.q0_positive", 0.5 * (q0 + q0.T)))
    report.add(Check.from_residual("metric.q0_bi_invariant", bi_invariance_residual(algebra, q0), tol))

    # phi self-adjoint for <.,.>_0  <=>  q0 phi symmetric
    qp = q0 @ phi
    report.add(Check.from_residual("metric.phi_self_adjoint", float(np.abs(qp - qp.T).max()), tol))
    report.add(_spd_check("metric.phi_positive", 0.5 * (qp + qp.T)))

    h, mi = list(split.h_indices), list(split.m_indices)
    if h:
        off = max(np.abs(phi[np.ix_(h, mi)]).max(initial=0.0), np.abs(phi[np.ix_(mi, h)]).max(initial=0.0))
        ident = float(np.abs(phi[np.ix_(h, h)] - np.eye(len(h))).max())
        report.add(Check.from_residual("metric.phi_block", float(max(off, ident)), tol,
                                       "phi(m) in m, phi|h = id"))
        g = m.gram
        c = algebra.structure
        # <[h,x],y> + <x,[h,y]> for h in h, x, y in m
        t = np.einsum("ija,ak->ijk", c[np.ix_(h, mi, range(algebra.dim))], g[:, mi])
        res = float(np.abs(t + t.transpose(0, 2, 1)).max()) if t.size else 0.0
        report.add(Check.from_residual("metric.ad_h_invariant", res, tol))
    else:
        report.add(Check("metric.phi_block", PASS, 0.0, tol, "trivial h"))
        report.add(Check("metric.ad_h_invariant", PASS, 0.0, tol, "trivial h"))
    return report
