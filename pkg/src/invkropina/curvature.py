"""Curvature of invariant metrics on G/H at the origin.

Sign convention throughout: R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W
- nabla_[U,V] W, so that <R(U,Y)Y,U> is the (unnormalized) sectional
curvature. Four routes are provided:

* ``puttmann_pairing`` -- the general closed form for <R(x,y)z,w>;
* ``naturally_reductive_R`` -- valid when the naturally reductive condition holds;
* ``bi_invariant_R`` -- -1/4 [[u,y],y] for a bi-invariant metric on a group;
* ``oracle_R`` -- the definition applied to the Levi-Civita connection from
  the Koszul formula (trivial h only), kept independent of the others.
"""
from __future__ import annotations

import warnings
from functools import cached_property

import numpy as np
import scipy.linalg

from . import kernels
from .algebra import DEFAULT_TOL, LieAlgebra, ReductiveSplit, as_vector, check_jacobi, check_split
from .errors import DimensionMismatch, OffSubspaceError, UnsupportedModel, ValidationError
from .metric import InvariantMetric, check_metric
from .report import Check, Report


def structural_report(algebra: LieAlgebra, split: ReductiveSplit, metric: InvariantMetric,
                      tol: float = DEFAULT_TOL) -> Report:
    report = Report([check_jacobi(algebra, tol)])
    report.extend(check_split(algebra, split, tol))
    report.extend(check_metric(metric, algebra, split, tol))
    return report


class CurvatureContext:
    """Lie algebra, reductive split and invariant metric, validated together."""

    def __init__(self, algebra: LieAlgebra, split: ReductiveSplit, metric: InvariantMetric,
                 tol: float = DEFAULT_TOL, validate: bool = True):
        if not (algebra.dim == split.dim == metric.dim):
            raise DimensionMismatch(
                f"dimensions differ: algebra {algebra.dim}, split {split.dim}, metric {metric.dim}")
        self.algebra = algebra
        self.split = split
        self.metric = metric
        self.tol = tol
        if validate:
            report = structural_report(algebra, split, metric, tol)
            if not report.ok:
                names = ", ".join(c.name for c in report.failures())
                raise ValidationError(f"invalid curvature context: {names}", report)
        m = list(split.m_indices)
        self._m = m
        self._gram_m_cho = scipy.linalg.cho_factor(metric.gram[np.ix_(m, m)]) if m else None

    @property
    def dim(self) -> int:
        return self.algebra.dim

    # -- helpers ----------------------------------------------------------

    def to_m(self, x, name: str = "vector") -> np.ndarray:
        """Project onto m, refusing vectors with h-components above tolerance."""
        v = as_vector(x, self.dim, name)
        h_part = np.abs(v * self.split.h_mask).max(initial=0.0)
        if h_part > self.tol * max(1.0, float(np.abs(v).max(initial=0.0))):
            raise OffSubspaceError(f"{name} has h-component {h_part:.3e} (tolerance {self.tol:g})")
        return v * self.split.m_mask

    def _br(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.algebra.structure)

    def _pm(self, x):
        return x * self.split.m_mask

    def _ph(self, x):
        return x * self.split.h_mask

    # -- Puttmann's formula ----------------------------------------------

    def puttmann_pairing(self, x, y, z, w) -> float:
        """<R(x,y)z, w> for x, y, z, w in m."""
        x, y, z, w = (self.to_m(v, n) for v, n in ((x, "x"), (y, "y"), (z, "z"), (w, "w")))
        met, br, pm = self.metric, self._br, self._pm
        i0 = lambda a, b: float(a @ met.q0 @ b)  # noqa: E731
        i1 = lambda a, b: float(a @ met.gram @ b)  # noqa: E731
        bm = lambda a, b: 0.5 * (br(met.phi @ a, b) + br(a, met.phi @ b))  # noqa: E731
        bp = lambda a, b: 0.5 * (br(a, met.phi @ b) + br(b, met.phi @ a))  # noqa: E731
        pinv = met.phi_inverse

        first = 0.5 * (i0(bm(x, y), br(z, w)) + i0(br(x, y), bm(z, w)))
        quarter = 0.25 * (i1(br(x, w), pm(br(y, z))) - i1(br(x, z), pm(br(y, w)))
                          - 2.0 * i1(br(x, y), pm(br(z, w))))
        plus = i0(bp(x, w), pinv(bp(y, z))) - i0(bp(x, z), pinv(bp(y, w)))
        return -(first + quarter + plus)

    @cached_property
    def tensor(self) -> np.ndarray:
        """R[i,j,k,l] = <R(b_i,b_j)b_k, b_l> on the basis (zero off m)."""
        met = self.metric
        return kernels.curvature_tensor(self.algebra.structure, met.q0, met.phi, met.phi_inv,
                                        met.gram, self.split.m_mask)

    def pairing(self, x, y, z, w) -> float:
        """Same as ``puttmann_pairing`` but contracted from ``tensor``."""
        x, y, z, w = (self.to_m(v, n) for v, n in ((x, "x"), (y, "y"), (z, "z"), (w, "w")))
        return float(np.einsum("ijkl,i,j,k,l->", self.tensor, x, y, z, w))

    def ruyy_pairing_expanded(self, u, y, w) -> float:
        """<R(u,y)y, w> via the expansion specialised to z = y.

        With ``w = u`` this is the sectional numerator; with ``w = X`` it is the
        term paired against the Kropina vector.
        """
        u, y, w = self.to_m(u, "u"), self.to_m(y, "y"), self.to_m(w, "w")
        met, br, pm = self.metric, self._br, self._pm
        phi, pinv = met.phi, met.phi_inverse
        i0 = lambda a, b: float(a @ met.q0 @ b)  # noqa: E731
        i1 = lambda a, b: float(a @ met.gram @ b)  # noqa: E731
        pu, py, pw = phi @ u, phi @ y, phi @ w
        return (-0.25 * (i0(br(pu, y) + br(u, py), br(y, w)) + i0(br(u, y), br(py, w) + br(y, pw)))
                - 0.75 * i1(br(y, u), pm(br(y, w)))
                - 0.5 * i0(br(u, pw) + br(w, pu), pinv(br(y, py)))
                + 0.25 * i0(br(u, py) + br(y, pu), pinv(br(y, pw) + br(w, py))))

    def ruyy_covector(self, u, y) -> np.ndarray:
        """Components <R(u,y)y, b_l> for every basis vector b_l."""
        u, y = self.to_m(u, "u"), self.to_m(y, "y")
        return np.einsum("ijkl,i,j,k->l", self.tensor, u, y, y)

    def curvature_vector(self, u, y) -> np.ndarray:
        """The vector R(u,y)y in m recovered from its pairings against m."""
        if self._gram_m_cho is None:
            return np.zeros(self.dim)
        rhs = self.ruyy_covector(u, y)[self._m]
        v = np.zeros(self.dim)
        v[self._m] = scipy.linalg.cho_solve(self._gram_m_cho, rhs)
        return v

    def sectional(self, u, y) -> float:
        u, y = self.to_m(u, "u"), self.to_m(y, "y")
        met = self.metric
        area = met.inner(u, u) * met.inner(y, y) - met.inner(u, y) ** 2
        return self.puttmann_pairing(u, y, y, u) / area

    # -- closed forms for special geometries -------------------------------

    def naturally_reductive_check(self, tol: float | None = None) -> Check:
        """max |<x,[z,y]_m> + <[z,x]_m,y>| over basis triples of m."""
        tol = self.tol if tol is None else tol
        m = self._m
        if not m:
            return Check.from_residual("naturally_reductive", 0.0, tol)
        cm = self.algebra.structure * self.split.m_mask
        a = np.einsum("zya,ax->zyx", cm[np.ix_(m, m, range(self.dim))], self.metric.gram[:, m])
        res = np.abs(a + a.transpose(0, 2, 1))
        return Check.from_residual("naturally_reductive", float(res.max()), tol)

    def naturally_reductive_R(self, u, y) -> np.ndarray:
        """1/4 [y,[u,y]_m]_m + [y,[u,y]_h]; meaningful only when naturally reductive."""
        u, y = self.to_m(u, "u"), self.to_m(y, "y")
        uy = self._br(u, y)
        return 0.25 * self._pm(self._br(y, self._pm(uy))) + self._br(y, self._ph(uy))

    def is_bi_invariant_group(self) -> bool:
        phi = self.metric.phi
        scalar = phi[0, 0] * np.eye(self.dim)
        return self.split.trivial and bool(np.allclose(phi, scalar, rtol=0.0, atol=1e-12))

    def bi_invariant_R(self, u, y) -> np.ndarray:
        """-1/4 [[u,y],y]; valid for a bi-invariant metric on a group.

        Any phi proportional to the identity (with trivial h) keeps the metric
        bi-invariant, so only other cases trigger the warning.
        """
        if not self.is_bi_invariant_group():
            warnings.warn("bi_invariant_R used on a model whose metric is not bi-invariant",
                          stacklevel=2)
        u, y = self.to_m(u, "u"), self.to_m(y, "y")
        return -0.25 * self._br(self._br(u, y), y)

    # -- Levi-Civita oracle (Lie group case) --------------------------------

    @cached_property
    def _gram_cho(self):
        return scipy.linalg.cho_factor(self.metric.gram)

    def koszul_nabla(self, u, v) -> np.ndarray:
        """nabla_u v for left-invariant fields, from
        2<nabla_u v, w> = <[u,v],w> - <[v,w],u> + <[w,u],v>."""
        if not self.split.trivial:
            raise UnsupportedModel("the Koszul oracle is only available when h is trivial")
        u = as_vector(u, self.dim, "u")
        v = as_vector(v, self.dim, "v")
        g = self.metric.gram
        a = self.algebra
        rhs = 0.5 * (g @ self._br(u, v) - a.ad(v).T @ (g @ u) - a.ad(u).T @ (g @ v))
        return scipy.linalg.cho_solve(self._gram_cho, rhs)

    def oracle_R(self, u, y, z=None) -> np.ndarray:
        """R(u,y)z (default z = y) from the definition with the Koszul connection."""
        z = y if z is None else z
        nab = self.koszul_nabla
        return nab(u, nab(y, z)) - nab(y, nab(u, z)) - nab(self._br(u, y), z)
