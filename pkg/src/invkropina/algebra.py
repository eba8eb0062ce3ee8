"""Finite-dimensional Lie algebras given by structure constants.

A vector is a plain 1-d float array of coordinates in the fixed basis
``b_0, ..., b_{n-1}``; ``structure[i, j, k]`` is the coefficient of ``b_k``
in ``[b_i, b_j]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, StructureError
from .report import PASS, Check, Report

DEFAULT_TOL = 1e-9


def as_vector(x, dim: int, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.shape[0] != dim:
        raise DimensionMismatch(f"{name} must have length {dim}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise StructureError(f"{name} has non-finite entries")
    return v


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    structure: np.ndarray
    basis_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        c = _frozen(self.structure)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] == 0:
            raise StructureError(f"structure constants must be an n x n x n array, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise StructureError("structure constants contain non-finite entries")
        if not np.array_equal(c, -c.transpose(1, 0, 2)):
            i, j, k = np.argwhere(c != -c.transpose(1, 0, 2))[0]
            raise StructureError(
                f"structure constants are not antisymmetric: c[{i}][{j}][{k}]={c[i, j, k]!r}, "
                f"c[{j}][{i}][{k}]={c[j, i, k]!r}"
            )
        object.__setattr__(self, "structure", c)
        if self.basis_labels is not None:
            labels = tuple(str(s) for s in self.basis_labels)
            if len(labels) != c.shape[0]:
                raise StructureError(f"expected {c.shape[0]} basis labels, got {len(labels)}")
            object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @classmethod
    def from_brackets(cls, dim, brackets, basis_labels=None):
        """Build from ``{(i, j): {k: value}}`` with antisymmetric completion.

        >>> su2 = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}})
        >>> su2.bracket([1, 0, 0], [0, 1, 0]).tolist()
        [0.0, 0.0, 1.0]
        """
        c = np.zeros((dim, dim, dim))
        for (i, j), coeffs in brackets.items():
            if i == j:
                raise StructureError(f"bracket of b_{i} with itself must vanish")
            for k, value in coeffs.items():
                c[i, j, k] = value
                c[j, i, k] = -value
        return cls(c, basis_labels)

    @classmethod
    def abelian(cls, dim):
        return cls(np.zeros((dim, dim, dim)))

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def label(self, i: int) -> str:
        return self.basis_labels[i] if self.basis_labels else f"b{i}"

    def vector(self, x) -> np.ndarray:
        return as_vector(x, self.dim)

    def bracket(self, x, y) -> np.ndarray:
        x = as_vector(x, self.dim, "x")
        y = as_vector(y, self.dim, "y")
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x, so that ``ad(x) @ y == bracket(x, y)``."""
        x = as_vector(x, self.dim, "x")
        return np.einsum("i,ijk->kj", x, self.structure)

    def direct_sum(self, other: "LieAlgebra") -> "LieAlgebra":
        n, m = self.dim, other.dim
        c = np.zeros((n + m,) * 3)
        c[:n, :n, :n] = self.structure
        c[n:, n:, n:] = other.structure
        labels = None
        if self.basis_labels or other.basis_labels:
            labels = tuple(self.label(i) for i in range(n)) + tuple(other.label(i) for i in range(m))
        return LieAlgebra(c, labels)


def check_jacobi(a: LieAlgebra, tol: float = DEFAULT_TOL) -> Check:
    """Largest Jacobi cyclic-sum component over all basis triples."""
    j = kernels.jacobi_tensor(a.structure)
    if j.size == 0:
        return Check("jacobi", PASS, 0.0, tol)
    idx = np.unravel_index(np.argmax(np.abs(j)), j.shape)
    residual = float(abs(j[idx]))
    detail = ""
    if residual > tol:
        i, k, l = idx[:3]
        detail = f"worst triple ({a.label(i)}, {a.label(k)}, {a.label(l)})"
    return Check.from_residual("jacobi", residual, tol, detail)


@dataclass(frozen=True, eq=False)
class ReductiveSplit:
    """Basis-aligned decomposition g = h + m."""

    dim: int
    h_indices: tuple[int, ...] = ()

    def __post_init__(self):
        h = tuple(sorted(int(i) for i in self.h_indices))
        if len(set(h)) != len(h):
            raise StructureError(f"duplicate h indices: {self.h_indices}")
        if any(i < 0 or i >= self.dim for i in h):
            raise StructureError(f"h indices out of range for dim {self.dim}: {h}")
        object.__setattr__(self, "h_indices", h)
        h_mask = np.zeros(self.dim)
        h_mask[list(h)] = 1.0
        h_mask.setflags(write=False)
        m_mask = 1.0 - h_mask
        m_mask.setflags(write=False)
        object.__setattr__(self, "h_mask", h_mask)
        object.__setattr__(self, "m_mask", m_mask)

    @property
    def m_indices(self) -> tuple[int, ...]:
        hs = set(self.h_indices)
        return tuple(i for i in range(self.dim) if i not in hs)

    @property
    def trivial(self) -> bool:
        return not self.h_indices

    def project_m(self, x) -> np.ndarray:
        return as_vector(x, self.dim) * self.m_mask

    def project_h(self, x) -> np.ndarray:
        return as_vector(x, self.dim) * self.h_mask

    def __eq__(self, other):
        if not isinstance(other, ReductiveSplit):
            return NotImplemented
        return self.dim == other.dim and self.h_indices == other.h_indices

    __hash__ = None


def check_split(a: LieAlgebra, s: ReductiveSplit, tol: float = DEFAULT_TOL) -> Report:
    """Subalgebra and [h, m] in m checks for a basis-aligned split."""
    if s.dim != a.dim:
        raise DimensionMismatch(f"split has dim {s.dim}, algebra has dim {a.dim}")
    c = a.structure
    h, m = list(s.h_indices), list(s.m_indices)
    report = Report()
    if not h:
        report.add(Check("split.subalgebra", PASS, 0.0, tol, "trivial h"))
        report.add(Check("split.invariance", PASS, 0.0, tol, "trivial h"))
        return report
    hh_to_m = np.abs(c[np.ix_(h, h, m)]) if m else np.zeros(1)
    res = float(hh_to_m.max()) if hh_to_m.size else 0.0
    report.add(Check.from_residual("split.subalgebra", res, tol, "" if res <= tol else "[h, h] leaves h"))
    hm_to_h = np.abs(c[np.ix_(h, m, h)]) if m else np.zeros(1)
    res = float(hm_to_h.max()) if hm_to_h.size else 0.0
    report.add(Check.from_residual("split.invariance", res, tol, "" if res <= tol else "[h, m] leaves m"))
    return report
