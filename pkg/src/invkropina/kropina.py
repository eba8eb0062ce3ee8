"""Invariant Kropina metrics F(y) = <y,y> / <X,y> and their flag curvature.

Three flag-curvature routes are kept side by side:

``k_direct``
    g_Y(R(U,Y)Y, U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2) with the fundamental
    tensor g_Y and the Riemannian curvature vector R(U,Y)Y.
``k_theorem_consistent``
    (3<U,X><R,X> + 2<Y,X>^2 <R,U>) / (2 (<U,X>/<Y,X>)^2 + 2) for an orthonormal
    flag; this is what the direct route reduces to.
``k_theorem_printed``
    the same with 2<Y,X><R,U> in the numerator, as the closed form is
    usually quoted. It agrees with the other two only when <Y,X> = 1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import as_vector
from .curvature import CurvatureContext
from .errors import DegenerateDirection, DegenerateFlag, StructureError, UnsupportedModel
from .report import FAIL, PASS, UNCHECKED, Check

# |<y,X>| >= DEGENERACY_RTOL * |y| |X| (norms of the induced metric)
DEGENERACY_RTOL = 1e-8
# relative step of the central-difference stencil; the Richardson pass
# cancels the h^2 term, so it can afford a larger base step
FD_RSTEP = 1e-4
FD_RSTEP_RICHARDSON = 3e-3
# linear independence floor used by Gram-Schmidt
INDEPENDENCE_RTOL = 1e-10
# denominator of the flag curvature, relative to g_Y(Y,Y) g_Y(U,U)
DENOMINATOR_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Flag:
    y: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))


@dataclass
class FlagCurvatureResult:
    flag: Flag
    beta_y: float
    u_x: float
    k_direct: float
    k_theorem_consistent: float
    k_theorem_printed: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def residual_consistent_vs_direct(self) -> float:
        return abs(self.k_theorem_consistent - self.k_direct)

    @property
    def residual_printed_vs_direct(self) -> float:
        return abs(self.k_theorem_printed - self.k_direct)

    @property
    def beta_negative(self) -> bool:
        return self.beta_y < 0

    def to_dict(self) -> dict:
        d = {
            "y": self.flag.y.tolist(),
            "u": self.flag.u.tolist(),
            "beta_y": self.beta_y,
            "u_x": self.u_x,
            "k_direct": self.k_direct,
            "k_theorem_consistent": self.k_theorem_consistent,
            "k_theorem_printed": self.k_theorem_printed,
            "residual_consistent_vs_direct": self.residual_consistent_vs_direct,
            "residual_printed_vs_direct": self.residual_printed_vs_direct,
            "beta_negative": self.beta_negative,
        }
        d["diagnostics"] = {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                            for k, v in self.diagnostics.items()}
        return d


class KropinaStructure:
    """An invariant metric together with the invariant vector X in m."""

    def __init__(self, ctx: CurvatureContext, x_field):
        self.ctx = ctx
        x = ctx.to_m(x_field, "x_field")
        tol = ctx.tol
        if not np.any(np.abs(x) > tol):
            raise StructureError("x_field must be nonzero")
        algebra = ctx.algebra
        for i in ctx.split.h_indices:
            r = float(np.abs(algebra.bracket(algebra.basis(i), x)).max())
            if r > tol:
                raise StructureError(
                    f"x_field is not invariant: |[{algebra.label(i)}, X]| = {r:.3e} > {tol:g}")
        self.x = x
        x.setflags(write=False)

    @property
    def metric(self):
        return self.ctx.metric

    @property
    def dim(self) -> int:
        return self.ctx.dim

    def beta(self, y) -> float:
        return self.metric.inner(y, self.x)

    def _admissible(self, y, name="y") -> float:
        y = as_vector(y, self.dim, name)
        b = self.beta(y)
        threshold = DEGENERACY_RTOL * self.metric.norm(y) * self.metric.norm(self.x)
        if not abs(b) >= threshold or threshold == 0.0:
            raise DegenerateDirection(
                f"<{name}, X> = {b:.3e} is below the degeneracy threshold {threshold:.3e}",
                beta=b, threshold=threshold)
        return b

    def F(self, y) -> float:
        b = self._admissible(y)
        return self.metric.inner(y, y) / b

    def F2(self, y) -> float:
        return self.F(y) ** 2

    def g_Y_exact(self, y, u, v) -> float:
        """Fundamental tensor g_y(u, v) in closed form."""
        self._admissible(y)
        g = self.metric.inner
        x = self.x
        yy, yx, ux, vx = g(y, y), g(y, x), g(u, x), g(v, x)
        yu, yv, uv = g(y, u), g(y, v), g(u, v)
        return ((2 * yu * yx - ux * yy) * (2 * yv * yx - vx * yy)
                + yy * (yx * (2 * uv * yx + 2 * yv * ux - 2 * vx * yu)
                        - 2 * ux * (2 * yv * yx - vx * yy))) / yx ** 4

    def fundamental_tensor(self, y) -> np.ndarray:
        """Matrix G with g_y(u, v) = u @ G @ v."""
        b = self._admissible(y)
        gram = self.metric.gram
        gy = gram @ y
        gx = gram @ self.x
        a = float(y @ gy)
        return (4 * b * b * np.outer(gy, gy) + 2 * a * b * b * gram
                - 4 * a * b * (np.outer(gy, gx) + np.outer(gx, gy))
                + 3 * a * a * np.outer(gx, gx)) / b ** 4

    def fd_step(self, y, richardson: bool = False) -> float:
        """Default stencil step, relative to |y| and shrunk near the hyperplane beta = 0."""
        ny = self.metric.norm(y)
        cos = abs(self.beta(y)) / (ny * self.metric.norm(self.x))
        return (FD_RSTEP_RICHARDSON if richardson else FD_RSTEP) * ny * min(1.0, cos)

    def g_Y_fd(self, y, u, v, step: float | None = None, richardson: bool = False) -> float:
        """g_y(u, v) as half the mixed central difference of F^2."""
        y = as_vector(y, self.dim, "y")
        u = as_vector(u, self.dim, "u")
        v = as_vector(v, self.dim, "v")
        self._admissible(y)
        h = self.fd_step(y, richardson) if step is None else float(step)

        def mixed(h):
            f = lambda p: self.F(p) ** 2  # noqa: E731
            return 0.5 * (f(y + h * u + h * v) - f(y + h * u - h * v)
                          - f(y - h * u + h * v) + f(y - h * u - h * v)) / (4 * h * h)

        d = mixed(h)
        if richardson:
            d = (4 * mixed(0.5 * h) - d) / 3
        return d

    # -- flags -----------------------------------------------------------

    def orthonormalize_flag(self, flag: Flag) -> Flag:
        """Gram-Schmidt in the induced metric, keeping the flagpole direction."""
        met = self.metric
        y = self.ctx.to_m(flag.y, "y")
        u = self.ctx.to_m(flag.u, "u")
        ny = met.norm(y)
        if ny == 0.0:
            raise DegenerateFlag("flagpole is zero", value=0.0, threshold=0.0)
        y1 = y / ny
        w = u - met.inner(u, y1) * y1
        nw, nu = met.norm(w), met.norm(u)
        threshold = INDEPENDENCE_RTOL * nu
        if nw <= threshold:
            raise DegenerateFlag(f"y and u are linearly dependent (|u_perp| = {nw:.3e})",
                                 value=nw, threshold=threshold)
        return Flag(y1, w / nw)

    def flag_curvature_direct(self, flag: Flag, r_vec, method: str = "exact",
                              step: float | None = None) -> float:
        """K = g_Y(R, U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2), with R = R(U,Y)Y given."""
        y, u = flag.y, flag.u
        r_vec = as_vector(r_vec, self.dim, "r_vec")
        if method == "exact":
            g = lambda a, b: self.g_Y_exact(y, a, b)  # noqa: E731
        elif method == "fd":
            g = lambda a, b: self.g_Y_fd(y, a, b, step=step, richardson=True)  # noqa: E731
        else:
            raise ValueError(f"unknown method {method!r}")
        gyy, guu, gyu = g(y, y), g(u, u), g(y, u)
        den = gyy * guu - gyu * gyu
        threshold = DENOMINATOR_RTOL * abs(gyy * guu)
        if not abs(den) > threshold:
            raise DegenerateFlag(f"flag-curvature denominator {den:.3e} collapsed",
                                 value=den, threshold=threshold)
        return g(r_vec, u) / den

    def _closed_forms(self, y, u, r_x, r_u):
        b = self.beta(y)
        a = self.metric.inner(u, self.x)
        den = 2 * (a / b) ** 2 + 2
        return b, a, (3 * a * r_x + 2 * b * b * r_u) / den, (3 * a * r_x + 2 * b * r_u) / den

    def flag_curvature_theorem(self, flag: Flag) -> FlagCurvatureResult:
        """Closed-form flag curvature (both variants) next to the direct route."""
        f = self.orthonormalize_flag(flag)
        y, u = f.y, f.u
        self._admissible(y)
        ctx = self.ctx
        r_x = ctx.puttmann_pairing(u, y, y, self.x)
        r_u = ctx.puttmann_pairing(u, y, y, u)
        r_y = ctx.puttmann_pairing(u, y, y, y)
        b, a, k_cons, k_print = self._closed_forms(y, u, r_x, r_u)
        r_vec = ctx.curvature_vector(u, y)
        k_direct = self.flag_curvature_direct(f, r_vec)
        return FlagCurvatureResult(
            flag=f, beta_y=b, u_x=a, k_direct=k_direct,
            k_theorem_consistent=k_cons, k_theorem_printed=k_print,
            diagnostics={"r_x": r_x, "r_u": r_u, "r_y": r_y, "r_vec": r_vec},
        )

    def flag_curvature_bi_invariant(self, flag: Flag, chain_tol: float = 1e-8) -> FlagCurvatureResult:
        """Closed form with R(U,Y)Y = -1/4 [[U,Y],Y] (bi-invariant group metric)."""
        ctx = self.ctx
        if not ctx.is_bi_invariant_group():
            warnings.warn("flag_curvature_bi_invariant used on a model whose metric is not bi-invariant",
                          stacklevel=2)
        f = self.orthonormalize_flag(flag)
        y, u = f.y, f.u
        self._admissible(y)
        g = self.metric.inner
        c = ctx.algebra.bracket(ctx.algebra.bracket(u, y), y)
        b, a = self.beta(y), g(u, self.x)
        den = 8 * (a / b) ** 2 + 8
        k_cons = (-3 * a * g(c, self.x) - 2 * b * b * g(c, u)) / den
        k_print = (-3 * a * g(c, self.x) - 2 * b * g(c, u)) / den
        k_direct = self.flag_curvature_direct(f, -0.25 * c)

        general = self.flag_curvature_theorem(f)
        chain = max(abs(general.k_theorem_consistent - k_cons), abs(general.k_theorem_printed - k_print))
        if chain > chain_tol:
            warnings.warn(f"bi-invariant and general closed forms disagree by {chain:.3e}", stacklevel=2)
        return FlagCurvatureResult(
            flag=f, beta_y=b, u_x=a, k_direct=k_direct,
            k_theorem_consistent=k_cons, k_theorem_printed=k_print,
            diagnostics={"theorem_chain_residual": chain},
        )

    def berwald_hypothesis_check(self, tol: float | None = None) -> Check:
        """Proxy for Chern = Levi-Civita: max_i |nabla_{b_i} X| must vanish."""
        ctx = self.ctx
        tol = ctx.tol if tol is None else tol
        if not ctx.split.trivial:
            warnings.warn("hypothesis check is unavailable for nontrivial h", stacklevel=2)
            return Check("hypothesis.nabla_X", UNCHECKED, None, tol, "nontrivial h")
        try:
            worst = max(self.metric.norm(ctx.koszul_nabla(ctx.algebra.basis(i), self.x))
                        for i in range(self.dim))
        except UnsupportedModel:  # pragma: no cover - guarded above
            return Check("hypothesis.nabla_X", UNCHECKED, None, tol)
        return Check("hypothesis.nabla_X", PASS if worst <= tol else FAIL, float(worst), tol)

    # -- sampling ----------------------------------------------------------

    def _m_orthonormal_basis(self):
        m = list(self.ctx.split.m_indices)
        gm = self.metric.gram[np.ix_(m, m)]
        lower = np.linalg.cholesky(gm)
        e = np.zeros((self.dim, len(m)))
        e[m, :] = np.linalg.inv(lower).T
        return e

    def random_flag(self, rng: np.random.Generator, min_cos: float = DEGENERACY_RTOL,
                    max_tries: int = 10_000) -> Flag:
        """Uniform orthonormal flag in m with |<Y,X>| >= min_cos |Y| |X|."""
        e = self._m_orthonormal_basis()
        k = e.shape[1]
        if k < 2:
            raise DegenerateFlag("m must be at least two-dimensional to carry a flag")
        nx = self.metric.norm(self.x)
        for _ in range(max_tries):
            y = e @ rng.standard_normal(k)
            y /= self.metric.norm(y)
            if abs(self.beta(y)) >= min_cos * nx:
                break
        else:  # pragma: no cover
            raise DegenerateDirection("could not sample an admissible flagpole")
        while True:
            try:
                return self.orthonormalize_flag(Flag(y, e @ rng.standard_normal(k)))
            except DegenerateFlag:  # pragma: no cover - measure zero
                continue



SCAN_COLUMNS = ("seed", "index", "y", "u", "beta_y", "k_direct", "k_theorem_consistent",
                "k_theorem_printed", "residual_consistent_vs_direct", "residual_printed_vs_direct")


@dataclass
class ScanRow:
    seed: int
    index: int
    y: np.ndarray
    u: np.ndarray
    beta_y: float
    k_direct: float
    k_theorem_consistent: float
    k_theorem_printed: float

    @property
    def residual_consistent_vs_direct(self) -> float:
        return abs(self.k_theorem_consistent - self.k_direct)

    @property
    def residual_printed_vs_direct(self) -> float:
        return abs(self.k_theorem_printed - self.k_direct)


def scan(ks: KropinaStructure, samples: int, seed: int, min_cos: float = DEGENERACY_RTOL,
         backend: str | None = None) -> list[ScanRow]:
    """Random orthonormal admissible flags evaluated in one batch.

    Row ``i`` draws from its own generator seeded with ``(seed, i)``, so rows
    do not depend on how many others are requested.
    """
    from . import kernels

    if samples <= 0:
        return []
    flags = [ks.random_flag(np.random.default_rng([seed, i]), min_cos=min_cos) for i in range(samples)]
    ys = np.array([f.y for f in flags])
    us = np.array([f.u for f in flags])
    out = kernels.flag_batch(ks.ctx.tensor, ks.metric.gram, ks.x, ys, us, backend=backend)
    col = {name: j for j, name in enumerate(kernels.FLAG_COLUMNS)}
    return [
        ScanRow(seed, i, ys[i], us[i], float(row[col["beta_y"]]), float(row[col["k_direct"]]),
                float(row[col["k_theorem_consistent"]]), float(row[col["k_theorem_printed"]]))
        for i, row in enumerate(out)
    ]
