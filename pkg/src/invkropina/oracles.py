"""Cross-checks between independent evaluation routes for one model.

Every applicable pairing is evaluated on seeded random inputs and reported
as a residual against a tolerance:

=================================  ===========================================  =========
pairing                            applies when                                 default
=================================  ===========================================  =========
fundamental_tensor.exact_vs_fd     X present                                    1e-6 rel
curvature.pairing_vs_tensor        always                                       1e-10
curvature.expansion_vs_pairing     always                                       1e-10
curvature.puttmann_vs_koszul       h trivial                                    1e-9
curvature.nat_reductive_vs_puttm   naturally reductive                          1e-10
curvature.bi_invariant_vs_koszul   bi-invariant group metric                    1e-10
flag.consistent_vs_direct          X present                                    1e-8
flag.bi_invariant_vs_theorem       X present, bi-invariant group metric         1e-10
flag.batch_vs_scalar               X present                                    1e-10
flag.printed_vs_direct             X present; gated only by printed_tolerance   (info)
=================================  ===========================================  =========
"""
from __future__ import annotations

import warnings

import numpy as np

from .curvature import CurvatureContext
from .kropina import DEGENERACY_RTOL, Flag, KropinaStructure, scan
from .report import INFO, PASS, Check, Report

DEFAULT_TOLERANCES = {
    "fundamental_tensor.exact_vs_fd": 1e-6,
    "curvature.pairing_vs_tensor": 1e-10,
    "curvature.expansion_vs_pairing": 1e-10,
    "curvature.puttmann_vs_koszul": 1e-9,
    "curvature.nat_reductive_vs_puttmann": 1e-10,
    "curvature.bi_invariant_vs_koszul": 1e-10,
    "flag.consistent_vs_direct": 1e-8,
    "flag.bi_invariant_vs_theorem": 1e-10,
    "flag.batch_vs_scalar": 1e-10,
}


def m_orthonormal_basis(ctx: CurvatureContext) -> np.ndarray:
    """Columns form an orthonormal basis of m for the induced metric."""
    m = list(ctx.split.m_indices)
    lower = np.linalg.cholesky(ctx.metric.gram[np.ix_(m, m)])
    e = np.zeros((ctx.dim, len(m)))
    e[m, :] = np.linalg.inv(lower).T
    return e


def random_m_vectors(ctx: CurvatureContext, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` unit vectors of m, uniform on the induced unit sphere."""
    e = m_orthonormal_basis(ctx)
    v = rng.standard_normal((count, e.shape[1])) @ e.T
    norms = np.sqrt(np.einsum("ni,ij,nj->n", v, ctx.metric.gram, v))
    return v / norms[:, None]


def gy_relative_error(ks: KropinaStructure, y, u, v, step=None) -> float:
    """|exact - fd| scaled by sqrt(g_y(u,u) g_y(v,v)), which bounds |g_y(u,v)|."""
    exact = ks.g_Y_exact(y, u, v)
    fd = ks.g_Y_fd(y, u, v, step=step)
    scale = np.sqrt(abs(ks.g_Y_exact(y, u, u) * ks.g_Y_exact(y, v, v)))
    return abs(exact - fd) / max(scale, abs(exact), 1e-300)


def _vec_residual(a, b) -> float:
    return float(np.abs(a - b).max() / max(1.0, np.abs(b).max()))


def _tol(name, tolerance):
    return DEFAULT_TOLERANCES[name] if tolerance is None else tolerance


def compare_model(spec, samples: int = 50, seed: int = 0, tolerance: float | None = None,
                  printed_tolerance: float | None = None, step: float | None = None) -> Report:
    """Run every applicable oracle pairing for ``spec`` (a ModelSpec)."""
    ctx = spec.context()
    rng = np.random.default_rng(seed)
    report = Report()
    has_m = len(ctx.split.m_indices) > 0
    if not has_m:
        return report

    # curvature pairings
    vecs = random_m_vectors(ctx, rng, 4 * samples).reshape(samples, 4, ctx.dim)
    res = max((abs(ctx.puttmann_pairing(*q) - ctx.pairing(*q)) for q in vecs), default=0.0)
    report.add(Check.from_residual("curvature.pairing_vs_tensor", res,
                                   _tol("curvature.pairing_vs_tensor", tolerance)))
    res = max((abs(ctx.ruyy_pairing_expanded(u, y, w) - ctx.puttmann_pairing(u, y, y, w))
               for u, y, w, _ in vecs), default=0.0)
    report.add(Check.from_residual("curvature.expansion_vs_pairing", res,
                                   _tol("curvature.expansion_vs_pairing", tolerance)))

    pairs = vecs[:, :2, :]
    if ctx.split.trivial:
        res = max((_vec_residual(ctx.curvature_vector(u, y), ctx.oracle_R(u, y)) for u, y in pairs), default=0.0)
        report.add(Check.from_residual("curvature.puttmann_vs_koszul", res,
                                       _tol("curvature.puttmann_vs_koszul", tolerance)))
    if ctx.naturally_reductive_check().status == PASS:
        res = max((_vec_residual(ctx.naturally_reductive_R(u, y), ctx.curvature_vector(u, y))
                   for u, y in pairs), default=0.0)
        report.add(Check.from_residual("curvature.nat_reductive_vs_puttmann", res,
                                       _tol("curvature.nat_reductive_vs_puttmann", tolerance)))
    bi_inv = ctx.is_bi_invariant_group()
    if bi_inv:
        res = max((_vec_residual(ctx.bi_invariant_R(u, y), ctx.oracle_R(u, y)) for u, y in pairs), default=0.0)
        report.add(Check.from_residual("curvature.bi_invariant_vs_koszul", res,
                                       _tol("curvature.bi_invariant_vs_koszul", tolerance)))

    if spec.x_field is None or len(ctx.split.m_indices) < 2:
        return report
    ks = KropinaStructure(ctx, spec.x_field)

    # fundamental tensor
    worst = 0.0
    for _ in range(samples):
        y = ks.random_flag(rng, min_cos=DEGENERACY_RTOL).y
        u, v = random_m_vectors(ctx, rng, 2)
        worst = max(worst, gy_relative_error(ks, y, u, v, step=step))
    report.add(Check.from_residual("fundamental_tensor.exact_vs_fd", worst,
                                   _tol("fundamental_tensor.exact_vs_fd", tolerance), "relative"))

    # flag curvature routes
    flags = [ks.random_flag(rng) for _ in range(samples)]
    results = [ks.flag_curvature_theorem(f) for f in flags]
    res = max(r.residual_consistent_vs_direct for r in results)
    report.add(Check.from_residual("flag.consistent_vs_direct", res,
                                   _tol("flag.consistent_vs_direct", tolerance)))
    if bi_inv:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bis = [ks.flag_curvature_bi_invariant(f) for f in flags]
        res = max(max(abs(b.k_theorem_consistent - r.k_theorem_consistent),
                      abs(b.k_theorem_printed - r.k_theorem_printed)) for b, r in zip(bis, results))
        report.add(Check.from_residual("flag.bi_invariant_vs_theorem", res,
                                       _tol("flag.bi_invariant_vs_theorem", tolerance)))
    rows = scan(ks, samples, seed)
    res = 0.0
    for row in rows:
        r = ks.flag_curvature_theorem(Flag(row.y, row.u))
        res = max(res, abs(r.k_direct - row.k_direct), abs(r.k_theorem_consistent - row.k_theorem_consistent),
                  abs(r.k_theorem_printed - row.k_theorem_printed))
    report.add(Check.from_residual("flag.batch_vs_scalar", res, _tol("flag.batch_vs_scalar", tolerance)))

    res = max(r.residual_printed_vs_direct for r in results)
    if printed_tolerance is None:
        report.add(Check("flag.printed_vs_direct", INFO, res, None,
                         "closed form as printed; differs unless <Y,X> = 1"))
    else:
        report.add(Check.from_residual("flag.printed_vs_direct", res, printed_tolerance))
    return report

