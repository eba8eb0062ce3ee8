"""Batched numeric kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``INVKROPINA_DISABLE_NUMBA``
is unset (or "0"). Both paths are always importable so they can be checked
against each other; ``BACKEND`` names the one the dispatchers use.

Kernels:

* ``curvature_tensor`` -- every Puttmann pairing <R(b_i,b_j)b_k,b_l> on the basis.
* ``flag_batch`` -- flag curvature of many orthonormal flags at once.
* ``jacobi_tensor`` -- cyclic sums [x,[y,z]] + [y,[z,x]] + [z,[x,y]] on basis triples.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrapper(f):
            return f

        return wrapper


def _env_disabled() -> bool:
    return os.environ.get("INVKROPINA_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"

# column layout of flag_batch output
FLAG_COLUMNS = ("beta_y", "u_x", "r_x", "r_u", "r_y", "k_direct", "k_theorem_consistent", "k_theorem_printed")


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------

def curvature_tensor_numpy(c, q0, phi, phi_inv, gram, m_mask):
    c = np.asarray(c, dtype=float)
    cm = c * m_mask[None, None, :]
    phi_b = np.einsum("ai,ajk->ijk", phi, c)  # [phi b_i, b_j]
    b_phi = np.einsum("bj,ibk->ijk", phi, c)  # [b_i, phi b_j]
    b_minus = 0.5 * (phi_b + b_phi)
    b_plus = 0.5 * (b_phi + b_phi.transpose(1, 0, 2))

    t = np.einsum("ija,ab,klb->ijkl", b_minus, q0, c)
    first = 0.5 * (t + t.transpose(2, 3, 0, 1))

    s = np.einsum("ija,ab,klb->ijkl", c, gram, cm)
    quarter = 0.25 * (np.einsum("iljk->ijkl", s) - np.einsum("ikjl->ijkl", s) - 2.0 * s)

    p = np.einsum("ija,ab,bc,klc->ijkl", b_plus, q0, phi_inv, b_plus)
    plus = np.einsum("iljk->ijkl", p) - np.einsum("ikjl->ijkl", p)

    r = -(first + quarter + plus)
    m = m_mask.astype(bool)
    r[~m] = 0.0
    r[:, ~m] = 0.0
    r[:, :, ~m] = 0.0
    r[:, :, :, ~m] = 0.0
    return r


def _gy_pair(a_yy, b, ya, yb, xa, xb, ab):
    # fundamental tensor of alpha^2/beta, expanded form
    return (4.0 * ya * yb * b * b + 2.0 * a_yy * b * b * ab
            - 4.0 * a_yy * b * (yb * xa + ya * xb) + 3.0 * a_yy * a_yy * xa * xb) / b ** 4


def flag_batch_numpy(r, gram, x, ys, us):
    ys = np.atleast_2d(ys)
    us = np.atleast_2d(us)
    p = np.einsum("ijkl,ni,nj,nk->nl", r, us, ys, ys)  # covector <R(U,Y)Y, .>
    gx = gram @ x
    gy = ys @ gram
    gu = us @ gram
    beta = ys @ gx
    ux = us @ gx
    yy = np.einsum("ni,ni->n", gy, ys)
    uu = np.einsum("ni,ni->n", gu, us)
    yu = np.einsum("ni,ni->n", gy, us)
    r_x = p @ x
    r_u = np.einsum("ni,ni->n", p, us)
    r_y = np.einsum("ni,ni->n", p, ys)

    g_ru = _gy_pair(yy, beta, r_y, yu, r_x, ux, r_u)
    g_yy = _gy_pair(yy, beta, yy, yy, beta, beta, yy)
    g_uu = _gy_pair(yy, beta, yu, yu, ux, ux, uu)
    g_yu = _gy_pair(yy, beta, yy, yu, beta, ux, yu)
    k_direct = g_ru / (g_yy * g_uu - g_yu ** 2)

    den = 2.0 * (ux / beta) ** 2 + 2.0
    k_cons = (3.0 * ux * r_x + 2.0 * beta ** 2 * r_u) / den
    k_print = (3.0 * ux * r_x + 2.0 * beta * r_u) / den
    return np.stack([beta, ux, r_x, r_u, r_y, k_direct, k_cons, k_print], axis=1)


def jacobi_tensor_numpy(c):
    c = np.asarray(c, dtype=float)
    t = np.einsum("jkl,ilm->ijkm", c, c)  # [b_i, [b_j, b_k]]
    return t + t.transpose(2, 0, 1, 3) + t.transpose(1, 2, 0, 3)


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

@njit(cache=True)
def _pair(a, q, b):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        if a[i] == 0.0:
            continue
        t = 0.0
        for j in range(n):
            t += q[i, j] * b[j]
        s += a[i] * t
    return s


@njit(cache=True)
def curvature_tensor_numba(c, q0, phi, phi_inv, gram, m_mask):
    n = c.shape[0]
    b_minus = np.zeros((n, n, n))
    b_plus = np.zeros((n, n, n))
    b_phi = np.zeros((n, n, n))
    phi_b = np.zeros((n, n, n))
    cm = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                cm[i, j, k] = c[i, j, k] * m_mask[k]
                s1 = 0.0
                s2 = 0.0
                for a in range(n):
                    s1 += phi[a, i] * c[a, j, k]
                    s2 += phi[a, j] * c[i, a, k]
                phi_b[i, j, k] = s1
                b_phi[i, j, k] = s2
    for i in range(n):
        for j in range(n):
            for k in range(n):
                b_minus[i, j, k] = 0.5 * (phi_b[i, j, k] + b_phi[i, j, k])
                b_plus[i, j, k] = 0.5 * (b_phi[i, j, k] + b_phi[j, i, k])

    # phi^{-1} applied to every B_+(b_k, b_l), pre-contracted with q0
    q0_pinv = q0 @ phi_inv
    t = np.zeros((n, n, n, n))
    s = np.zeros((n, n, n, n))
    p = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    t[i, j, k, l] = _pair(b_minus[i, j], q0, c[k, l])
                    s[i, j, k, l] = _pair(c[i, j], gram, cm[k, l])
                    p[i, j, k, l] = _pair(b_plus[i, j], q0_pinv, b_plus[k, l])

    r = np.zeros((n, n, n, n))
    for i in range(n):
        if m_mask[i] == 0.0:
            continue
        for j in range(n):
            if m_mask[j] == 0.0:
                continue
            for k in range(n):
                if m_mask[k] == 0.0:
                    continue
                for l in range(n):
                    if m_mask[l] == 0.0:
                        continue
                    first = 0.5 * (t[i, j, k, l] + t[k, l, i, j])
                    quarter = 0.25 * (s[i, l, j, k] - s[i, k, j, l] - 2.0 * s[i, j, k, l])
                    plus = p[i, l, j, k] - p[i, k, j, l]
                    r[i, j, k, l] = -(first + quarter + plus)
    return r


@njit(cache=True)
def _gy_pair_nb(a_yy, b, ya, yb, xa, xb, ab):
    return (4.0 * ya * yb * b * b + 2.0 * a_yy * b * b * ab
            - 4.0 * a_yy * b * (yb * xa + ya * xb) + 3.0 * a_yy * a_yy * xa * xb) / b ** 4


@njit(cache=True)
def flag_batch_numba(r, gram, x, ys, us):
    nrow = ys.shape[0]
    n = ys.shape[1]
    out = np.empty((nrow, 8))
    gx = gram @ x
    p = np.empty(n)
    for row in range(nrow):
        y = ys[row]
        u = us[row]
        for l in range(n):
            acc = 0.0
            for i in range(n):
                if u[i] == 0.0:
                    continue
                for j in range(n):
                    if y[j] == 0.0:
                        continue
                    w = u[i] * y[j]
                    for k in range(n):
                        acc += r[i, j, k, l] * w * y[k]
            p[l] = acc
        beta = 0.0
        ux = 0.0
        r_x = 0.0
        r_u = 0.0
        r_y = 0.0
        for i in range(n):
            beta += y[i] * gx[i]
            ux += u[i] * gx[i]
            r_x += p[i] * x[i]
            r_u += p[i] * u[i]
            r_y += p[i] * y[i]
        yy = _pair(y, gram, y)
        uu = _pair(u, gram, u)
        yu = _pair(y, gram, u)

        g_ru = _gy_pair_nb(yy, beta, r_y, yu, r_x, ux, r_u)
        g_yy = _gy_pair_nb(yy, beta, yy, yy, beta, beta, yy)
        g_uu = _gy_pair_nb(yy, beta, yu, yu, ux, ux, uu)
        g_yu = _gy_pair_nb(yy, beta, yy, yu, beta, ux, yu)

        den = 2.0 * (ux / beta) ** 2 + 2.0
        out[row, 0] = beta
        out[row, 1] = ux
        out[row, 2] = r_x
        out[row, 3] = r_u
        out[row, 4] = r_y
        out[row, 5] = g_ru / (g_yy * g_uu - g_yu * g_yu)
        out[row, 6] = (3.0 * ux * r_x + 2.0 * beta * beta * r_u) / den
        out[row, 7] = (3.0 * ux * r_x + 2.0 * beta * r_u) / den
    return out


@njit(cache=True)
def jacobi_tensor_numba(c):
    n = c.shape[0]
    t = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    cjk = c[j, k, l]
                    if cjk == 0.0:
                        continue
                    for m in range(n):
                        t[i, j, k, m] += cjk * c[i, l, m]
    out = np.empty((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for m in range(n):
                    out[i, j, k, m] = t[i, j, k, m] + t[j, k, i, m] + t[k, i, j, m]
    return out


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _use_numba(backend) -> bool:
    backend = backend or BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    return backend == "numba"


def curvature_tensor(c, q0, phi, phi_inv, gram, m_mask, backend=None):
    """All pairings R[i,j,k,l] = <R(b_i,b_j)b_k, b_l>, zero off m."""
    args = tuple(_f64(a) for a in (c, q0, phi, phi_inv, gram, m_mask))
    if _use_numba(backend):
        return curvature_tensor_numba(*args)
    return curvature_tensor_numpy(*args)


def flag_batch(r, gram, x, ys, us, backend=None):
    """Rows of FLAG_COLUMNS for orthonormal flags (ys[n], us[n])."""
    args = (_f64(r), _f64(gram), _f64(x), _f64(np.atleast_2d(ys)), _f64(np.atleast_2d(us)))
    if _use_numba(backend):
        return flag_batch_numba(*args)
    return flag_batch_numpy(*args)


def jacobi_tensor(c, backend=None):
    if _use_numba(backend):
        return jacobi_tensor_numba(_f64(c))
    return jacobi_tensor_numpy(_f64(c))
