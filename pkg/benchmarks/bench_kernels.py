#!/usr/bin/env python
"""Time the numba and numpy kernel backends against each other.

    python benchmarks/bench_kernels.py [--repeat 5] [--flags 20000]

Models are so(n) and R + so(n) with a random invariant metric. The first
numba call compiles, so it runs once before timing.
"""
import argparse
import time

import numpy as np

from invkropina import CurvatureContext, KropinaStructure, ReductiveSplit, random_phi
from invkropina import kernels
from invkropina.models import line, so_algebra


def build(n, central):
    a = so_algebra(n)
    if central:
        a = line("z").direct_sum(a)
    split = ReductiveSplit(a.dim)
    ctx = CurvatureContext(a, split, random_phi(n, a, split, (0.5, 2.0)))
    return ctx


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--flags", type=int, default=20000)
    args = ap.parse_args()

    print(f"{'model':<12s} {'dim':>4s} {'kernel':<18s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s} {'max diff':>9s}")
    for n, central in ((3, False), (4, False), (4, True), (5, False), (5, True)):
        ctx = build(n, central)
        met = ctx.metric
        targs = (ctx.algebra.structure, met.q0, met.phi, met.phi_inv, met.gram, ctx.split.m_mask)
        name = ("R+" if central else "") + f"so({n})"

        kernels.curvature_tensor(*targs, backend="numba")
        t_np = best_of(lambda: kernels.curvature_tensor(*targs, backend="numpy"), args.repeat)
        t_nb = best_of(lambda: kernels.curvature_tensor(*targs, backend="numba"), args.repeat)
        diff = np.abs(kernels.curvature_tensor(*targs, backend="numpy")
                      - kernels.curvature_tensor(*targs, backend="numba")).max()
        print(f"{name:<12s} {ctx.dim:>4d} {'curvature_tensor':<18s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} "
              f"{t_np / t_nb:8.1f} {diff:9.1e}")

        if central:
            x = np.zeros(ctx.dim)
            x[0] = 1.0
            ks = KropinaStructure(ctx, x)
            rng = np.random.default_rng(0)
            flags = [ks.random_flag(rng) for _ in range(args.flags)]
            ys = np.array([f.y for f in flags])
            us = np.array([f.u for f in flags])
            fargs = (ctx.tensor, met.gram, ks.x, ys, us)
            kernels.flag_batch(*fargs, backend="numba")
            t_np = best_of(lambda: kernels.flag_batch(*fargs, backend="numpy"), args.repeat)
            t_nb = best_of(lambda: kernels.flag_batch(*fargs, backend="numba"), args.repeat)
            diff = np.abs(kernels.flag_batch(*fargs, backend="numpy") - kernels.flag_batch(*fargs, backend="numba")).max()
            print(f"{name:<12s} {ctx.dim:>4d} {'flag_batch':<18s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} "
                  f"{t_np / t_nb:8.1f} {diff:9.1e}")

        c = ctx.algebra.structure
        kernels.jacobi_tensor(c, backend="numba")
        t_np = best_of(lambda: kernels.jacobi_tensor(c, backend="numpy"), args.repeat)
        t_nb = best_of(lambda: kernels.jacobi_tensor(c, backend="numba"), args.repeat)
        print(f"{name:<12s} {ctx.dim:>4d} {'jacobi_tensor':<18s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} "
              f"{t_np / t_nb:8.1f} {'':>9s}")


if __name__ == "__main__":
    main()
