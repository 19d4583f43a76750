"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py --repeat 3

Both implementations run in the same process (the ``impl`` argument selects
the path), and each result is checked against the other before timing is
reported.  The first numba call of each kernel is a warm-up and is excluded.
"""
import argparse
import time

import numpy as np

from gforms import forms as fo
from gforms import groups as gr
from gforms import hermitian as he
from gforms import kernels
from gforms.algebra import matrix_algebra
from gforms.field import make_field


def isometry_workload():
    # the regular form of S3 over F_5 against its nonsquare multiple: the two
    # are isometric, but the search visits many candidates before the witness
    G = gr.catalog_group("S3")
    F = make_field(5)
    X = fo.regular_form(G, F)
    Y = fo.scale_form(X, F.nonsquare)
    H = fo.hom_basis(X.module, Y.module)

    def run(impl):
        status, phi, visited = kernels.isometry_search(F, H, X.gram, Y.gram, 1 << 24, impl)
        return status, visited
    return "isometry_search (S3 regular, F5)", run


def invertible_workload():
    F = make_field(7)
    mats = np.random.default_rng(0).integers(0, 7, size=(20000, 5, 5))

    def run(impl):
        return int(kernels.batch_invertible(F, mats, impl).sum())
    return "batch_invertible (20000 5x5, F7)", run


def orbits_workload():
    E = matrix_algebra(make_field(7), 2, "transpose")

    def run(impl):
        cs = he.class_set_exhaustive(E, 1, impl=impl)
        return cs.count, int(cs.labels.sum())
    return "hermitian_orbits (M2(F7), transpose)", run


def timed(fn, impl, repeat):
    best, out = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(impl)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':42s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, fn in (isometry_workload(), invertible_workload(), orbits_workload()):
        fn("numba")  # compile
        t_np, r_np = timed(fn, "numpy", args.repeat)
        t_nb, r_nb = timed(fn, "numba", args.repeat)
        if r_np != r_nb:
            raise SystemExit(f"{name}: results differ ({r_np} vs {r_nb})")
        print(f"{name:42s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
