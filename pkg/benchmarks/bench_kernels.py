"""Time each kernel under numba and under plain numpy, and check they agree.

    python benchmarks/bench_kernels.py [--repeat N]

The numba timings exclude the first (compiling) call.
"""
import argparse
import time
from itertools import product

import numpy as np

from toricres import kernels as K


def cases(rng):
    mats = rng.integers(0, 7, size=(2000, 6, 8))
    pts = K.fp_points(4, 1, 5)
    exps = rng.integers(0, 4, size=(40, 5))
    exps[:, 4] -= 2
    coefs = rng.integers(-3, 4, size=40)
    ptr = np.arange(0, 41, 4)
    inv = np.array([[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    cube = np.array(list(product(range(-6, 7), repeat=4)))
    verts = rng.integers(0, 5, size=(30, 4))
    return {
        "batch_rank_mod_p": (lambda nb: (K._batch_rank_nb if nb else K._batch_rank_np)(mats, 7)),
        "eval_terms_mod_p": (lambda nb: (K._eval_terms_nb if nb else K._eval_terms_np)(pts, exps, coefs, ptr, 5)),
        "cone_membership": (lambda nb: (K._cone_membership_nb if nb else K._cone_membership_np)(cube, inv, 3)),
        "staircase_count": (lambda nb: (K._staircase_count_nb if nb else K._staircase_count_np)(verts, 4, 1, 10)),
    }


def best_of(fn, repeat):
    out = None
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        print("numba backend is off (not installed or TORICRES_PURE_NUMPY=1); nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy s':>12}{'numba s':>12}{'speedup':>10}  same")
    for name, run in cases(rng).items():
        run(True)
        t_nb, a = best_of(lambda: run(True), args.repeat)
        t_np, b = best_of(lambda: run(False), args.repeat)
        same = np.array_equal(np.asarray(a), np.asarray(b))
        print(f"{name:<20}{t_np:>12.4f}{t_nb:>12.4f}{t_np / max(t_nb, 1e-9):>10.1f}  {same}")


if __name__ == "__main__":
    main()
