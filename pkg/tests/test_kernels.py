"""Both kernel backends against plain-Python oracles and against each other."""
import json
import os
import random
import subprocess
import sys
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from toricres import kernels as K
from helpers import staircase_brute

ROOT = Path(__file__).resolve().parents[1]
needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba backend not active")


def rank_oracle(rows, p):
    a = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncol = len(a[0]) if a else 0
    while rank < len(a) and col < ncol:
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                c = a[i][col]
                a[i] = [(x - c * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def rand_matrix(rng, p):
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    return [[rng.randint(-3 * p, 3 * p) for _ in range(cols)] for _ in range(rows)]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_matches_oracle(p):
    rng = random.Random(p)
    for _ in range(200):
        m = rand_matrix(rng, p)
        want = rank_oracle(m, p)
        assert K.rank_mod_p(m, p) == want
        assert K._rank_mod_p_np(np.array(m), p) == want


def test_batch_rank():
    rng = random.Random(1)
    mats = np.array([[[rng.randint(0, 4) for _ in range(4)] for _ in range(3)] for _ in range(50)])
    got = K.batch_rank_mod_p(mats, 5)
    assert list(got) == [rank_oracle(m.tolist(), 5) for m in mats]


def test_eval_terms_matches_direct_evaluation():
    rng = random.Random(2)
    p = 5
    pts = K.fp_points(2, 1, p)
    polys = [[(rng.randint(-3, 3), (rng.randint(0, 3), rng.randint(0, 3), rng.randint(-2, 2)))
              for _ in range(rng.randint(1, 3))] for _ in range(6)]
    exps = [e for P in polys for _, e in P]
    coefs = [c for P in polys for c, _ in P]
    ptr = np.cumsum([0] + [len(P) for P in polys])
    got = K.eval_terms_mod_p(pts, exps, coefs, ptr, p)
    for i, x in enumerate(pts):
        for j, P in enumerate(polys):
            v = 0
            for c, e in P:
                t = c
                for xi, ei in zip(x, e):
                    t *= pow(int(xi), ei, p)
                v += t
            assert got[i, j] == v % p


def test_fp_points_counts():
    assert K.fp_points(2, 1, 3).shape == (18, 3)
    assert K.fp_points(0, 0, 3).shape == (1, 0)
    pts = K.fp_points(1, 1, 5)
    assert set(map(tuple, pts)) == set(product(range(5), range(1, 5)))


@pytest.mark.parametrize("seed", range(10))
def test_staircase_count_matches_brute(seed):
    rng = random.Random(seed)
    r, free = rng.randint(1, 3), rng.randint(0, 2)
    verts = [tuple(rng.randint(0, 3) for _ in range(r)) for _ in range(rng.randint(1, 4))]
    verts = [v for v in verts if sum(v)] or [(1,) * r]
    for l in range(6):
        want = staircase_brute(verts, r, free, l)
        assert K.staircase_count(verts, r, free, l) == want
        assert K._staircase_count_np(np.array(verts), r, free, l) == want


@needs_numba
def test_backends_agree():
    rng = random.Random(3)
    for p in (2, 3, 5):
        for _ in range(50):
            m = np.array(rand_matrix(rng, p), dtype=np.int64)
            assert K._rank_mod_p_nb(m, p) == K._rank_mod_p_np(m, p)
    pts = K.fp_points(3, 0, 3)
    exps = np.array([[1, 2, 0], [0, 0, 3], [2, 1, 1]], dtype=np.int64)
    coefs = np.array([1, -1, 2], dtype=np.int64)
    ptr = np.array([0, 2, 3], dtype=np.int64)
    assert np.array_equal(K._eval_terms_nb(pts, exps, coefs, ptr, 3),
                          K._eval_terms_np(pts, exps, coefs, ptr, 3))
    inv = np.array([[1, -1, 0], [0, 1, 0], [0, 0, 1]], dtype=np.int64)
    cube = np.array(list(product(range(-2, 3), repeat=3)), dtype=np.int64)
    for k in range(4):
        assert np.array_equal(K._cone_membership_nb(cube, inv, k), K._cone_membership_np(cube, inv, k))
    verts = np.array([[2, 0, 1], [0, 3, 0], [1, 1, 1]], dtype=np.int64)
    for l in range(8):
        assert K._staircase_count_nb(verts, 3, 1, l) == K._staircase_count_np(verts, 3, 1, l)


def test_pure_numpy_flag_gives_identical_cli_output():
    args = [sys.executable, "-m", "toricres", "resolve", "--input", str(ROOT / "data" / "e1.json")]
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, TORICRES_PURE_NUMPY=flag)
        outs.append(subprocess.run(args, capture_output=True, text=True, env=env, check=True).stdout)
    assert outs[0] == outs[1]
    env = dict(os.environ, TORICRES_PURE_NUMPY="1")
    backend = subprocess.run([sys.executable, "-c", "from toricres import kernels; print(kernels.BACKEND)"],
                             capture_output=True, text=True, env=env, check=True).stdout.strip()
    assert backend == "numpy"
    json.loads(outs[0])
