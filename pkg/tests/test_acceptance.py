"""Acceptance run: one check per criterion, each against an independent oracle.

Run with pytest (a PASS/FAIL line per criterion is printed at the end) or
directly with `python tests/test_acceptance.py`.
"""
from __future__ import annotations

import random
import sys
import time
from itertools import combinations, product
from math import comb
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import (hypersurface_state, rand_fan, rand_hypersurface, staircase_brute,
                     substitution_oracle)
from toricres.binomial_charts import ChartBinomial, make_state, normalize
from toricres.blowup_transform import strict_transform, total_transform
from toricres.errors import ToricResError
from toricres.fibers import hasse_sets_agree, hs_fiber, jacobian_check, nu_mod_p
from toricres.hasse_hypersurface import global_invariant, resolve_hypersurface
from toricres.lattice_fan import is_regular, sample_support_points, standard_fan
from toricres.marked_monomial_general import (MarkedMonomialIdeal, order_reduce, resolve_general,
                                              support, support_points_agree)
from toricres.standard_basis_hs import (hs_at_distinguished, hs_from_diagram, is_smooth_chart,
                                        lattice_split, mixed_affine_hs)

RESULTS: dict = {}


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    return ok


def curve345():
    return make_state(standard_fan(3), [([((0, 2, 0), (1, 0, 1), ()), ((3, 0, 0), (0, 1, 1), ()),
                                          ((2, 1, 0), (0, 0, 2), ())], ())])


# ---------------------------------------------------------------- 1, 2

def criterion_1():
    st = hypersurface_state(3, 0, (2, 0, 0), (0, 1, 1), ())
    tr = resolve_hypersurface(st)
    want = {normalize((0, 0, 0), (0, 1, 1)), normalize((2, 0, 0), (0, 0, 1)),
            normalize((2, 0, 0), (0, 1, 0))}
    got = {I.binomials[0] for I in tr.final_state.ideals}
    ok = (len(tr.steps) == 1 and tr.steps[0].center_rays == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
          and got == want)
    return record(1, ok, f"{len(tr.steps)} step, charts {sorted(map(str, got))}")


def criterion_2():
    st = hypersurface_state(2, 0, (2, 0), (0, 3), ())
    tr = resolve_hypersurface(st)
    gamma = global_invariant(tr.final_state).triple.gamma_sigma_max
    want = {normalize((0, 0), (1, 3)), normalize((0, 1), (2, 0))}
    got = {I.binomials[0] for I in tr.final_state.ideals}
    ok = (len(tr.steps) == 1 and tr.steps[0].center_rays == ((1, 0), (0, 1))
          and gamma == 1 and got == want)
    return record(2, ok, f"{len(tr.steps)} step, final Gamma {gamma}")


# ---------------------------------------------------------------- 3

def criterion_3(cases=120):
    bad, longest = [], 0
    for s in range(cases):
        rng = random.Random(1000 + s)
        args = rand_hypersurface(rng, max_n=5, max_beta=6)
        tr = resolve_hypersurface(hypersurface_state(*args), max_steps=200)
        longest = max(longest, len(tr.steps))
        if not (tr.strictly_decreasing() and all(is_smooth_chart(I) for I in tr.final_state.ideals)):
            bad.append(args)
    return record(3, not bad, f"{cases} hypersurfaces, {len(bad)} failures, longest run {longest} steps")


# ---------------------------------------------------------------- 4

def criterion_4(cases=500):
    rng = random.Random(4)
    bad = 0
    for _ in range(cases):
        r, m, a, b, g = rand_hypersurface(rng)
        f = normalize(a, b, g)
        k = rng.randint(2, r) if r >= 2 else 1
        delta = tuple(sorted(rng.sample(range(r), k)))
        i = rng.choice(delta)
        total, strict = substitution_oracle(f.alpha, f.beta, f.gamma, delta, i)
        t = total_transform(f, delta, i)
        st = strict_transform(f, delta, i)
        (xp, yp), (xm, ym) = strict[1], strict[-1]
        same = (total[1] == (t.alpha, (0,) * m) and total[-1] == (t.beta, f.gamma)
                and normalize(xp, xm, tuple(v - u for u, v in zip(yp, ym))) == st)
        bad += not same
    return record(4, bad == 0, f"{cases} triples, {bad} mismatches")


# ---------------------------------------------------------------- 5

def criterion_5(cases=50):
    corpus = [ChartBinomial((2, 0, 0), (0, 1, 1), ()), ChartBinomial((2, 0), (0, 3), ()),
              ChartBinomial((3, 0, 0), (0, 2, 2), ()), normalize((0, 0, 2), (2, 0, 0), (1,))]
    rng = random.Random(5)
    while len(corpus) < cases:
        f = hypersurface_state(*rand_hypersurface(rng, max_n=4)).ideals[0].binomials[0]
        if f.d >= 2:
            corpus.append(f)
    bad, vanishing = 0, 0
    for f in corpus:
        for p in (2, 3):
            full = [z for z in product(*(range(v + 1) for v in f.alpha)) if 0 < sum(z) < f.d]
            vanishing += any(all(comb(e, x) % p == 0 for e, x in zip(f.alpha, z) if x) for z in full)
            bad += not hasse_sets_agree(f, p)[0]
    ok = bad == 0 and vanishing > 0
    return record(5, ok, f"{len(corpus)} binomials x p in {{2,3}}, {bad} mismatches, "
                         f"{vanishing} with a coefficient vanishing mod p")


# ---------------------------------------------------------------- 6

def _rand_chart_ideal(rng):
    r = rng.randint(2, 4)
    m = rng.randint(0, 5 - r)
    bins = []
    for _ in range(rng.randint(1, 2)):
        a, b = [0] * r, [0] * r
        for i in range(r):
            s = rng.random()
            if s < 0.35:
                a[i] = rng.randint(1, 3)
            elif s < 0.7:
                b[i] = rng.randint(1, 3)
        bins.append((tuple(a), tuple(b), tuple(rng.randint(-2, 2) for _ in range(m))))
    tor = [tuple(rng.randint(-2, 2) for _ in range(m))] if m and rng.random() < 0.3 else []
    I = make_state(standard_fan(r + m, r), [(bins, tor)]).ideals[0]
    if hs_at_distinguished(I).empty:
        raise ToricResError("distinguished point off X")
    return I


def criterion_6(cases=20, lmax=5):
    corpus = [curve345().ideals[0], hypersurface_state(3, 0, (2, 0, 0), (0, 1, 1), ()).ideals[0]]
    rng = random.Random(6)
    while len(corpus) < cases:
        try:
            corpus.append(_rand_chart_ideal(rng))
        except ToricResError:
            continue
    bad = 0
    curve_ok = hs_at_distinguished(corpus[0]).values(lmax) == tuple([1] + [3 * l + 1 for l in range(1, lmax + 1)])
    for I in corpus:
        h = hs_at_distinguished(I).values(lmax)
        nu = lattice_split(I).nu
        for p in (2, 3, 5):
            bad += hs_fiber(I, p, lmax) != h or nu_mod_p(I, p) != nu
    return record(6, bad == 0 and curve_ok,
                  f"{len(corpus)} chart ideals x p in {{2,3,5}}, {bad} mismatches, curve H(l)=3l+1: {curve_ok}")


# ---------------------------------------------------------------- 7

def _antichains(points):
    """All nonempty antichains of a finite set of exponent vectors."""
    pts = sorted(points)
    out = []

    def grow(start, chosen):
        for k in range(start, len(pts)):
            v = pts[k]
            if any(all(x <= y for x, y in zip(v, w)) or all(y <= x for x, y in zip(v, w)) for w in chosen):
                continue
            nxt = chosen + [v]
            out.append(nxt)
            grow(k + 1, nxt)
    grow(0, [])
    return out


def criterion_7(lmax=8):
    diagrams = []
    for r in (1, 2):
        pts = [v for v in product(range(6), repeat=r) if 0 < sum(v) <= 5]
        diagrams += [(r, d) for d in _antichains(pts)]
    for r in (3, 4):
        pts = [v for v in product(range(6), repeat=r) if 0 < sum(v) <= 5]
        diagrams += [(r, [v]) for v in pts]
    rng = random.Random(7)
    pts3 = [v for v in product(range(6), repeat=3) if 0 < sum(v) <= 5]
    diagrams += [(3, list(pair)) for pair in combinations(pts3, 2) if rng.random() < 0.3]
    for _ in range(200):
        r = rng.choice((3, 4))
        pts = [v for v in product(range(6), repeat=r) if 0 < sum(v) <= 5]
        diagrams.append((r, rng.sample(pts, rng.randint(2, 26))))
    bad = 0
    for r, verts in diagrams:
        free = len(verts) % 2
        for l in range(lmax + 1):
            bad += hs_from_diagram(verts, 0, free, l) != staircase_brute(verts, r, free, l)
    return record(7, bad == 0, f"{len(diagrams)} diagrams (all antichains for r <= 2), l <= {lmax}, "
                               f"{bad} mismatches")


# ---------------------------------------------------------------- 8

def criterion_8():
    ok = all(mixed_affine_hs(n, k) == comb(n + 1 + k, n + 1) >= comb(n + k, n) + k
             for n in range(1, 7) for k in range(1, 11))
    return record(8, ok, "1 <= n <= 6, 1 <= k <= 10")


# ---------------------------------------------------------------- 9

def criterion_9(cases=50, points=10_000):
    bad = 0
    for s in range(cases):
        rng = random.Random(900 + s)
        n = rng.randint(2, 4)
        fan = rand_fan(rng, n, rng.randint(1, 8))
        regular = all(is_regular(fan.ray_vectors(c)) for c in fan.maximal_cones)
        try:
            fan.check()
        except ToricResError:
            regular = False
        pts = sample_support_points(fan, points, np.random.default_rng(s))
        same = np.array_equal(fan.contains_points(pts), standard_fan(n).contains_points(pts))
        bad += not (regular and same)
    return record(9, bad == 0, f"{cases} fans x {points} points, {bad} failures")


# ---------------------------------------------------------------- 10

def criterion_10():
    tr = resolve_general(curve345())
    smooth = all(is_smooth_chart(I) for I in tr.final_state.ideals)
    jac = all(jacobian_check(I, p).ok for I in tr.final_state.ideals for p in (2, 3, 5))
    agree = True
    for args in [(3, 0, (2, 0, 0), (0, 1, 1), ()), (2, 0, (2, 0), (0, 3), ())]:
        st = hypersurface_state(*args)
        a, b = resolve_hypersurface(st), resolve_general(st)
        agree &= [s.center for s in a.steps] == [s.center for s in b.steps]
    return record(10, smooth and jac and agree,
                  f"curve: {len(tr.steps)} step(s), smooth {smooth}, Jacobian {jac}; "
                  f"agrees on E1/cusp {agree}")


# ---------------------------------------------------------------- 11

def criterion_11(cases=50):
    bad, longest = 0, 0
    for s in range(cases):
        rng = random.Random(1100 + s)
        n = rng.randint(2, 3)
        gens = []
        for _ in range(rng.randint(1, 3)):
            while True:
                g = tuple(rng.randint(0, 4) for _ in range(n))
                if 0 < sum(g) <= 6:
                    break
            gens.append(g)
        H = MarkedMonomialIdeal(standard_fan(n), tuple(gens), rng.randint(1, 4))
        tr = order_reduce(H)
        longest = max(longest, len(tr.steps))
        ok = support(tr.final).cones == () and all(
            support_points_agree(x, p) for x in tr.history for p in (2, 3))
        bad += not ok
    return record(11, bad == 0, f"{cases} marked ideals, {bad} failures, longest run {longest} steps")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("n", range(1, 12))
def test_criterion(n):
    try:
        ok = CRITERIA[n - 1]()
    except Exception as e:          # record before failing so the summary is complete
        record(n, False, f"{type(e).__name__}: {e}")
        raise
    assert ok, RESULTS[n][1]


def summary_lines():
    return [f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
            for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for k, fn in enumerate(CRITERIA, 1):
        t = time.time()
        try:
            fn()
        except Exception as e:
            record(k, False, f"{type(e).__name__}: {e}")
        print(summary_lines()[-1] if k in RESULTS else f"criterion {k}: no result",
              f"({time.time() - t:.1f}s)", flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
