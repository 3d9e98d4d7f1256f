"""Fiberwise checks over F_p by exhaustive point enumeration and linear algebra.

These are the independent oracles: they work from explicit polynomials and
never look at staircases or invariants.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import intmat
from .binomial_charts import ChartBinomial, ChartIdeal
from .groebner import lattice_ideal
from .hasse_hypersurface import hasse_coefficient, hasse_monomials
from .kernels import batch_rank_mod_p, eval_terms_mod_p, fp_points, rank_mod_p

Term = Tuple[int, Tuple[int, ...]]      # (coefficient, exponent over x then y)
Poly = List[Term]


def binomial_poly(f: ChartBinomial) -> Poly:
    return [(1, f.alpha + (0,) * f.m), (-1, f.beta + f.gamma)]


def laurent_generators(ideal: ChartIdeal) -> List[Poly]:
    """Binomials generating the lattice ideal of the chart in k[x, y^±].

    Torus relations 1 - y^g for a basis of L_y, plus x^{u+} - x^{u-} y^{g(u)}
    for generators of the lattice ideal of L_x, with any lift g(u).
    """
    from .standard_basis_hs import lattice_split
    split = lattice_split(ideal)
    r, m = split.r, split.m
    polys: List[Poly] = []
    for g in split.ly:
        polys.append([(1, (0,) * (r + m)), (-1, (0,) * r + tuple(g))])
    for a, b in lattice_ideal(split.lx, r):
        u = tuple(y - x for x, y in zip(a, b))
        polys.append([(1, tuple(a) + (0,) * m), (-1, tuple(b) + split.lift(u))])
    return polys


def _pack(polys: Sequence[Poly], q: int):
    exps, coefs, ptr = [], [], [0]
    for P in polys:
        for c, e in P:
            exps.append(e)
            coefs.append(c)
        ptr.append(len(exps))
    return (np.array(exps, dtype=np.int64).reshape(-1, q), np.array(coefs, dtype=np.int64),
            np.array(ptr, dtype=np.int64))


def evaluate(polys: Sequence[Poly], points: np.ndarray, p: int) -> np.ndarray:
    q = points.shape[1]
    if not polys:
        return np.zeros((len(points), 0), dtype=np.int64)
    exps, coefs, ptr = _pack(polys, q)
    return eval_terms_mod_p(points, exps, coefs, ptr, p)


def zero_set(polys: Sequence[Poly], points: np.ndarray, p: int) -> np.ndarray:
    vals = evaluate(polys, points, p)
    return np.all(vals == 0, axis=1)


def derivative(P: Poly, k: int) -> Poly:
    out = []
    for c, e in P:
        if e[k]:
            f = list(e)
            f[k] -= 1
            out.append((c * e[k], tuple(f)))
    return out


@dataclass(frozen=True)
class JacobianReport:
    p: int
    points_on_x: int
    singular_points: int
    expected_rank: int

    @property
    def ok(self) -> bool:
        return self.singular_points == 0


def jacobian_check(ideal: ChartIdeal, p: int) -> JacobianReport:
    """Rank of the Jacobian at every F_p-point of X on the chart.

    Smooth in the fiber at a point iff the rank mod p equals the codimension
    rank L (the lattice is saturated, so the codimension is the same in
    every fiber).
    """
    r, m = ideal.nx, ideal.ny
    q = r + m
    gens = laurent_generators(ideal)
    expected = intmat.rank(ideal.lattice_rows()) if ideal.lattice_rows() else 0
    pts = fp_points(r, m, p)
    on = zero_set(gens, pts, p) if gens else np.ones(len(pts), dtype=bool)
    pts_on = pts[on]
    if len(pts_on) == 0 or not gens:
        return JacobianReport(p, int(len(pts_on)), 0, expected)
    derivs = [derivative(P, k) for P in gens for k in range(q)]
    flat = [d if d else [(0, (0,) * q)] for d in derivs]
    vals = evaluate(flat, pts_on, p).reshape(len(pts_on), len(gens), q)
    ranks = batch_rank_mod_p(vals, p)
    return JacobianReport(p, int(len(pts_on)), int(np.sum(ranks != expected)), expected)


# ---------------------------------------------------------------- Hasse sets

def hasse_derivative_polys(f: ChartBinomial, p: int) -> List[Poly]:
    """f and its Hasse derivatives of order < d in all variables, coefficients mod p.

    The unit variables count too: y^g has k-th Hasse derivative C(g, k) y^(g-k),
    with the generalized binomial for negative g.
    """
    r, m, d = f.r, f.m, f.d
    out = [binomial_poly(f)]
    terms = [(1, f.alpha, (0,) * m), (-1, f.beta, f.gamma)]
    x_orders = [z for z in product(*(range(max(a, b) + 1) for a, b in zip(f.alpha, f.beta)))
                if sum(z) < d]
    for zx in x_orders:
        for zy in product(range(d - sum(zx)), repeat=m):
            if not 0 < sum(zx) + sum(zy) < d:
                continue
            P = []
            for sign, ex, ey in terms:
                if any(z > e for z, e in zip(zx, ex)):
                    continue
                c = hasse_coefficient(ex, zx)
                for g, k in zip(ey, zy):
                    c *= _gen_binom(g, k)
                if c % p:
                    P.append(((sign * c) % p, tuple(e - z for e, z in zip(ex, zx))
                              + tuple(g - k for g, k in zip(ey, zy))))
            if P:
                out.append(P)
    return out


def hasse_monomial_polys(f: ChartBinomial) -> List[Poly]:
    out = [binomial_poly(f)]
    for h in hasse_monomials(f):
        out.append([(1, h.exponents + (0,) * f.m)])
    return out


def hasse_sets_agree(f: ChartBinomial, p: int) -> Tuple[bool, int]:
    """Compare the two vanishing sets on all F_p points; also return their size."""
    pts = fp_points(f.r, f.m, p)
    a = zero_set(hasse_derivative_polys(f, p), pts, p)
    b = zero_set(hasse_monomial_polys(f), pts, p)
    return bool(np.array_equal(a, b)), int(a.sum())


# ---------------------------------------------------------------- HS by linear algebra

def _monomials(q: int, deg: int) -> List[Tuple[int, ...]]:
    out = []
    for d in range(deg + 1):
        for c in combinations_with_replacement(range(q), d):
            e = [0] * q
            for k in c:
                e[k] += 1
            out.append(tuple(e))
    return out


def _gen_binom(g: int, k: int) -> int:
    num = 1
    for j in range(k):
        num *= g - j
    den = 1
    for j in range(1, k + 1):
        den *= j
    return num // den


def _shift_poly(P: Poly, r: int, m: int, deg: int, p: int) -> Dict[Tuple[int, ...], int]:
    """P with y = 1 + Y expanded in k[x, Y], truncated above total degree deg."""
    out: Dict[Tuple[int, ...], int] = {}
    for c, e in P:
        x, g = e[:r], e[r:]
        dx = sum(x)
        if dx > deg:
            continue
        # product over y-variables of sum_k C(g_j, k) Y_j^k
        acc = {(): c % p}
        for gj in g:
            nxt: Dict[Tuple[int, ...], int] = {}
            for key, v in acc.items():
                used = dx + sum(key)
                for k in range(deg - used + 1):
                    cc = (v * _gen_binom(gj, k)) % p
                    if cc:
                        nxt[key + (k,)] = (nxt.get(key + (k,), 0) + cc) % p
            acc = nxt
        for key, v in acc.items():
            full = tuple(x) + key
            out[full] = (out.get(full, 0) + v) % p
    return {k: v for k, v in out.items() if v}


def hs_fiber(ideal: ChartIdeal, p: int, lmax: int) -> Tuple[int, ...]:
    """H(0..lmax) of the fiber over F_p at the distinguished point.

    H(l) = dim k[x, Y] / (I + m^{l+1}) with Y = y - 1, computed as the
    number of monomials of degree <= l minus the rank of the truncated
    products monomial * generator.
    """
    r, m = ideal.nx, ideal.ny
    q = r + m
    gens = laurent_generators(ideal)
    shifted = [_shift_poly(P, r, m, lmax, p) for P in gens]
    values = []
    for l in range(lmax + 1):
        cols = _monomials(q, l)
        index = {e: i for i, e in enumerate(cols)}
        rows = []
        for G in shifted:
            if not G:
                continue
            low = min(sum(e) for e in G)
            for mu in _monomials(q, l - low) if low <= l else []:
                row = np.zeros(len(cols), dtype=np.int64)
                hit = False
                for e, v in G.items():
                    t = tuple(a + b for a, b in zip(e, mu))
                    j = index.get(t)
                    if j is not None:
                        row[j] = (row[j] + v) % p
                        hit = True
                if hit:
                    rows.append(row)
        rk = rank_mod_p(np.array(rows), p) if rows else 0
        values.append(len(cols) - rk)
    return tuple(values)


def nu_mod_p(ideal: ChartIdeal, p: int) -> int:
    from .standard_basis_hs import lattice_split
    ly = lattice_split(ideal).ly
    return rank_mod_p(np.array(ly, dtype=np.int64), p) if ly else 0


# ---------------------------------------------------------------- combined report

MAX_POINTS = 200_000


def singular_points_agree(ideal: ChartIdeal, p: int) -> Tuple[bool, int, int]:
    """Jacobian-singular F_p points vs the orbit-wise smoothness prediction.

    A point with zero set S is predicted singular iff the chart localized at
    the variables outside S is not smooth. Returns (agree, found, predicted).
    """
    from .binomial_charts import restrict_positions
    from .standard_basis_hs import is_smooth_chart
    r, m = ideal.nx, ideal.ny
    gens = laurent_generators(ideal)
    pts = fp_points(r, m, p)
    on = zero_set(gens, pts, p) if gens else np.ones(len(pts), dtype=bool)
    pts = pts[on]
    if not len(pts):
        return True, 0, 0
    q = r + m
    expected = intmat.rank(ideal.lattice_rows()) if ideal.lattice_rows() else 0
    if gens:
        derivs = [derivative(P, k) or [(0, (0,) * q)] for P in gens for k in range(q)]
        vals = evaluate(derivs, pts, p).reshape(len(pts), len(gens), q)
        found = batch_rank_mod_p(vals, p) != expected
    else:
        found = np.zeros(len(pts), dtype=bool)
    cache: Dict[Tuple[int, ...], bool] = {}
    predicted = np.zeros(len(pts), dtype=bool)
    for j, row in enumerate(pts[:, :r]):
        S = tuple(int(i) for i in np.flatnonzero(row == 0))
        if S not in cache:
            cache[S] = not is_smooth_chart(restrict_positions(ideal, S))
        predicted[j] = cache[S]
    return bool(np.array_equal(found, predicted)), int(found.sum()), int(predicted.sum())


def fiber_report(state, primes: Sequence[int], lmax: int = 4) -> Dict:
    """All fiberwise checks for every chart and prime, as a JSON-ready dict."""
    from .standard_basis_hs import hs_at_distinguished, lattice_split
    charts = []
    ok = True
    for k, I in enumerate(state.ideals):
        nu = lattice_split(I).nu
        h = hs_at_distinguished(I)
        expected_hs = list(h.values(lmax)) if not h.empty else None
        per = []
        for p in primes:
            size = p ** I.nx * (p - 1) ** I.ny
            entry: Dict = {"p": p}
            entry["nu_stable"] = nu_mod_p(I, p) == nu
            if size <= MAX_POINTS:
                agree, found, pred = singular_points_agree(I, p)
                entry["singular_points"] = found
                entry["jacobian_agrees"] = agree
                if len(I.binomials) == 1 and I.binomials[0].d >= 1:
                    entry["hasse_sets_agree"] = hasse_sets_agree(I.binomials[0], p)[0]
            else:
                entry["skipped"] = "too many points"
            if expected_hs is not None and I.nx + I.ny <= 5:
                entry["hs_agrees"] = list(hs_fiber(I, p, lmax)) == expected_hs
            entry["ok"] = all(v for key, v in entry.items() if isinstance(v, bool))
            ok &= entry["ok"]
            per.append(entry)
        charts.append({"chart": k, "nu": nu, "primes": per})
    return {"ok": bool(ok), "charts": charts}
