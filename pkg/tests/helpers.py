"""Random generators and independent oracles shared by the tests."""
from __future__ import annotations

import math
import random
from itertools import product
from math import comb

import sympy as sp

from toricres.binomial_charts import make_state
from toricres.lattice_fan import RegularCone, standard_fan, star_subdivision


def rand_hypersurface(rng: random.Random, max_n: int = 5, max_beta: int = 6, max_exp: int = 3):
    """(r, m, alpha, beta, gamma) with disjoint supports and a primitive lattice vector."""
    while True:
        r = rng.randint(1, max_n)
        m = rng.randint(0, max_n - r)
        a, b = [0] * r, [0] * r
        for i in range(r):
            s = rng.random()
            if s < 0.4:
                a[i] = rng.randint(1, max_exp)
            elif s < 0.8:
                b[i] = rng.randint(1, max_exp)
        if sum(b) > max_beta or sum(a) == 0:
            continue
        g = [rng.randint(-2, 2) for _ in range(m)]
        if math.gcd(*([y - x for x, y in zip(a, b)] + g)) != 1:
            continue
        return r, m, tuple(a), tuple(b), tuple(g)


def hypersurface_state(r, m, a, b, g):
    return make_state(standard_fan(r + m, r), [([(a, b, g)], ())])


def rand_fan(rng: random.Random, n: int, steps: int):
    """Standard cone of Z^n refined by random star subdivisions."""
    fan = standard_fan(n)
    for _ in range(steps):
        cones = [c for c in fan.all_cones() if c.dim >= 2]
        delta = rng.choice(cones)
        fan, _ = star_subdivision(fan, delta)
    return fan


# ---------------------------------------------------------------- oracles

def substitution_oracle(alpha, beta, gamma, delta, i):
    """Total and strict transform of x^alpha - x^beta y^gamma by sympy substitution.

    y^gamma is cleared by a monomial shift so the result is a polynomial;
    the exceptional power is read off the expanded terms. Returns
    (total, strict), each a dict {coefficient: (x exponent, y exponent)}.
    """
    r, m = len(alpha), len(gamma)
    w = sp.symbols(f"w0:{r}")
    y = sp.symbols(f"y0:{m}") if m else ()
    shift = [max(0, -g) for g in gamma]
    xs = [w[j] * w[i] if (j in delta and j != i) else w[j] for j in range(r)]
    f = (sp.Mul(*[xs[j] ** alpha[j] for j in range(r)]) * sp.Mul(*[v ** s for v, s in zip(y, shift)])
         - sp.Mul(*[xs[j] ** beta[j] for j in range(r)])
         * sp.Mul(*[v ** (g + s) for v, g, s in zip(y, gamma, shift)]))
    P = sp.Poly(sp.expand(f), *w, *y)

    def read(poly):
        out = {}
        for mono, c in poly.terms():
            out[int(c)] = (tuple(mono[:r]), tuple(e - s for e, s in zip(mono[r:], shift)))
        return out

    total = read(P)
    k = min(mono[i] for mono, _ in P.terms())
    strict = sp.Poly(sp.cancel(P.as_expr() / w[i] ** k), *w, *y)
    return total, read(strict)


def staircase_brute(vertices, r, free, l):
    """Count (a, b) in N^r x N^free with |a| + |b| <= l and a above no vertex."""
    count = 0
    for a in product(range(l + 1), repeat=r):
        s = sum(a)
        if s > l:
            continue
        if any(all(x >= v for x, v in zip(a, vert)) for vert in vertices):
            continue
        count += comb(l - s + free, free)
    return count


def lattice_ideal_oracle(basis, q):
    """Reduced grevlex basis of the lattice ideal via sympy elimination of t."""
    x = sp.symbols(f"x0:{q}")
    t = sp.Symbol("t")
    gens = []
    for u in basis:
        pos = sp.Mul(*[x[k] ** max(v, 0) for k, v in enumerate(u)])
        neg = sp.Mul(*[x[k] ** max(-v, 0) for k, v in enumerate(u)])
        gens.append(pos - neg)
    gens.append(1 - t * sp.Mul(*x))
    G = sp.groebner(gens, t, *x, order="lex")
    elim = [g for g in G.exprs if not g.has(t)]
    return sp.groebner(elim, *x, order="grevlex") if elim else None, x
