"""Buchberger's algorithm specialised to pure difference binomials x^a - x^b.

Every S-polynomial of two such binomials is again one, and reducing a
monomial by a binomial basis yields a monomial, so the whole computation is
exponent arithmetic. Coefficients are always +-1, hence results do not
depend on the characteristic.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import intmat

Exp = Tuple[int, ...]
Binom = Tuple[Exp, Exp]          # (lead, tail), lead > tail
Key = Callable[[Exp], tuple]


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def grevlex_key(last: int | None = None) -> Key:
    """Degree reverse lex; `last` names the variable made smallest."""
    def key(e: Exp) -> tuple:
        if last is None:
            order = list(range(len(e)))
        else:
            order = [i for i in range(len(e)) if i != last] + [last]
        return (sum(e),) + tuple(-e[i] for i in reversed(order))
    return key


def orient(a: Exp, b: Exp, key: Key) -> Binom | None:
    if a == b:
        return None
    return (a, b) if key(a) > key(b) else (b, a)


def normal_form(u: Exp, basis: Sequence[Binom]) -> Exp:
    changed = True
    while changed:
        changed = False
        for lead, tail in basis:
            if divides(lead, u):
                u = tuple(x - l + t for x, l, t in zip(u, lead, tail))
                changed = True
                break
    return u


def _spoly(f: Binom, g: Binom) -> Tuple[Exp, Exp]:
    lcm = tuple(max(x, y) for x, y in zip(f[0], g[0]))
    s1 = tuple(m - l + t for m, l, t in zip(lcm, f[0], f[1]))
    s2 = tuple(m - l + t for m, l, t in zip(lcm, g[0], g[1]))
    return s1, s2


def buchberger(gens: Iterable[Tuple[Exp, Exp]], key: Key, max_size: int = 20000) -> List[Binom]:
    """Reduced Groebner basis of the ideal generated by x^a - x^b for (a, b) in gens."""
    basis: List[Binom] = []
    for a, b in gens:
        a, b = normal_form(tuple(a), basis), normal_form(tuple(b), basis)
        f = orient(a, b, key)
        if f is not None:
            basis.append(f)
    # recompute from scratch with the full pair set
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        f, g = basis[i], basis[j]
        if all(x == 0 or y == 0 for x, y in zip(f[0], g[0])):
            continue  # coprime leads
        s1, s2 = _spoly(f, g)
        h = orient(normal_form(s1, basis), normal_form(s2, basis), key)
        if h is None:
            continue
        basis.append(h)
        k = len(basis) - 1
        pairs.extend((m, k) for m in range(k))
        if len(basis) > max_size:
            raise RuntimeError("Groebner basis grew beyond the size cap")
    return reduce_basis(basis, key)


def reduce_basis(basis: Sequence[Binom], key: Key) -> List[Binom]:
    basis = sorted(set(basis), key=lambda f: key(f[0]))
    minimal: List[Binom] = []
    for f in basis:
        if not any(divides(g[0], f[0]) for g in minimal):
            minimal = [g for g in minimal if not divides(f[0], g[0])]
            minimal.append(f)
    out = []
    for k, f in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        tail = normal_form(f[1], others)
        if tail != f[0]:
            out.append((f[0], tail))
    return sorted(out, key=lambda f: key(f[0]))


def _positive_negative(u: Sequence[int]) -> Tuple[Exp, Exp]:
    return tuple(max(x, 0) for x in u), tuple(max(-x, 0) for x in u)


def _elimination_key(q: int) -> Key:
    # block order on (x_1..x_q, t): t-degree first, then grevlex on x
    inner = grevlex_key()

    def key(e: Exp) -> tuple:
        return (e[q],) + inner(e[:q])
    return key


def weighted_grevlex_key(w: Sequence[int], last: int | None = None) -> Key:
    """Reverse lex refined by the weight w; `last` names the smallest variable."""
    w = tuple(w)
    base = grevlex_key(last)

    def key(e: Exp) -> tuple:
        return (sum(a * b for a, b in zip(w, e)),) + base(e)[1:]
    return key


def _rationalize(vals, limit: int = 10 ** 6) -> List[Fraction]:
    return [Fraction(float(v)).limit_denominator(limit) for v in vals]


def _kernel(basis: Sequence[Sequence[int]], q: int) -> List[List[int]]:
    """Integer basis of {w : u . w = 0 for every u in basis}."""
    d, _, v = intmat.smith([list(u) for u in basis], q)
    k = sum(1 for i in range(min(len(d), q)) if d[i][i])
    return [[v[i][j] for i in range(q)] for j in range(k, q)]


@lru_cache(maxsize=4096)
def positive_grading(basis: Tuple[Exp, ...], q: int) -> Optional[Exp]:
    """Strictly positive integer w orthogonal to the lattice, if one exists.

    Exactly one of this and a nonzero nonnegative lattice vector exists.
    The LP solution is rounded to rationals and re-checked exactly.
    """
    from scipy.optimize import linprog

    if not basis:
        return (1,) * q
    ker = _kernel(basis, q)
    if not ker:
        return None
    N = np.array(ker, dtype=float).T          # q x dim
    res = linprog(N.sum(axis=0), A_ub=-N, b_ub=-np.ones(q),
                  bounds=[(None, None)] * N.shape[1], method="highs")
    if res.status != 0:
        return None
    c = _rationalize(res.x)
    den = lcm(*(x.denominator for x in c))
    ci = [int(x * den) for x in c]
    w = [sum(ci[j] * ker[j][i] for j in range(len(ker))) for i in range(q)]
    g = gcd(*w)
    if g == 0 or any(x <= 0 for x in w):
        return None
    return tuple(x // g for x in w)


@lru_cache(maxsize=4096)
def nonnegative_vector(basis: Tuple[Exp, ...], q: int) -> Optional[Exp]:
    """A nonzero lattice vector with all entries >= 0, or None."""
    from scipy.optimize import linprog

    if not basis:
        return None
    B = np.array(basis, dtype=float)          # k x q
    k = B.shape[0]
    # feasibility only: c B >= 0 with entries summing to 1
    res = linprog(np.zeros(k), A_ub=-B.T, b_ub=np.zeros(q),
                  A_eq=B.sum(axis=1, keepdims=True).T, b_eq=[1.0],
                  bounds=[(None, None)] * k, method="highs")
    if res.status != 0:
        return None
    c = _rationalize(res.x)
    den = lcm(*(x.denominator for x in c))
    ci = [int(x * den) for x in c]
    u = [sum(ci[j] * basis[j][i] for j in range(k)) for i in range(q)]
    if any(x < 0 for x in u) or not any(u):
        return None
    g = gcd(*u)
    small = [x // g for x in u]
    if intmat.solve_echelon(intmat.hnf(basis, q), small) is not None:
        return tuple(small)
    return tuple(u)


def lll_reduce(basis: Sequence[Sequence[int]]) -> Tuple[Exp, ...]:
    """LLL-reduced basis of the row lattice (rows must be independent)."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    rows = [[ZZ(int(x)) for x in u] for u in basis]
    red = DomainMatrix(rows, (len(rows), len(rows[0])), ZZ).lll()
    return tuple(tuple(int(x) for x in r) for r in red.to_list())


def _saturate_graded(gens: List[Binom], q: int, w: Exp) -> List[Binom]:
    # for w-homogeneous ideals, weighted grevlex with x_i last computes I : x_i^inf
    for i in range(q):
        gb = buchberger(gens, weighted_grevlex_key(w, last=i))
        gens = []
        for a, b in gb:
            m = min(a[i], b[i])
            gens.append((a[:i] + (a[i] - m,) + a[i + 1:], b[:i] + (b[i] - m,) + b[i + 1:]))
    key = weighted_grevlex_key(w)
    return reduce_basis([f for f in (orient(a, b, key) for a, b in gens) if f], key)


def _saturate_elimination(gens: List[Binom], q: int) -> List[Binom]:
    ext = [(a + (0,), b + (0,)) for a, b in gens]
    ext.append(((1,) * (q + 1), (0,) * (q + 1)))
    gb = buchberger(ext, _elimination_key(q))
    kept = [orient(a[:q], b[:q], grevlex_key()) for a, b in gb if a[q] == 0 and b[q] == 0]
    return reduce_basis([f for f in kept if f], grevlex_key())


@lru_cache(maxsize=4096)
def lattice_ideal(basis: Tuple[Exp, ...], q: int) -> Tuple[Binom, ...]:
    """Generators x^{u+} - x^{u-} of the lattice ideal of a sublattice of Z^q.

    Saturates the ideal of the basis binomials by x_1 ... x_q. With a positive
    grading this is done one variable at a time; otherwise t x_1 ... x_q - 1
    is adjoined and t eliminated.
    """
    gens = [_positive_negative(u) for u in basis if any(u)]
    if not gens:
        return ()
    if len(gens) == 1:
        a, b = gens[0]
        return (orient(a, b, grevlex_key()),)
    # short basis vectors give small binomials and far fewer S-pairs
    gens = [_positive_negative(u) for u in lll_reduce(basis)]
    w = positive_grading(tuple(tuple(u) for u in basis), q)
    if w is not None:
        return tuple(_saturate_graded(gens, q, w))
    return tuple(_saturate_elimination(gens, q))


def local_homog_key(q: int) -> Key:
    """Order on k[x_1..x_q, t] (t last) homogenising the local exponent order.

    Compares total degree first; then the x-parts, where lower x-degree is
    larger and, at equal degree, the lexicographically smaller exponent is
    larger.
    """
    def key(e: Exp) -> tuple:
        x = e[:q]
        return (sum(e), -sum(x)) + tuple(-v for v in x)
    return key


def graded_local_key(w: Sequence[int]) -> Key:
    """Global order: w-degree, then the local order (smaller (|a|, a) is larger)."""
    w = tuple(w)

    def key(e: Exp) -> tuple:
        return (sum(a * b for a, b in zip(w, e)), -sum(e)) + tuple(-v for v in e)
    return key


@lru_cache(maxsize=4096)
def local_standard_basis(gens: Tuple[Binom, ...], q: int,
                         grading: Optional[Exp] = None) -> Tuple[Binom, ...]:
    """Standard basis at the origin for the local exponent order.

    With a positive grading making every generator homogeneous, the local
    initial term of a homogeneous element is its leading term for the
    global order graded_local_key, so a global Groebner basis does. Without
    one, homogenise with an extra variable t (Lazard), run Buchberger and set
    t = 1. Returned pairs are (initial exponent, other exponent).
    """
    if grading is not None:
        gb = buchberger(gens, graded_local_key(grading))
        pairs = [(lead, tail) for lead, tail in gb]
    else:
        homog = []
        for a, b in gens:
            d = max(sum(a), sum(b))
            homog.append((tuple(a) + (d - sum(a),), tuple(b) + (d - sum(b),)))
        pairs = [(lead[:q], tail[:q]) for lead, tail in buchberger(homog, local_homog_key(q))]
    out = set()
    for a, b in pairs:
        m = tuple(min(x, y) for x, y in zip(a, b))
        if any(m):
            # t-saturation: a common x-factor may be cancelled in the local ring
            a = tuple(x - y for x, y in zip(a, m))
            b = tuple(x - y for x, y in zip(b, m))
        if a != b:
            out.add((a, b) if (sum(a),) + tuple(a) < (sum(b),) + tuple(b) else (b, a))
    return tuple(sorted(out, key=lambda f: ((sum(f[0]),) + f[0], (sum(f[1]),) + f[1])))
