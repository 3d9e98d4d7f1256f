"""Exact integer matrix reductions (Hermite and Smith forms) on lists of rows.

Entries are Python ints, so nothing overflows. Matrices are small here
(a handful of rows and columns), which is why plain lists beat numpy.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def _copy(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[int(v) for v in r] for r in rows]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row Hermite normal form with zero rows dropped.

    Pivots are positive and strictly increase in column; entries above a
    pivot lie in [0, pivot). Two integer row lattices are equal iff their
    HNFs are equal.
    """
    a = _copy(rows)
    if not a:
        return []
    n = len(a[0]) if ncols is None else ncols
    m = len(a)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine column c entries below r into row r
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hnf(rows))


def smith(a_rows: Sequence[Sequence[int]], ncols: int | None = None
          ) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U·A·V = D diagonal, U and V unimodular.

    The nonzero diagonal entries are positive and each divides the next.
    """
    a = _copy(a_rows)
    m = len(a)
    n = (len(a[0]) if a else 0) if ncols is None else ncols
    if not a:
        a = []
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        swap_rows(i, t)
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(j, t)
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def invariant_factors(rows: Sequence[Sequence[int]], ncols: int | None = None) -> List[int]:
    d, _, _ = smith(rows, ncols)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(d[i][i])
    return out


def is_saturated(rows: Sequence[Sequence[int]], ncols: int | None = None) -> bool:
    """True iff the row lattice has torsion-free quotient (all factors 1)."""
    return all(f == 1 for f in invariant_factors(rows, ncols))


def inverse(mat: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Exact rational inverse by Gauss-Jordan."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def inverse_unimodular(mat: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(mat)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def complete_basis(rows: Sequence[Sequence[int]], n: int) -> Matrix:
    """Vectors f such that rows + f is a basis of Z^n.

    Requires the rows to be part of a basis (saturated, independent).
    """
    k = len(rows)
    if k == 0:
        return identity(n)
    # rows = U^-1 [I 0] V^-1, so the last n-k rows of V^-1 complete them
    d, _, v = smith(rows, n)
    if any(d[i][i] != 1 for i in range(k)):
        raise ValueError("rows are not part of a lattice basis")
    vinv = inverse_unimodular(v)
    return vinv[k:]


def solve_echelon(basis: Sequence[Sequence[int]], target: Sequence[int]) -> List[int] | None:
    """Integer coefficients c with c·basis = target for an HNF basis, or None."""
    rest = list(target)
    coeffs = []
    for row in basis:
        piv = next(j for j, x in enumerate(row) if x)
        if rest[piv] % row[piv]:
            return None
        q = rest[piv] // row[piv]
        coeffs.append(q)
        if q:
            rest = [x - q * y for x, y in zip(rest, row)]
    if any(rest):
        return None
    return coeffs
