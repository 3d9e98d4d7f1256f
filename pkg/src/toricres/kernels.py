"""Numeric hot loops: mod-p elimination, F_p evaluation, staircase counts.

Each kernel has a numba version and a plain numpy version. numba is used
when importable unless TORICRES_PURE_NUMPY=1 is set; the flag only picks
the backend, results are identical.
"""
from __future__ import annotations

import os

import numpy as np

_WANT_PURE = os.environ.get("TORICRES_PURE_NUMPY", "") not in ("", "0")

try:
    if _WANT_PURE:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path

def _rank_mod_p_np(mat: np.ndarray, p: int) -> int:
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        r += 1
    return r


def _batch_rank_np(mats: np.ndarray, p: int) -> np.ndarray:
    return np.array([_rank_mod_p_np(m, p) for m in mats], dtype=np.int64)


def _powmod_np(base: np.ndarray, e: int, p: int) -> np.ndarray:
    if e < 0:
        base = _powmod_np(base, p - 2, p)
        e = -e
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = (out * b) % p
        b = (b * b) % p
        e >>= 1
    return out


def _eval_terms_np(points, exps, coefs, ptr, p):
    n_pts = points.shape[0]
    n_polys = len(ptr) - 1
    vals = np.zeros((n_pts, n_polys), dtype=np.int64)
    pts = points % p
    for t in range(exps.shape[0]):
        term = np.full(n_pts, coefs[t] % p, dtype=np.int64)
        for k in range(exps.shape[1]):
            if exps[t, k] != 0:
                term = (term * _powmod_np(pts[:, k], int(exps[t, k]), p)) % p
        poly = np.searchsorted(ptr, t, side="right") - 1
        vals[:, poly] = (vals[:, poly] + term) % p
    return vals


def _cone_membership_np(pts, inv, k):
    coords = pts @ inv.T
    ok = np.all(coords[:, :k] >= 0, axis=1)
    if inv.shape[0] > k:
        ok &= np.all(coords[:, k:] == 0, axis=1)
    return ok


def _staircase_count_np(vertices, r, free, l):
    """#{(a,b) in N^r x N^free : a outside the staircase, |a|+|b| <= l}."""
    q = r + free
    total = 0
    # enumerate exponent vectors of degree <= l in N^q degree by degree
    frontier = {tuple([0] * q)}
    for d in range(l + 1):
        for e in frontier:
            a = np.array(e[:r], dtype=np.int64)
            if len(vertices) == 0 or not np.any(np.all(a[None, :] >= vertices, axis=1)):
                total += 1
        nxt = set()
        for e in frontier:
            for k in range(q):
                f = list(e)
                f[k] += 1
                nxt.add(tuple(f))
        frontier = nxt
    return total


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:
    @njit(cache=True)
    def _inv_mod(a, p):
        res = 1
        e = p - 2
        b = a % p
        while e > 0:
            if e & 1:
                res = (res * b) % p
            b = (b * b) % p
            e >>= 1
        return res

    @njit(cache=True)
    def _rank_inplace(a, p):
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] % p != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
            inv = _inv_mod(a[r, c], p)
            for j in range(cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r:
                    f = a[i, c] % p
                    if f != 0:
                        for j in range(cols):
                            a[i, j] = (a[i, j] - f * a[r, j]) % p
            r += 1
        return r

    @njit(cache=True)
    def _rank_mod_p_nb(mat, p):
        a = mat.copy() % p
        return _rank_inplace(a, p)

    @njit(cache=True)
    def _batch_rank_nb(mats, p):
        out = np.zeros(mats.shape[0], dtype=np.int64)
        for k in range(mats.shape[0]):
            a = mats[k].copy() % p
            out[k] = _rank_inplace(a, p)
        return out

    @njit(cache=True)
    def _eval_terms_nb(points, exps, coefs, ptr, p):
        n_pts = points.shape[0]
        n_polys = ptr.shape[0] - 1
        vals = np.zeros((n_pts, n_polys), dtype=np.int64)
        for s in range(n_pts):
            for poly in range(n_polys):
                acc = 0
                for t in range(ptr[poly], ptr[poly + 1]):
                    term = coefs[t] % p
                    for k in range(exps.shape[1]):
                        e = exps[t, k]
                        if e == 0:
                            continue
                        b = points[s, k] % p
                        if e < 0:
                            if b == 0:
                                term = 0
                                break
                            b = _inv_mod(b, p)
                            e = -e
                        x = 1
                        while e > 0:
                            if e & 1:
                                x = (x * b) % p
                            b = (b * b) % p
                            e >>= 1
                        term = (term * x) % p
                    acc = (acc + term) % p
                vals[s, poly] = acc
        return vals

    @njit(cache=True)
    def _cone_membership_nb(pts, inv, k):
        n_pts = pts.shape[0]
        n = inv.shape[0]
        out = np.ones(n_pts, dtype=np.bool_)
        for s in range(n_pts):
            for i in range(n):
                c = 0
                for j in range(n):
                    c += inv[i, j] * pts[s, j]
                if (i < k and c < 0) or (i >= k and c != 0):
                    out[s] = False
                    break
        return out

    @njit(cache=True)
    def _staircase_count_nb(vertices, r, free, l):
        q = r + free
        e = np.zeros(q, dtype=np.int64)
        total = 0
        deg = 0
        while True:
            inside = False
            for v in range(vertices.shape[0]):
                ok = True
                for k in range(r):
                    if e[k] < vertices[v, k]:
                        ok = False
                        break
                if ok:
                    inside = True
                    break
            if not inside:
                total += 1
            # odometer step over {e : |e| <= l}
            k = 0
            while k < q:
                if deg < l:
                    e[k] += 1
                    deg += 1
                    break
                deg -= e[k]
                e[k] = 0
                k += 1
            if k == q:
                break
        return total


# ---------------------------------------------------------------- dispatch

def rank_mod_p(mat, p: int) -> int:
    mat = np.asarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    return int(_rank_mod_p_nb(mat, p) if HAVE_NUMBA else _rank_mod_p_np(mat, p))


def batch_rank_mod_p(mats, p: int) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if mats.shape[1] == 0 or mats.shape[2] == 0:
        return np.zeros(mats.shape[0], dtype=np.int64)
    return _batch_rank_nb(mats, p) if HAVE_NUMBA else _batch_rank_np(mats, p)


def eval_terms_mod_p(points, exps, coefs, ptr, p: int) -> np.ndarray:
    """Values mod p of polynomials given as flat term lists.

    Polynomial j owns terms ptr[j]:ptr[j+1]; a term is coef * prod x_k^e_k.
    Negative exponents are allowed on coordinates that are nonzero mod p.
    """
    points = np.asarray(points, dtype=np.int64)
    exps = np.asarray(exps, dtype=np.int64).reshape(-1, points.shape[1])
    coefs = np.asarray(coefs, dtype=np.int64)
    ptr = np.asarray(ptr, dtype=np.int64)
    if HAVE_NUMBA:
        return _eval_terms_nb(points, exps, coefs, ptr, p)
    return _eval_terms_np(points, exps, coefs, ptr, p)


def cone_membership(pts, inv, k: int) -> np.ndarray:
    pts = np.asarray(pts, dtype=np.int64)
    inv = np.asarray(inv, dtype=np.int64)
    if HAVE_NUMBA:
        return _cone_membership_nb(pts, inv, k)
    return _cone_membership_np(pts, inv, k)


def staircase_count(vertices, r: int, free: int, l: int) -> int:
    verts = np.asarray(vertices, dtype=np.int64).reshape(-1, r) if r else np.zeros((len(vertices), 0), dtype=np.int64)
    if r + free == 0:
        return 0 if len(verts) else 1
    if HAVE_NUMBA:
        return int(_staircase_count_nb(verts, r, free, l))
    return int(_staircase_count_np(verts, r, free, l))


def fp_points(r: int, m: int, p: int) -> np.ndarray:
    """All points of A^r x G_m^m over F_p as rows (x first, then y)."""
    axes = [np.arange(p)] * r + [np.arange(1, p)] * m
    if not axes:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1).astype(np.int64)
