"""Standard bases at distinguished points, staircases and Hilbert-Samuel data.

The relation lattice L of a chart ideal is split into its x-projection L_x
and its pure torus part L_y = L ∩ (0 ⊕ Z^m). Modulo the torus relations the
ideal is the lattice ideal of L_x with each binomial tagged by a unit in the
quotient torus, so initial exponents only need L_x.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from . import intmat
from .binomial_charts import (ChartBinomial, ChartIdeal, EmbeddingState, Exp,
                              TorusRelationLattice, order_key, restrict_positions)
from .errors import IncomparableMaxima, InvalidInput, NoXInitial, TorsionError
from .groebner import (lattice_ideal, local_standard_basis, nonnegative_vector,
                       positive_grading)
from .lattice_fan import RegularCone


# ------------------------------------------------------------------ order

def initial_exponent(f: ChartBinomial) -> Exp:
    if not any(f.alpha) and not any(f.beta):
        raise NoXInitial("torus relation has no x-initial exponent")
    return f.alpha if order_key(f.alpha) <= order_key(f.beta) else f.beta


@dataclass(frozen=True)
class StaircaseDiagram:
    vertices: Tuple[Exp, ...]

    def __post_init__(self):
        vs = sorted(set(tuple(v) for v in self.vertices), key=order_key)
        for a, b in combinations(vs, 2):
            if all(x <= y for x, y in zip(a, b)) or all(x >= y for x, y in zip(a, b)):
                raise InvalidInput(f"vertices {a} and {b} are comparable")
        object.__setattr__(self, "vertices", tuple(vs))

    def contains(self, a: Sequence[int]) -> bool:
        return any(all(x <= y for x, y in zip(v, a)) for v in self.vertices)


def minimal_vertices(exps) -> Tuple[Exp, ...]:
    out: List[Exp] = []
    for e in sorted(set(map(tuple, exps)), key=order_key):
        if not any(all(x <= y for x, y in zip(v, e)) for v in out):
            out.append(e)
    return tuple(out)


# ------------------------------------------------------------------ lattice split

@dataclass(frozen=True)
class LatticeSplit:
    r: int
    m: int
    lx: Tuple[Exp, ...]          # echelon basis of L_x
    lx_lift: Tuple[Exp, ...]     # y-parts completing each row to a vector of L
    ly: Tuple[Exp, ...]          # HNF basis of L_y
    quot: Tuple[Exp, ...]        # V with pi(g) = (g V)[nu:]

    @property
    def nu(self) -> int:
        return len(self.ly)

    @property
    def c(self) -> int:
        return self.m - self.nu

    def lift(self, u: Sequence[int]) -> Exp:
        """Canonical y-part g with (u, g) in L, reduced modulo L_y."""
        coeffs = intmat.solve_echelon(self.lx, list(u)) if self.lx else ([] if not any(u) else None)
        if coeffs is None:
            raise InvalidInput(f"{tuple(u)} is not in the x-projection of the lattice")
        g = [0] * self.m
        for c, row in zip(coeffs, self.lx_lift):
            g = [x + c * y for x, y in zip(g, row)]
        for row in self.ly:
            piv = next(j for j, x in enumerate(row) if x)
            q = g[piv] // row[piv]
            if q:
                g = [x - q * y for x, y in zip(g, row)]
        return tuple(g)

    def project(self, g: Sequence[int]) -> Exp:
        """Coordinates of g in the quotient torus Z^m / L_y."""
        return tuple(sum(g[i] * self.quot[i][j] for i in range(self.m))
                     for j in range(self.nu, self.m))


@lru_cache(maxsize=8192)
def _split(rows: Tuple[Exp, ...], r: int, m: int) -> LatticeSplit:
    n = r + m
    if rows:
        factors = intmat.invariant_factors(rows, n)
        if any(f > 1 for f in factors):
            raise TorsionError(f"relation lattice has invariant factors {tuple(factors)}")
    h = intmat.hnf(rows, n) if rows else []
    lx = tuple(tuple(row[:r]) for row in h if any(row[:r]))
    lift = tuple(tuple(row[r:]) for row in h if any(row[:r]))
    ly = tuple(tuple(row[r:]) for row in h if not any(row[:r]))
    if ly:
        _, _, v = intmat.smith(ly, m)
    else:
        v = intmat.identity(m)
    return LatticeSplit(r, m, lx, lift, ly, tuple(tuple(x) for x in v))


def lattice_split(ideal: ChartIdeal) -> LatticeSplit:
    return _split(tuple(tuple(r) for r in ideal.lattice_rows()), ideal.nx, ideal.ny)


def nu_torus_codim(J: TorusRelationLattice | Sequence[Sequence[int]]) -> int:
    gammas = J.gammas if isinstance(J, TorusRelationLattice) else tuple(tuple(g) for g in J)
    if not gammas:
        return 0
    factors = intmat.invariant_factors(gammas)
    if any(f > 1 for f in factors):
        raise TorsionError(f"torus relations have invariant factors {tuple(factors)}")
    return len(factors)


# ------------------------------------------------------------------ standard basis

@dataclass(frozen=True)
class StandardBasis:
    nonlinear: Tuple[ChartBinomial, ...]
    linear: Tuple[ChartBinomial, ...]
    torus: TorusRelationLattice
    r: int
    m: int
    nu: int
    unit: Optional[ChartBinomial] = None

    @property
    def t(self) -> int:
        return len(self.nonlinear)

    @property
    def s(self) -> int:
        return len(self.nonlinear) + len(self.linear)

    @property
    def elements(self) -> Tuple[ChartBinomial, ...]:
        return tuple(sorted(self.nonlinear + self.linear, key=lambda f: order_key(f.alpha)))

    @property
    def diagram(self) -> StaircaseDiagram:
        if self.unit is not None:
            return StaircaseDiagram(((0,) * self.r,))
        return StaircaseDiagram(tuple(f.alpha for f in self.elements))

    def pivots(self) -> Tuple[int, ...]:
        return tuple(sorted(f.alpha.index(1) for f in self.linear))


def _tail_reduce(elems: Dict[Exp, Exp], r: int, cap: int = 10000) -> Dict[Exp, Exp]:
    """Substitute linear pivots x_j = x^b into every other exponent."""
    piv = {v.index(1): b for v, b in elems.items() if sum(v) == 1}
    out = dict(elems)
    for _ in range(cap):
        changed = False
        for v, b in list(out.items()):
            for j, bj in piv.items():
                if b[j] and v != tuple(int(k == j) for k in range(r)):
                    k = b[j]
                    b = tuple(x + k * y if i != j else 0 for i, (x, y) in enumerate(zip(b, bj)))
                    changed = True
            out[v] = b
        piv = {v.index(1): b for v, b in out.items() if sum(v) == 1}
        if not changed:
            return out
    raise RuntimeError("pivot substitution did not settle")


def _standard_basis_exps(split: LatticeSplit) -> Tuple[Optional[Exp], Dict[Exp, Exp]]:
    # a nonnegative vector b in L_x gives the unit 1 - x^b y^g
    unit = nonnegative_vector(split.lx, split.r)
    if unit is not None:
        return unit, {}
    gens = lattice_ideal(split.lx, split.r)
    sb = local_standard_basis(gens, split.r, positive_grading(split.lx, split.r))
    zero = (0,) * split.r
    for a, b in sb:
        if a == zero:
            return b, {}
    by_vertex: Dict[Exp, Exp] = {}
    verts = set(minimal_vertices([a for a, _ in sb]))
    for a, b in sb:  # sorted by (a, b) order, first hit has the smallest tail
        if a in verts and a not in by_vertex:
            by_vertex[a] = b
    return None, _tail_reduce(by_vertex, split.r)


def standard_basis(ideal: ChartIdeal) -> StandardBasis:
    """Reduced binomial standard basis at the distinguished point, modulo J."""
    split = lattice_split(ideal)
    unit_tail, elems = _standard_basis_exps(split)
    r, m = split.r, split.m
    torus = TorusRelationLattice(split.ly)

    def mk(a, b):
        u = tuple(y - x for x, y in zip(a, b))
        return ChartBinomial(a, b, split.lift(u))

    if unit_tail is not None:
        return StandardBasis((), (), torus, r, m, split.nu, unit=mk((0,) * r, unit_tail))
    nonlinear, linear = [], []
    for a in sorted(elems, key=order_key):
        b = elems[a]
        if any(x and y for x, y in zip(a, b)):
            raise AssertionError(f"standard basis element shares support: {a}, {b}")
        (linear if sum(a) == 1 else nonlinear).append(mk(a, b))
    return StandardBasis(tuple(nonlinear), tuple(linear), torus, r, m, split.nu)


def effective_chart(ideal: ChartIdeal) -> Tuple[Tuple[int, ...], ChartIdeal, StandardBasis]:
    """Smallest face chart whose distinguished point lies on X.

    Whenever the standard basis contains 1 - x^b w^g the variables of b are
    units along X and are moved into the torus block. Returns the kept
    positions (in the original chart), the localized ideal and its basis.
    """
    keep = list(range(ideal.nx))
    cur = ideal
    while True:
        sb = standard_basis(cur)
        if sb.unit is None:
            return tuple(keep), cur, sb
        drop = {i for i, v in enumerate(sb.unit.beta) if v}
        local_keep = [i for i in range(cur.nx) if i not in drop]
        keep = [keep[i] for i in local_keep]
        cur = restrict_positions(cur, local_keep)


# ------------------------------------------------------------------ HS functions

def _hs_counts(vertices: Sequence[Exp], q: int, l: int) -> int:
    # inclusion-exclusion over lcms, merged on equal lcm
    terms: Dict[Exp, int] = {}
    for v in vertices:
        new = dict(terms)
        new[tuple(v)] = new.get(tuple(v), 0) + 1
        for lcm, coef in terms.items():
            k = tuple(max(x, y) for x, y in zip(lcm, v))
            new[k] = new.get(k, 0) - coef
        terms = {k: c for k, c in new.items() if c}
    total = comb(l + q, q)
    for lcm, coef in terms.items():
        s = sum(lcm)
        if s <= l:
            total -= coef * comb(l - s + q, q)
    return total


def hs_from_diagram(vertices: Sequence[Sequence[int]], nu: int, free_dims: int, l: int) -> int:
    """#{(a, b) in N^r x N^free_dims : a outside vertices + N^r, |a| + |b| <= l}.

    nu is accepted for the record; free_dims is already the torus dimension
    left after quotienting by the torus relations.
    """
    if l < 0:
        raise InvalidInput("l must be nonnegative")
    vertices = [tuple(int(x) for x in v) for v in vertices]
    r = len(vertices[0]) if vertices else 0
    q = r + free_dims
    if len(vertices) > 20:
        from .kernels import staircase_count
        return staircase_count(vertices, r, free_dims, l)
    # pad: vertices live in N^r, the free block contributes no vertex entries
    padded = [v + (0,) * free_dims for v in vertices]
    return _hs_counts(padded, q, l)


@dataclass(frozen=True)
class HSFunction:
    vertices: Tuple[Exp, ...]
    r: int
    free: int
    nu: int = 0
    empty: bool = False   # point not on X: H identically 0

    @property
    def q(self) -> int:
        return self.r + self.free

    @property
    def reg(self) -> int:
        return sum(sum(v) for v in self.vertices) + 1

    def __call__(self, l: int) -> int:
        if self.empty:
            return 0
        if not self.vertices:
            return comb(l + self.q, self.q)
        return hs_from_diagram(self.vertices, self.nu, self.free, l)

    def values(self, lmax: int) -> Tuple[int, ...]:
        return tuple(self(l) for l in range(lmax + 1))


def hs_of_basis(sb: StandardBasis) -> HSFunction:
    if sb.unit is not None:
        return HSFunction((), sb.r, sb.m - sb.nu, sb.nu, empty=True)
    return HSFunction(sb.diagram.vertices, sb.r, sb.m - sb.nu, sb.nu)


def hs_at_distinguished(ideal: ChartIdeal) -> HSFunction:
    return hs_of_basis(standard_basis(ideal))


def compare_hs(h1: HSFunction, h2: HSFunction) -> str:
    """'less', 'equal', 'greater' or 'incomparable' (pointwise order)."""
    q = max(h1.q, h2.q)
    lmax = max(h1.reg, h2.reg) + q + 1
    lt = gt = False
    for l in range(lmax + 1):
        a, b = h1(l), h2(l)
        lt |= a < b
        gt |= a > b
    if lt and gt:
        return "incomparable"
    return "less" if lt else "greater" if gt else "equal"


def mixed_affine_hs(n: int, k: int) -> int:
    """Length of Z[x_1..x_n] localized at (p, x) modulo the (k+1)-st power."""
    if n < 1 or k < 0:
        raise InvalidInput("need n >= 1 and k >= 0")
    return comb(n + 1 + k, n + 1)


# ------------------------------------------------------------------ N(I), strata, smoothness

@dataclass(frozen=True)
class NDescription:
    kept: Tuple[int, ...]        # x positions surviving pivot elimination
    torus_dim: int               # c = m - nu
    ideal: ChartIdeal            # nonlinear elements in the new coordinates


def build_N(ideal: ChartIdeal) -> NDescription:
    sb = standard_basis(ideal)
    if sb.unit is not None:
        raise InvalidInput("distinguished point is not on X")
    split = lattice_split(ideal)
    piv = set(sb.pivots())
    kept = tuple(i for i in range(ideal.nx) if i not in piv)
    bins = []
    for f in sb.nonlinear:
        tag = split.project(f.gamma)
        bins.append(ChartBinomial(tuple(f.alpha[i] for i in kept),
                                  tuple(f.beta[i] for i in kept), tag))
    return NDescription(kept, split.c, ChartIdeal(tuple(bins), nx_=len(kept), ny_=split.c))


@dataclass(frozen=True)
class StratumIdeal:
    monomials: Tuple[Exp, ...]         # x-exponents of Hasse monomials
    linear: Tuple[ChartBinomial, ...]
    torus: TorusRelationLattice

    def vanishes_on(self, zero_set: Sequence[int]) -> bool:
        """All monomials vanish on the orbit where exactly zero_set is zero."""
        zs = set(zero_set)
        return all(any(e[i] for i in zs) for e in self.monomials)


def hasse_exponents(alpha: Exp, beta: Exp) -> List[Exp]:
    from .hasse_hypersurface import hasse_monomials
    return [h.exponents for h in hasse_monomials(ChartBinomial(alpha, beta))]


def samuel_stratum_ideal(ideal: ChartIdeal, sb: Optional[StandardBasis] = None) -> StratumIdeal:
    sb = sb or standard_basis(ideal)
    mons = set()
    for f in sb.nonlinear:
        for e in hasse_exponents(f.alpha, f.beta):
            mons.add(e)
    return StratumIdeal(tuple(sorted(mons, key=order_key)), sb.linear, sb.torus)


def stratum_components(st: StratumIdeal, r: int) -> List[Tuple[int, ...]]:
    """Minimal vanishing position sets of the stratum's monomials."""
    if not st.monomials:
        return [()]
    out: List[Tuple[int, ...]] = []
    for k in range(r + 1):
        for S in combinations(range(r), k):
            if any(set(o) <= set(S) for o in out):
                continue
            if st.vanishes_on(S):
                out.append(S)
    return out


def is_smooth_chart(ideal: ChartIdeal) -> bool:
    try:
        _, _, sb = effective_chart(ideal)
    except TorsionError:
        return False
    return sb.t == 0


@dataclass(frozen=True)
class ChartHS:
    chart: int
    kept: Tuple[int, ...]
    ideal: ChartIdeal
    sb: StandardBasis
    hs: HSFunction


def chart_hs(ideal: ChartIdeal, cid: int = 0) -> ChartHS:
    kept, eff, sb = effective_chart(ideal)
    return ChartHS(cid, kept, eff, sb, hs_of_basis(sb))


def z_maximal_hs(state: EmbeddingState) -> Tuple[HSFunction, List[int], List[ChartHS]]:
    """Maximum of the charts' HS functions and the charts attaining it."""
    data = [chart_hs(I, k) for k, I in enumerate(state.ideals)]
    best: List[ChartHS] = []
    for d in data:
        if not best:
            best = [d]
            continue
        c = compare_hs(d.hs, best[0].hs)
        if c == "greater":
            best = [d]
        elif c == "equal":
            best.append(d)
        elif c == "incomparable":
            # only fatal if d is not dominated by the eventual maximum
            best.append(d)
    maxima = []
    for d in best:
        if not any(compare_hs(d.hs, e.hs) == "less" for e in data):
            maxima.append(d)
    reps = []
    for d in maxima:
        if not any(compare_hs(d.hs, e.hs) == "equal" for e in reps):
            reps.append(d)
    if len(reps) > 1:
        raise IncomparableMaxima("charts " + ", ".join(str(d.chart) for d in reps)
                                 + " have incomparable maximal HS functions")
    top = reps[0].hs
    attaining = [d.chart for d in data if compare_hs(d.hs, top) == "equal"]
    return top, attaining, data


def maximal_strata(state: EmbeddingState) -> Dict[int, Optional[List[RegularCone]]]:
    """Per chart: the stratum's components as global cones, None for the unit ideal.

    Raises AssertionError if two charts disagree on a shared face.
    """
    top, attaining, data = z_maximal_hs(state)
    out: Dict[int, Optional[List[RegularCone]]] = {}
    for d in data:
        if d.chart not in attaining:
            out[d.chart] = None
            continue
        st = samuel_stratum_ideal(d.ideal, d.sb)
        slots = d.ideal.chart.slots
        out[d.chart] = [RegularCone(tuple(slots[i] for i in S))
                        for S in stratum_components(st, d.ideal.nx)]
    cones = state.fan.maximal_cones
    for a, b in combinations(range(len(cones)), 2):
        tau = set(cones[a].ray_ids) & set(cones[b].ray_ids)
        sa = {c for c in (out[a] or []) if set(c.ray_ids) <= tau}
        sb_ = {c for c in (out[b] or []) if set(c.ray_ids) <= tau}
        if sa != sb_:
            raise AssertionError(f"strata of charts {a} and {b} disagree on face {sorted(tau)}")
    return out
