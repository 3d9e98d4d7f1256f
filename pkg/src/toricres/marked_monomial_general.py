"""Marked monomial ideals on a regular fan, order reduction, general driver.

Generators are products of the fan's toric divisors, stored as exponent
vectors indexed by ray id, so they read the same from every chart. A
marked ideal lives on the orbit closure Z_P; its support is the union of
the Z_Delta (Delta containing P) along which every generator has order at
least the mark e.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import inf, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .binomial_charts import EmbeddingState, Exp
from .blowup_transform import blow_up_global
from .errors import InvalidInput, NonTermination, NotPermissible
from .hasse_hypersurface import ResolutionStep, ResolutionTrace
from .lattice_fan import RegularCone, RegularFan, faces, star_subdivision
from .standard_basis_hs import ChartHS, is_smooth_chart, z_maximal_hs


@dataclass(frozen=True)
class MarkedMonomialIdeal:
    fan: RegularFan
    generators: Tuple[Exp, ...]      # each indexed by ray id
    mark: int
    p_cone: RegularCone = RegularCone(())
    source_chart: Optional[int] = None

    def __post_init__(self):
        nr = len(self.fan.rays)
        gens = tuple(tuple(int(x) for x in g) + (0,) * (nr - len(g)) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.mark < 1:
            raise InvalidInput("mark must be positive")
        if any(len(g) != nr for g in gens):
            raise InvalidInput("generator length does not match the ray table")
        if any(min(g, default=0) < 0 for g in gens):
            raise InvalidInput("negative exponent")
        if not self.fan.containing(self.p_cone):
            raise InvalidInput("P must be a single cone of the fan")
        for g in gens:
            if any(g[i] for i in self.p_cone.ray_ids):
                raise InvalidInput("generator involves a divisor containing P")

    def order(self, delta: RegularCone) -> float:
        """mu_Delta = min over generators of the exponent sum on Delta."""
        if not self.generators:
            return inf
        return min(sum(g[i] for i in delta.ray_ids) for g in self.generators)

    def chart_generators(self, cid: int) -> List[Exp]:
        slots = self.fan.maximal_cones[cid].ray_ids
        return [tuple(g[s] for s in slots) for g in self.generators]


@dataclass(frozen=True)
class SupportDescription:
    cones: Tuple[RegularCone, ...]


def _cones_over(H: MarkedMonomialIdeal) -> List[RegularCone]:
    P = set(H.p_cone.ray_ids)
    return [c for c in H.fan.all_cones() if P <= set(c.ray_ids)]


def support(H: MarkedMonomialIdeal) -> SupportDescription:
    """Minimal cones containing P whose order reaches the mark."""
    hit = [c for c in _cones_over(H) if H.order(c) >= H.mark]
    minimal = [c for c in hit
               if not any(o != c and set(o.ray_ids) <= set(c.ray_ids) for o in hit)]
    return SupportDescription(tuple(sorted(minimal, key=lambda c: (c.dim, c.ray_ids))))


def in_support(H: MarkedMonomialIdeal, delta: RegularCone) -> bool:
    return set(H.p_cone.ray_ids) <= set(delta.ray_ids) and H.order(delta) >= H.mark


def is_permissible(H: MarkedMonomialIdeal, D: Sequence[RegularCone]) -> bool:
    """Each component lies in the support and distinct components are disjoint."""
    D = list(D)
    if not all(H.fan.containing(c) and in_support(H, c) for c in D):
        return False
    for a, b in combinations(D, 2):
        if H.fan.containing(RegularCone(tuple(set(a.ray_ids) | set(b.ray_ids)))):
            return False
    return True


def transform(H: MarkedMonomialIdeal, delta: RegularCone) -> MarkedMonomialIdeal:
    """Controlled transform: the exceptional exponent is h_Delta - e."""
    if not in_support(H, delta):
        raise NotPermissible(f"{delta.ray_ids} is not in the support")
    hd = [sum(g[i] for i in delta.ray_ids) for g in H.generators]
    if any(h < H.mark for h in hd):
        raise NotPermissible("order along the centre is below the mark")
    new_fan, _ = star_subdivision(H.fan, delta)
    if delta.dim == 1:
        (i,) = delta.ray_ids
        gens = [g[:i] + (h - H.mark,) + g[i + 1:] for g, h in zip(H.generators, hd)]
    else:
        gens = [g + (h - H.mark,) for g, h in zip(H.generators, hd)]
    return MarkedMonomialIdeal(new_fan, tuple(gens), H.mark, H.p_cone, H.source_chart)


def next_center(H: MarkedMonomialIdeal) -> Optional[Tuple[RegularCone, Tuple]]:
    """Support cone of least dimension and, among those, largest order.

    Ties go to the smallest ray ids. The invariant returned is
    (-dim, order, number of cones tied with the chosen one). For a single
    generator it drops lexicographically with every transform. With several
    generators it can repeat, since a face may already carry the mark for one
    generator while another keeps it out of the support; termination then
    rests on the step cap.
    """
    sup = support(H).cones
    if not sup:
        return None
    p = min(c.dim for c in sup)
    low = [c for c in sup if c.dim == p]
    best = max(H.order(c) for c in low)
    tied = [c for c in low if H.order(c) == best]
    return min(tied, key=lambda c: c.ray_ids), (-p, best, len(tied))


@dataclass(frozen=True)
class MarkedStep:
    center: RegularCone
    invariant: Tuple


@dataclass(frozen=True)
class MarkedTrace:
    initial: MarkedMonomialIdeal
    steps: Tuple[MarkedStep, ...]
    final: MarkedMonomialIdeal
    history: Tuple[MarkedMonomialIdeal, ...] = field(default=(), repr=False)


def order_reduce(H: MarkedMonomialIdeal, max_steps: int = 500) -> MarkedTrace:
    initial = H
    steps: List[MarkedStep] = []
    history = [H]
    while True:
        nxt = next_center(H)
        if nxt is None:
            return MarkedTrace(initial, tuple(steps), H, tuple(history))
        if len(steps) >= max_steps:
            raise NonTermination(f"order reduction did not finish in {max_steps} steps")
        delta, inv = nxt
        H = transform(H, delta)
        steps.append(MarkedStep(delta, inv))
        history.append(H)


def support_points_agree(H: MarkedMonomialIdeal, p: int) -> bool:
    """Per-fiber check on every chart: pointwise order test vs combinatorial support.

    A point of A^r over F_p lies in the support iff it is on Z_P and every
    generator has order >= e there; the order of a monomial at a point is the
    sum of its exponents over the coordinates vanishing at that point.
    """
    from .kernels import fp_points
    sup = support(H).cones
    for cid, c in enumerate(H.fan.maximal_cones):
        slots = c.ray_ids
        r = len(slots)
        pts = fp_points(r, 0, p)
        zero = pts == 0
        gens = np.array(H.chart_generators(cid), dtype=np.int64).reshape(-1, r)
        if len(gens):
            orders = zero.astype(np.int64) @ gens.T
            ok = np.all(orders >= H.mark, axis=1)
        else:
            ok = np.ones(len(pts), dtype=bool)
        ppos = [slots.index(i) for i in H.p_cone.ray_ids] if set(H.p_cone.ray_ids) <= set(slots) else None
        if ppos is None:
            pointwise = np.zeros(len(pts), dtype=bool)
        else:
            pointwise = ok & np.all(zero[:, ppos], axis=1) if ppos else ok
        combin = np.zeros(len(pts), dtype=bool)
        for d in sup:
            if set(d.ray_ids) <= set(slots):
                pos = [slots.index(i) for i in d.ray_ids]
                combin |= np.all(zero[:, pos], axis=1) if pos else True
        if not np.array_equal(pointwise, combin):
            return False
    return True


# ---------------------------------------------------------------- general driver

def marked_ideal_from_chart(state: EmbeddingState, d: ChartHS) -> Optional[MarkedMonomialIdeal]:
    """Coefficient-style marked ideal of one chart's Samuel stratum.

    P collects the variables of all initial exponents. Each nonlinear element
    x^a - x^b contributes x^(b - delta) with mark |a| - |delta| for |delta| < |a|;
    variables of P are then set to zero, lowering the mark by their
    exponent. Marks are equalized to their lcm by raising generators to powers.
    """
    sb = d.sb
    if sb.t == 0:
        return None
    slots = d.ideal.chart.slots
    p_pos = sorted({i for f in sb.nonlinear for i, v in enumerate(f.alpha) if v})
    raw = set()
    for f in sb.nonlinear:
        a = sum(f.alpha)
        for delta in product(*(range(v + 1) for v in f.beta)):
            if sum(delta) >= a:
                continue
            e = [b - z for b, z in zip(f.beta, delta)]
            mark = a - sum(delta) - sum(e[i] for i in p_pos)
            if mark <= 0:
                continue
            for i in p_pos:
                e[i] = 0
            raw.add((tuple(e), mark))
    nr = len(state.fan.rays)
    P = RegularCone(tuple(slots[i] for i in p_pos))
    if not raw:
        return MarkedMonomialIdeal(state.fan, (), 1, P, d.chart)
    e_all = lcm(*(m for _, m in raw))
    gens = set()
    for e, m in raw:
        g = [0] * nr
        for i, v in enumerate(e):
            g[slots[i]] = v * (e_all // m)
        gens.add(tuple(g))
    return MarkedMonomialIdeal(state.fan, tuple(sorted(gens)), e_all, P, d.chart)


def _support_on_chart(H: MarkedMonomialIdeal, slots: Sequence[int]) -> List[RegularCone]:
    """Minimal support cones that are faces of the given (effective) chart."""
    P = set(H.p_cone.ray_ids)
    rest = [s for s in slots if s not in P]
    hit = []
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            c = RegularCone(tuple(P) + extra)
            if any(set(h.ray_ids) <= set(c.ray_ids) for h in hit):
                continue
            if H.order(c) >= H.mark:
                hit.append(c)
    return hit


def general_centers(state: EmbeddingState):
    """Candidate centres with their normalized orders, and the HS data used."""
    top, attaining, data = z_maximal_hs(state)
    cands: Dict[RegularCone, Fraction] = {}
    for d in data:
        if d.chart not in attaining:
            continue
        H = marked_ideal_from_chart(state, d)
        if H is None:
            continue
        for c in _support_on_chart(H, d.ideal.chart.slots):
            mu = H.order(c)
            score = inf if mu == inf else Fraction(int(mu), H.mark)
            if c not in cands or score > cands[c]:
                cands[c] = score
    return cands, top, attaining


def resolve_general(state: EmbeddingState, max_steps: int = 200) -> ResolutionTrace:
    """Blow up until every chart is smooth, centres taken from marked ideals.

    Each step recomputes the maximal HS function, builds the marked ideals of
    the attaining charts and blows up the minimal support cone of largest
    order over mark (ties to the smallest ray ids).
    """
    initial = state
    steps: List[ResolutionStep] = []
    while not all(is_smooth_chart(I) for I in state.ideals):
        if len(steps) >= max_steps:
            raise NonTermination(f"no resolution after {max_steps} blow-ups")
        cands, top, _ = general_centers(state)
        real = {c: s for c, s in cands.items() if c.dim >= 1}
        if not real:
            raise NonTermination("singular chart without a usable centre")
        best = max(real.values())
        delta = min((c for c, s in real.items() if s == best), key=lambda c: c.ray_ids)
        rays = tuple(state.fan.rays[i] for i in delta.ray_ids)
        inv = (top.values(top.reg + top.q),)
        if delta.dim == 1:
            raise NonTermination(f"centre {delta.ray_ids} is a divisor; blow-up would not change X")
        state, recs = blow_up_global(state, delta)
        steps.append(ResolutionStep(delta, rays, inv, tuple(recs)))
    return ResolutionTrace(initial, tuple(steps), state, (), mode="general")
