"""Hasse derivative monomials, the order-d locus and the hypersurface driver."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .binomial_charts import ChartBinomial, EmbeddingState, Exp
from .blowup_transform import TransformRecord, blow_up_global
from .errors import (EmptyDerivativeSet, InvalidInput, InvalidOrder, NonTermination,
                     NotAdmissible)
from .lattice_fan import RegularCone


@dataclass(frozen=True)
class HasseMonomial:
    side: str          # "u" for the alpha side, "v" for the beta side
    order: Exp
    exponents: Exp


def _orders(e: Exp, below: int):
    """All z <= e componentwise with |z| < below."""
    for z in product(*(range(v + 1) for v in e)):
        if sum(z) < below:
            yield z


def hasse_monomials(f: ChartBinomial) -> List[HasseMonomial]:
    d = f.d
    if d == 0:
        raise EmptyDerivativeSet("binomial with alpha = 0 has no Hasse locus")
    out = []
    for side, e in (("u", f.alpha), ("v", f.beta)):
        seen = set()
        for z in _orders(e, d):
            ex = tuple(a - b for a, b in zip(e, z))
            if ex not in seen:
                seen.add(ex)
                out.append(HasseMonomial(side, z, ex))
    return out


def hasse_coefficient(exponent: Sequence[int], order: Sequence[int], p: Optional[int] = None) -> int:
    """prod C(exponent_i, order_i), reduced mod p when p is given."""
    if any(o < 0 or o > e for e, o in zip(exponent, order)):
        raise InvalidOrder("order must lie below the exponent")
    c = 1
    for e, o in zip(exponent, order):
        c *= comb(e, o)
    return c % p if p else c


def is_admissible_local(f: ChartBinomial, delta: Sequence[int]) -> bool:
    d = f.d
    return f.alpha_at(delta) == d and f.beta_at(delta) >= d


def is_minimal_local(f: ChartBinomial, delta: Sequence[int]) -> bool:
    """Admissible delta is minimal when dropping any beta-variable breaks it.

    delta must also consist only of variables that occur in f.
    """
    if not is_admissible_local(f, delta):
        raise NotAdmissible(f"{tuple(delta)} is not admissible for {f}")
    if any(f.alpha[i] == 0 and f.beta[i] == 0 for i in delta):
        return False
    vb = [i for i in delta if f.beta[i] > 0]
    a_d = f.alpha_at(delta)
    sb = sum(f.beta[i] for i in vb)
    return all(sb - f.beta[i] - a_d < 0 for i in vb)


def hasse_locus_components(f: ChartBinomial) -> List[Tuple[int, ...]]:
    if f.d < 2:
        raise InvalidInput("order-d locus needs d >= 2")
    out = []
    for k in range(f.r + 1):
        for S in combinations(range(f.r), k):
            if is_admissible_local(f, S) and is_minimal_local(f, S):
                out.append(S)
    return out


def order_at_orbit(f: ChartBinomial, zero_set: Sequence[int]) -> int:
    return min(f.alpha_at(zero_set), f.beta_at(zero_set))


def unit_coefficient_order(beta: Sequence[int], delta: Sequence[int]) -> Exp:
    """Order with coefficient 1 whose monomial vanishes wherever v^(beta-delta) must.

    Keeps delta_i only where it exhausts beta_i.
    """
    if any(x < 0 or x > b for x, b in zip(delta, beta)):
        raise InvalidOrder("delta must lie below beta")
    return tuple(b if x == b else 0 for x, b in zip(delta, beta))


# ---------------------------------------------------------------- global invariants

@dataclass(frozen=True, order=True)
class InvariantTriple:
    gamma_sigma_max: int
    omega: int
    w_count: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.gamma_sigma_max, self.omega, self.w_count)


@dataclass(frozen=True)
class GlobalInvariant:
    triple: InvariantTriple
    gamma: Dict[RegularCone, int]
    omega: Dict[RegularCone, int]
    v_sigma: Tuple[RegularCone, ...]
    v_min: Tuple[RegularCone, ...]
    w_sigma: Tuple[RegularCone, ...]


def _single_binomial(state: EmbeddingState, k: int) -> ChartBinomial:
    I = state.ideals[k]
    if len(I.binomials) != 1:
        raise InvalidInput(f"chart {k} carries {len(I.binomials)} binomials; hypersurface expected")
    return I.binomials[0]


def face_data(state: EmbeddingState) -> Dict[RegularCone, List[Tuple[int, int, int]]]:
    """(chart, Gamma, Omega) for every cone, from every maximal cone containing it."""
    out: Dict[RegularCone, List[Tuple[int, int, int]]] = {}
    for k, I in enumerate(state.ideals):
        f = _single_binomial(state, k)
        slots = I.chart.slots
        for s in range(len(slots) + 1):
            for S in combinations(range(len(slots)), s):
                a, b = f.alpha_at(S), f.beta_at(S)
                out.setdefault(RegularCone(tuple(slots[i] for i in S)), []).append(
                    (k, min(a, b), max(a, b)))
    return out


def global_invariant(state: EmbeddingState) -> GlobalInvariant:
    data = face_data(state)
    gam = {c: v[0][1] for c, v in data.items()}
    om = {c: v[0][2] for c, v in data.items()}
    g_max = max(gam.values())
    v_sigma = sorted((c for c, g in gam.items() if g == g_max), key=lambda c: c.ray_ids)
    v_min = []
    for c in v_sigma:
        if all(gam[RegularCone(tuple(j for j in c.ray_ids if j != i))] < g_max
               for i in c.ray_ids):
            v_min.append(c)
    o_max = max((om[c] for c in v_min), default=0)
    w = [c for c in v_min if om[c] == o_max]
    return GlobalInvariant(InvariantTriple(g_max, o_max, len(w)), gam, om,
                           tuple(v_sigma), tuple(v_min), tuple(w))


def glue_hasse_ideal(state: EmbeddingState) -> Dict[int, Optional[List[Exp]]]:
    """Per chart: Hasse monomial exponents of order < Gamma_Sigma, None for the unit ideal."""
    inv = global_invariant(state)
    g = inv.triple.gamma_sigma_max
    out: Dict[int, Optional[List[Exp]]] = {}
    for k, I in enumerate(state.ideals):
        f = I.binomials[0]
        if f.d == g and g >= 1:
            out[k] = [h.exponents for h in hasse_monomials(f)]
        else:
            out[k] = None
    return out


# ---------------------------------------------------------------- driver

@dataclass(frozen=True)
class ResolutionStep:
    center: RegularCone
    center_rays: Tuple[Tuple[int, ...], ...]
    invariant: Tuple[int, ...]
    transforms: Tuple[TransformRecord, ...]


@dataclass(frozen=True)
class ResolutionTrace:
    initial_state: EmbeddingState
    steps: Tuple[ResolutionStep, ...]
    final_state: EmbeddingState
    final_invariant: Tuple[int, ...] = ()
    mode: str = "hypersurface"

    def invariants(self) -> List[Tuple[int, ...]]:
        return [s.invariant for s in self.steps] + ([self.final_invariant] if self.final_invariant else [])

    def strictly_decreasing(self) -> bool:
        inv = self.invariants()
        return all(a > b for a, b in zip(inv, inv[1:]))


def choose_center(cones: Sequence[RegularCone]) -> RegularCone:
    return min(cones, key=lambda c: c.ray_ids)


def resolve_hypersurface(state: EmbeddingState, max_steps: int = 200) -> ResolutionTrace:
    initial = state
    steps: List[ResolutionStep] = []
    while True:
        inv = global_invariant(state)
        if inv.triple.gamma_sigma_max <= 1:
            break
        if len(steps) >= max_steps:
            raise NonTermination(f"no resolution after {max_steps} blow-ups")
        delta = choose_center(inv.w_sigma)
        rays = tuple(state.fan.rays[i] for i in delta.ray_ids)
        state, recs = blow_up_global(state, delta)
        steps.append(ResolutionStep(delta, rays, inv.triple.as_tuple(), tuple(recs)))
    return ResolutionTrace(initial, tuple(steps), state, inv.triple.as_tuple())
