"""Substitution rule, total and strict transforms, and the global blow-up step."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple, Union

from .binomial_charts import (Chart, ChartBinomial, ChartIdeal, EmbeddingState, Exp,
                              TorusRelation, TorusRelationLattice, normalize)
from .errors import InvalidChart
from .lattice_fan import RegularCone, star_subdivision


class RawExponents(NamedTuple):
    alpha: Exp
    beta: Exp
    gamma: Exp


@dataclass(frozen=True)
class TransformRecord:
    center: RegularCone          # global ray ids
    parent: int                  # old chart id
    chart: int                   # new chart id
    chart_index: int             # position i taken by the exceptional coordinate
    before: ChartBinomial
    total: RawExponents
    strict: Union[ChartBinomial, TorusRelation]


def _check(delta: Sequence[int], i: int, r: int) -> None:
    if i not in delta:
        raise InvalidChart(f"chart index {i} is not in the centre {tuple(delta)}")
    if any(j < 0 or j >= r for j in delta):
        raise InvalidChart("centre position out of range")


def total_transform(f: ChartBinomial, delta: Sequence[int], i: int) -> RawExponents:
    """x_j -> w_i w_j for j in delta minus i, x_j -> w_j otherwise (0-based positions)."""
    delta = tuple(delta)
    _check(delta, i, f.r)
    a, b = list(f.alpha), list(f.beta)
    a[i] = f.alpha_at(delta)
    b[i] = f.beta_at(delta)
    return RawExponents(tuple(a), tuple(b), f.gamma)


def strict_transform(f: ChartBinomial, delta: Sequence[int], i: int
                     ) -> Union[ChartBinomial, TorusRelation]:
    tot = total_transform(f, delta, i)
    a, b = list(tot.alpha), list(tot.beta)
    m = min(a[i], b[i])
    a[i] -= m
    b[i] -= m
    return normalize(a, b, tot.gamma)


def blow_up_global(state: EmbeddingState, delta: RegularCone
                   ) -> Tuple[EmbeddingState, List[TransformRecord]]:
    new_fan, prov = star_subdivision(state.fan, delta)
    if delta.dim == 1:
        return state, []
    e0 = len(new_fan.rays) - 1
    ideals: List[ChartIdeal] = [None] * len(new_fan.maximal_cones)  # type: ignore
    records: List[TransformRecord] = []
    for k, pairs in prov:
        I = state.ideals[k]
        if pairs[0][1] == -1:
            ideals[pairs[0][0]] = I
            continue
        pos = I.chart.positions(delta)
        for new_id, ray in pairs:
            i = I.chart.slots.index(ray)
            slots = list(I.chart.slots)
            slots[i] = e0
            bins, tors = [], list(I.torus.gammas)
            for f in I.binomials:
                st = strict_transform(f, pos, i)
                records.append(TransformRecord(delta, k, new_id, i, f,
                                               total_transform(f, pos, i), st))
                if isinstance(st, ChartBinomial):
                    bins.append(st)
                else:
                    tors.append(st.gamma)
            ideals[new_id] = ChartIdeal(tuple(bins), TorusRelationLattice(tuple(tors)),
                                        Chart(tuple(slots), I.chart.completion))
    return EmbeddingState(new_fan, tuple(ideals)), records
