"""Chart binomials x^a - x^b y^g, chart ideals, face restriction and gluing.

A chart ideal stands for the lattice ideal of the relation lattice its
binomials and torus relations span. The lattice is what strict transforms,
gluing and standard bases work with; the listed binomials are one
presentation of it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import intmat
from .errors import InvalidInput, SharedSupport, TorsionError, ZeroBinomial
from .lattice_fan import RegularCone, RegularFan, is_regular

Exp = Tuple[int, ...]


def order_key(a: Sequence[int]) -> Tuple[int, ...]:
    """Sort key of the exponent order: (|a|, a_1, ..., a_q) lexicographically."""
    return (sum(a),) + tuple(a)


def exp_less(a: Sequence[int], b: Sequence[int]) -> bool:
    return order_key(a) < order_key(b)


def _vec(v) -> Exp:
    return tuple(int(x) for x in v)


@dataclass(frozen=True, order=True)
class ChartBinomial:
    """x^alpha - x^beta * y^gamma on a chart with r x-variables and m y-variables."""
    alpha: Exp
    beta: Exp
    gamma: Exp = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", _vec(self.alpha))
        object.__setattr__(self, "beta", _vec(self.beta))
        object.__setattr__(self, "gamma", _vec(self.gamma))
        if len(self.alpha) != len(self.beta):
            raise InvalidInput("alpha and beta lengths differ")
        if min(self.alpha + self.beta, default=0) < 0:
            raise InvalidInput("x-exponents must be nonnegative")

    @property
    def r(self) -> int:
        return len(self.alpha)

    @property
    def m(self) -> int:
        return len(self.gamma)

    @property
    def d(self) -> int:
        return sum(self.alpha)

    def alpha_at(self, positions: Iterable[int]) -> int:
        return sum(self.alpha[i] for i in positions)

    def beta_at(self, positions: Iterable[int]) -> int:
        return sum(self.beta[i] for i in positions)

    def lattice_vector(self) -> Exp:
        return tuple(b - a for a, b in zip(self.alpha, self.beta)) + self.gamma

    def is_normalized(self) -> bool:
        if any(a and b for a, b in zip(self.alpha, self.beta)):
            return False
        if not any(self.alpha) and not any(self.beta):
            return False
        return order_key(self.alpha) < order_key(self.beta)

    def __str__(self) -> str:
        return format_binomial(self)


@dataclass(frozen=True)
class TorusRelation:
    """1 - y^gamma."""
    gamma: Exp


@dataclass(frozen=True)
class Monomial:
    """A generator with one term only: x^exponent * y^gamma."""
    exponent: Exp
    gamma: Exp = ()


def normalize(raw_alpha, raw_beta, raw_gamma=()) -> Union[ChartBinomial, TorusRelation, Monomial]:
    """Put a raw exponent triple in normal form.

    A side given as None means that term is absent, which makes the input a
    monomial. Otherwise the sides are swapped so the smaller one in the
    exponent order comes first, negating gamma on a swap.
    """
    gamma = _vec(raw_gamma)
    if raw_alpha is None or raw_beta is None:
        side = raw_beta if raw_alpha is None else raw_alpha
        if side is None:
            raise ZeroBinomial("both terms absent")
        return Monomial(_vec(side), gamma if raw_alpha is None else ())
    alpha, beta = _vec(raw_alpha), _vec(raw_beta)
    if len(alpha) != len(beta):
        raise InvalidInput("alpha and beta lengths differ")
    if min(alpha + beta, default=0) < 0:
        raise InvalidInput("x-exponents must be nonnegative")
    if any(a and b for a, b in zip(alpha, beta)):
        raise SharedSupport(f"alpha={alpha} and beta={beta} share variables")
    if not any(alpha) and not any(beta):
        if not any(gamma):
            raise ZeroBinomial("zero binomial")
        return TorusRelation(gamma)
    if order_key(beta) < order_key(alpha):
        alpha, beta, gamma = beta, alpha, tuple(-x for x in gamma)
    return ChartBinomial(alpha, beta, gamma)


def normalize_binomial(f: ChartBinomial) -> Union[ChartBinomial, TorusRelation]:
    return normalize(f.alpha, f.beta, f.gamma)


@dataclass(frozen=True)
class TorusRelationLattice:
    gammas: Tuple[Exp, ...] = ()

    def __post_init__(self):
        gs = tuple(_vec(g) for g in self.gammas)
        if any(not any(g) for g in gs):
            raise InvalidInput("torus relation exponent is zero")
        object.__setattr__(self, "gammas", gs)

    def canonical(self, m: int) -> Tuple[Exp, ...]:
        return tuple(tuple(r) for r in intmat.hnf(self.gammas, m)) if self.gammas else ()


@dataclass(frozen=True)
class Chart:
    """Variable bookkeeping for one chart.

    slots: fan ray ids in x-variable order. completion: lattice vectors that
    complete the slot rays to a basis; they index the first y-variables.
    moved: ray ids localized into y-variables by face restriction, appended
    after the completion.
    """
    slots: Tuple[int, ...]
    completion: Tuple[Exp, ...] = ()
    moved: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(int(s) for s in self.slots))
        object.__setattr__(self, "completion", tuple(_vec(c) for c in self.completion))
        object.__setattr__(self, "moved", tuple(int(s) for s in self.moved))

    @property
    def nx(self) -> int:
        return len(self.slots)

    @property
    def ny(self) -> int:
        return len(self.completion) + len(self.moved)

    def basis(self, fan: RegularFan) -> List[List[int]]:
        return ([list(fan.rays[s]) for s in self.slots] + [list(c) for c in self.completion]
                + [list(fan.rays[s]) for s in self.moved])

    def positions(self, face: RegularCone) -> Tuple[int, ...]:
        try:
            return tuple(sorted(self.slots.index(i) for i in face.ray_ids))
        except ValueError:
            raise InvalidInput(f"{face.ray_ids} is not a face of chart {self.slots}") from None


def default_chart(r: int, m: int) -> Chart:
    n = r + m
    return Chart(tuple(range(r)), tuple(tuple(int(i == j) for j in range(n)) for i in range(r, n)))


@dataclass(frozen=True)
class ChartIdeal:
    binomials: Tuple[ChartBinomial, ...]
    torus: TorusRelationLattice = TorusRelationLattice()
    chart: Optional[Chart] = None
    monomials: Tuple[Monomial, ...] = ()
    nx_: int = field(default=-1, repr=False)
    ny_: int = field(default=-1, repr=False)

    def __post_init__(self):
        bins = tuple(self.binomials)
        tor = self.torus if isinstance(self.torus, TorusRelationLattice) else TorusRelationLattice(tuple(self.torus))
        object.__setattr__(self, "binomials", bins)
        object.__setattr__(self, "torus", tor)
        object.__setattr__(self, "monomials", tuple(self.monomials))
        if self.chart is None:
            if bins:
                r, m = bins[0].r, bins[0].m
            elif self.monomials:
                r, m = len(self.monomials[0].exponent), len(self.monomials[0].gamma)
            elif self.nx_ >= 0:
                r, m = self.nx_, max(self.ny_, 0)
            else:
                r, m = 0, len(tor.gammas[0]) if tor.gammas else 0
            if self.nx_ >= 0:
                r = self.nx_
            if self.ny_ >= 0:
                m = self.ny_
            object.__setattr__(self, "chart", default_chart(r, m))
        r, m = self.chart.nx, self.chart.ny
        object.__setattr__(self, "nx_", r)
        object.__setattr__(self, "ny_", m)
        for f in bins:
            if f.r != r or f.m != m:
                raise InvalidInput(f"binomial {f} does not fit a chart with {r} x and {m} y variables")
        for g in tor.gammas:
            if len(g) != m:
                raise InvalidInput("torus relation length mismatch")

    @property
    def nx(self) -> int:
        return self.nx_

    @property
    def ny(self) -> int:
        return self.ny_

    @property
    def n(self) -> int:
        return self.nx_ + self.ny_

    def lattice_rows(self) -> List[List[int]]:
        rows = [list(f.lattice_vector()) for f in self.binomials]
        rows += [[0] * self.nx + list(g) for g in self.torus.gammas]
        return rows

    def lattice_hnf(self) -> Tuple[Exp, ...]:
        return tuple(tuple(r) for r in intmat.hnf(self.lattice_rows(), self.n))

    def with_binomials(self, binomials, torus=None) -> "ChartIdeal":
        return ChartIdeal(tuple(binomials), self.torus if torus is None else torus, self.chart,
                          self.monomials)

    def __str__(self) -> str:
        parts = [format_binomial(f) for f in self.binomials]
        parts += ["1 - " + _mono("y", g, allow_neg=True) for g in self.torus.gammas]
        return "{" + ", ".join(parts) + "}"


def make_ideal(items: Iterable, torus: Iterable = (), chart: Optional[Chart] = None,
               nx: int = -1, ny: int = -1) -> ChartIdeal:
    """Normalize raw items ((alpha, beta, gamma) triples or parsed objects) into an ideal."""
    bins, mons, tors = [], [], [tuple(g) for g in torus]
    for it in items:
        if isinstance(it, (ChartBinomial,)):
            it = normalize(it.alpha, it.beta, it.gamma)
        elif isinstance(it, (tuple, list)):
            it = normalize(*it)
        if isinstance(it, ChartBinomial):
            bins.append(it)
        elif isinstance(it, TorusRelation):
            tors.append(it.gamma)
        elif isinstance(it, Monomial):
            mons.append(it)
    return ChartIdeal(tuple(bins), TorusRelationLattice(tuple(tors)), chart, tuple(mons), nx, ny)


# ------------------------------------------------------------ formatting

def _mono(name: str, e: Sequence[int], allow_neg: bool = False) -> str:
    parts = []
    for i, v in enumerate(e):
        if v == 0:
            continue
        parts.append(f"{name}{i + 1}" + (f"^{v}" if v != 1 else ""))
    return "*".join(parts) if parts else "1"


def format_binomial(f: ChartBinomial, xname: str = "x") -> str:
    left = _mono(xname, f.alpha)
    right = _mono(xname, f.beta)
    if any(f.gamma):
        y = _mono("y", f.gamma, allow_neg=True)
        right = y if right == "1" else right + "*" + y
    return f"{left} - {right}"


# ------------------------------------------------------------ restriction

def restrict_positions(ideal: ChartIdeal, keep: Iterable[int]) -> ChartIdeal:
    """Localize at every x-variable not in keep (0-based positions)."""
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= ideal.nx for k in keep):
        raise InvalidInput("position out of range")
    moved = [k for k in range(ideal.nx) if k not in keep]
    if not moved:
        return ideal
    chart = ideal.chart
    new_chart = Chart(tuple(chart.slots[k] for k in keep), chart.completion,
                      chart.moved + tuple(chart.slots[k] for k in moved))
    bins, tors, mons = [], list(ideal.torus.gammas), []
    tors = [g + (0,) * len(moved) for g in tors]
    for f in ideal.binomials:
        shift = tuple(f.beta[k] - f.alpha[k] for k in moved)
        out = normalize(tuple(f.alpha[k] for k in keep), tuple(f.beta[k] for k in keep),
                        f.gamma + shift)
        if isinstance(out, ChartBinomial):
            bins.append(out)
        else:
            tors.append(out.gamma)
    for mo in ideal.monomials:
        mons.append(Monomial(tuple(mo.exponent[k] for k in keep),
                             mo.gamma + tuple(mo.exponent[k] for k in moved)))
    return ChartIdeal(tuple(bins), TorusRelationLattice(tuple(tors)), new_chart, tuple(mons))


def restrict_to_face(ideal: ChartIdeal, face: RegularCone) -> ChartIdeal:
    return restrict_positions(ideal, ideal.chart.positions(face))


# ------------------------------------------------------------ lattice data

@dataclass(frozen=True)
class TorusData:
    rank: int
    c: int
    invariant_factors: Tuple[int, ...]


def torus_lattice(ideal: ChartIdeal) -> TorusData:
    """Smith form of the full relation lattice; raises TorsionError on torsion."""
    rows = ideal.lattice_rows()
    factors = tuple(intmat.invariant_factors(rows, ideal.n)) if rows else ()
    if any(f > 1 for f in factors):
        raise TorsionError(f"relation lattice has invariant factors {factors}")
    return TorusData(len(factors), ideal.n - len(factors), factors)


def character_lattice(ideal: ChartIdeal, fan: RegularFan) -> Tuple[Exp, ...]:
    """The relation lattice written in the fan's dual coordinates, in HNF."""
    basis = ideal.chart.basis(fan)
    if len(basis) != fan.rank:
        raise InvalidInput("chart basis has wrong size")
    inv = intmat.inverse_unimodular(basis)
    rows = ideal.lattice_rows()
    # an exponent vector v pairs with the basis as v = B m, so m = B^-1 v
    chars = [[sum(inv[i][j] * v[j] for j in range(len(v))) for i in range(len(inv))]
             for v in rows]
    return tuple(tuple(r) for r in intmat.hnf(chars, fan.rank)) if chars else ()


def check_unpointed(ideal: ChartIdeal) -> bool:
    return not ideal.monomials


# ------------------------------------------------------------ embedding state

@dataclass(frozen=True)
class EmbeddingState:
    fan: RegularFan
    ideals: Tuple[ChartIdeal, ...]

    def __post_init__(self):
        object.__setattr__(self, "ideals", tuple(self.ideals))
        if len(self.ideals) != len(self.fan.maximal_cones):
            raise InvalidInput("one chart ideal per maximal cone required")
        for k, (c, I) in enumerate(zip(self.fan.maximal_cones, self.ideals)):
            if tuple(sorted(I.chart.slots)) != c.ray_ids:
                raise InvalidInput(f"chart {k} slots do not match cone rays")
            if I.chart.moved:
                raise InvalidInput(f"chart {k} is a localized chart")
            if I.n != self.fan.rank:
                raise InvalidInput(f"chart {k} has {I.n} variables, lattice rank is {self.fan.rank}")
            if I.monomials:
                raise InvalidInput(f"chart {k} has a monomial generator (embedding must be unpointed)")

    def chart_ids(self) -> range:
        return range(len(self.ideals))


def make_state(fan: RegularFan, chart_items: Sequence, completions: Optional[Sequence] = None
               ) -> EmbeddingState:
    """Build a state from raw per-chart data.

    chart_items[k] is (binomial triples, torus gammas) for maximal cone k in
    the cone's sorted ray order. Completions default to a Smith-form
    completion of the cone's rays.
    """
    ideals = []
    for k, c in enumerate(fan.maximal_cones):
        items, torus = chart_items[k]
        if completions is not None and completions[k] is not None:
            comp = tuple(_vec(v) for v in completions[k])
        else:
            comp = tuple(tuple(v) for v in intmat.complete_basis(
                [list(v) for v in fan.ray_vectors(c)], fan.rank))
        chart = Chart(c.ray_ids, comp)
        if not is_regular(chart.basis(fan)) or len(chart.basis(fan)) != fan.rank:
            raise InvalidInput(f"completion of chart {k} is not a lattice basis")
        ideals.append(make_ideal(items, torus, chart))
    return EmbeddingState(fan, tuple(ideals))


@dataclass(frozen=True)
class GluingViolation:
    cone_a: int
    cone_b: int
    face: Tuple[int, ...]


def check_gluing(state: EmbeddingState) -> Tuple[bool, List[GluingViolation]]:
    """Compare restrictions of every pair of charts on their shared face."""
    bad = []
    cones = state.fan.maximal_cones
    for a, b in combinations(range(len(cones)), 2):
        shared = RegularCone(tuple(set(cones[a].ray_ids) & set(cones[b].ray_ids)))
        ra = restrict_to_face(state.ideals[a], shared)
        rb = restrict_to_face(state.ideals[b], shared)
        if character_lattice(ra, state.fan) != character_lattice(rb, state.fan):
            bad.append(GluingViolation(a, b, shared.ray_ids))
    return (not bad), bad
