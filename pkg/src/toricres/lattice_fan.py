"""Regular cones and fans in Z^n, faces, star subdivision, orbit closures."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from . import intmat
from .errors import InvalidCenter, InvalidInput

LatticeVector = Tuple[int, ...]


def is_regular(rays: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors extend to a basis of the integer lattice."""
    rays = [tuple(int(x) for x in r) for r in rays]
    if not rays:
        return True
    n = len(rays[0])
    if any(len(r) != n for r in rays):
        raise InvalidInput("rays have different lengths")
    if len(rays) > n:
        return False
    factors = intmat.invariant_factors(rays, n)
    return len(factors) == len(rays) and all(f == 1 for f in factors)


@dataclass(frozen=True, order=True)
class RegularCone:
    ray_ids: Tuple[int, ...] = ()

    def __post_init__(self):
        ids = tuple(sorted(int(i) for i in self.ray_ids))
        if len(set(ids)) != len(ids):
            raise InvalidInput(f"repeated ray id in cone {ids}")
        object.__setattr__(self, "ray_ids", ids)

    @property
    def dim(self) -> int:
        return len(self.ray_ids)

    def is_face_of(self, other: "RegularCone") -> bool:
        return set(self.ray_ids) <= set(other.ray_ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ray_ids)

    def __len__(self) -> int:
        return len(self.ray_ids)


def cone(*ids: int) -> RegularCone:
    return RegularCone(tuple(ids))


def faces(c: RegularCone) -> List[RegularCone]:
    """All 2^r faces of a simplicial cone, by increasing dimension."""
    out = []
    for k in range(len(c.ray_ids) + 1):
        for sub in combinations(c.ray_ids, k):
            out.append(RegularCone(sub))
    return out


def _separated(rays, a: Sequence[int], b: Sequence[int]) -> bool:
    """Cone(a) and Cone(b) meet exactly in Cone(a ∩ b).

    Looks for a linear form h with h = 0 on shared rays, h >= 1 on the rest
    of a and h <= -1 on the rest of b. For simplicial cones this exists iff
    the intersection is the common face.
    """
    from scipy.optimize import linprog

    shared = sorted(set(a) & set(b))
    only_a = [i for i in a if i not in shared]
    only_b = [i for i in b if i not in shared]
    if not only_a or not only_b:
        return True
    n = len(rays[0])
    A_ub = [[-x for x in rays[i]] for i in only_a] + [list(rays[i]) for i in only_b]
    b_ub = [-1.0] * (len(only_a) + len(only_b))
    A_eq = [list(rays[i]) for i in shared] or None
    b_eq = [0.0] * len(shared) if shared else None
    res = linprog(np.zeros(n), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * n, method="highs")
    return res.status == 0


@dataclass(frozen=True)
class RegularFan:
    rank: int
    rays: Tuple[LatticeVector, ...]
    maximal_cones: Tuple[RegularCone, ...]
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "maximal_cones",
                           tuple(c if isinstance(c, RegularCone) else RegularCone(tuple(c))
                                 for c in self.maximal_cones))
        if self.validate:
            self.check()

    def check(self) -> None:
        n = self.rank
        for i, r in enumerate(self.rays):
            if len(r) != n:
                raise InvalidInput(f"ray {i} has length {len(r)}, expected {n}")
            if not any(r):
                raise InvalidInput(f"ray {i} is zero")
        if len(set(self.rays)) != len(self.rays):
            raise InvalidInput("duplicate rays")
        cones = self.maximal_cones
        for k, c in enumerate(cones):
            if any(i < 0 or i >= len(self.rays) for i in c.ray_ids):
                raise InvalidInput(f"cone {k} references a missing ray")
            if not is_regular([self.rays[i] for i in c.ray_ids]):
                raise InvalidInput(f"cone {k} is not regular")
        for a, b in combinations(range(len(cones)), 2):
            sa, sb = set(cones[a].ray_ids), set(cones[b].ray_ids)
            if sa <= sb or sb <= sa:
                raise InvalidInput(f"cone {a} and cone {b}: one is a face of the other")
            if not _separated(self.rays, cones[a].ray_ids, cones[b].ray_ids):
                raise InvalidInput(f"cones {a} and {b} do not meet in a common face")

    def ray_vectors(self, c: RegularCone | Sequence[int]) -> List[LatticeVector]:
        ids = c.ray_ids if isinstance(c, RegularCone) else c
        return [self.rays[i] for i in ids]

    def all_cones(self) -> List[RegularCone]:
        """Every cone of the fan (faces of maximal cones), deduplicated, sorted."""
        seen = set()
        for c in self.maximal_cones:
            for f in faces(c):
                seen.add(f)
        return sorted(seen, key=lambda c: (c.dim, c.ray_ids))

    def containing(self, delta: RegularCone) -> List[int]:
        return [k for k, c in enumerate(self.maximal_cones) if delta.is_face_of(c)]

    def ray_id(self, vec: Sequence[int]) -> int:
        return self.rays.index(tuple(vec))

    def contains_points(self, pts: np.ndarray) -> np.ndarray:
        """Membership of integer points (rows) in the support of the fan."""
        from .kernels import cone_membership
        pts = np.asarray(pts, dtype=np.int64)
        inside = np.zeros(len(pts), dtype=bool)
        for c in self.maximal_cones:
            basis = [list(v) for v in self.ray_vectors(c)]
            full = basis + intmat.complete_basis(basis, self.rank)
            inv = np.array(intmat.inverse_unimodular(intmat.transpose(full)), dtype=np.int64)
            inside |= cone_membership(pts, inv, len(basis))
        return inside


def standard_fan(n: int, r: int | None = None) -> RegularFan:
    """Fan of the single cone spanned by the first r unit vectors of Z^n."""
    r = n if r is None else r
    rays = tuple(tuple(int(i == j) for j in range(n)) for i in range(r))
    return RegularFan(n, rays, (RegularCone(tuple(range(r))),), validate=False)


def star_subdivision(fan: RegularFan, delta: RegularCone,
                     validate: bool = False) -> Tuple[RegularFan, List[Tuple[int, List[Tuple[int, int]]]]]:
    """Star subdivision at delta.

    Returns the new fan and a provenance list: for every old maximal cone id,
    the pairs (new cone id, replaced ray id) that came from it. The replaced
    ray id is -1 for cones carried over unchanged.
    """
    if delta.dim == 0:
        raise InvalidCenter("cannot subdivide at the zero cone")
    containing = fan.containing(delta)
    if not containing:
        raise InvalidCenter(f"{delta.ray_ids} is not a face of any maximal cone")
    if delta.dim == 1:
        prov = [(k, [(k, -1)]) for k in range(len(fan.maximal_cones))]
        return fan, prov
    e0 = tuple(sum(col) for col in zip(*fan.ray_vectors(delta)))
    if e0 in fan.rays:
        raise InvalidCenter("barycentre already a ray; fan is not simplicial here")
    rays = fan.rays + (e0,)
    new_id = len(fan.rays)
    cones: List[RegularCone] = []
    prov = []
    for k, c in enumerate(fan.maximal_cones):
        if k in containing:
            got = []
            for i in delta.ray_ids:
                ids = tuple(j for j in c.ray_ids if j != i) + (new_id,)
                got.append((len(cones), i))
                cones.append(RegularCone(ids))
            prov.append((k, got))
        else:
            prov.append((k, [(len(cones), -1)]))
            cones.append(c)
    return RegularFan(fan.rank, rays, tuple(cones), validate=validate), prov


@dataclass(frozen=True)
class OrbitClosure:
    delta: RegularCone


def orbit_closure(fan: RegularFan, delta: RegularCone) -> OrbitClosure:
    if not fan.containing(delta):
        raise InvalidInput(f"{delta.ray_ids} is not a cone of the fan")
    return OrbitClosure(delta)


def orbit_closure_ideal(delta: RegularCone, chart: Sequence[int] | RegularCone) -> Tuple[int, ...]:
    """Positions (0-based) of delta's rays within the chart's ordered rays."""
    slots = chart.ray_ids if isinstance(chart, RegularCone) else tuple(chart)
    try:
        return tuple(sorted(slots.index(i) for i in delta.ray_ids))
    except ValueError:
        raise InvalidInput(f"{delta.ray_ids} is not a face of {slots}") from None


def sample_support_points(fan: RegularFan, count: int, rng: np.random.Generator,
                          scale: int = 6) -> np.ndarray:
    """Mix of points drawn from inside the support and from the whole lattice."""
    n = fan.rank
    half = count // 2
    pts = rng.integers(-scale, scale + 1, size=(count - half, n))
    inner = []
    for _ in range(half):
        c = fan.maximal_cones[rng.integers(len(fan.maximal_cones))]
        coef = rng.integers(0, scale + 1, size=c.dim)
        v = np.zeros(n, dtype=np.int64)
        for a, rid in zip(coef, c.ray_ids):
            v += a * np.array(fan.rays[rid], dtype=np.int64)
        inner.append(v)
    inner = np.array(inner, dtype=np.int64).reshape(half, n)
    return np.vstack([pts.astype(np.int64), inner])
