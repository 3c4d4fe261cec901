"""K_m minors in Cay(G, S ∪ S² ∪ S³) from m disjoint rays in Cay(G, S).

The rays are connected pair by pair, in lexicographic order, by connectors
routed outside a frozen ball around the identity. A connector that runs
into another ray is repaired:

* one vertex shared with ray k: that vertex leaves the ray, which now
  jumps over it with an S² step;
* two consecutive ray vertices shared: both leave the ray (an S³ step);
* otherwise, with first and last shared ray positions a and a+d (d >= 2):
  the connector is rerouted along the ray vertices at offsets L from a and
  the ray keeps the vertices at offsets L+1. Both use hops of 2 and 3, so
  they are S²∪S³ paths, and they are disjoint because L has no two
  consecutive offsets.

After each pair the frozen radius grows to cover everything touched, so
later pairs never disturb earlier work. Finally each connector is split
at its middle between its two rays, and the truncated rays plus the halves
are the branch sets.

Rays must move strictly outward (distance from the identity increasing by
one per step). Then the part of a ray beyond any radius is a suffix, and
that suffix is an untouched S-path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .cayley import Ball, build_ball
from .ends import Insufficient, RaySystem, extract_rays
from .errors import (
    FrozenRegionExhausted,
    InvariantViolation,
    RoutingFailed,
    SegmentTooShort,
    TooShort,
)
from .graph import Graph, complete_graph
from .groups import GenSet, GroupModel, power_union
from .minors import MinorEmbedding, verify_embedding

AVOID_FIRST = "avoid-first"
SHORTEST = "shortest"


def decompose_23(n: int) -> tuple[int, int]:
    """(r, s) with n = 2r + 3s; s is 0 for even n and 1 for odd n."""
    if n < 2:
        raise TooShort(f"{n} cannot be written as 2r + 3s with r, s >= 0 and r + s >= 1")
    if n % 2 == 0:
        return n // 2, 0
    return (n - 3) // 2, 1


def detour_offsets(d: int) -> tuple[list[int], list[int]]:
    """Ray offsets used by the rerouted connector and by the repaired ray.

    For even d: [0, 2, ..., d] and [1, 3, ..., d+1].
    For odd d:  [0, 3, 5, ..., d] and [1, 4, 6, ..., d+1].
    """
    r, s = decompose_23(d)
    offsets = [0]
    for hop in [3] * s + [2] * r:
        offsets.append(offsets[-1] + hop)
    return offsets, [o + 1 for o in offsets]


@dataclass(frozen=True)
class Repair:
    ray: int
    case: str  # "single", "pair" or "detour"
    removed: tuple[int, ...]
    connector_segment: tuple[int, ...] = ()
    ray_segment: tuple[int, ...] = ()
    span: int = 0
    frozen: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "ray": self.ray,
            "case": self.case,
            "removed": list(self.removed),
            "connector_segment": list(self.connector_segment),
            "ray_segment": list(self.ray_segment),
            "span": self.span,
        }


@dataclass(frozen=True)
class PairTrace:
    pair: tuple[int, int]
    routing: str  # "avoiding" or "crossing"
    connector: tuple[int, ...]
    repairs: tuple[Repair, ...]
    frozen_radius: int

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "routing": self.routing,
            "connector_length": len(self.connector) - 1,
            "repairs": [r.to_json() for r in self.repairs],
            "frozen_radius": self.frozen_radius,
        }


@dataclass(frozen=True)
class ConstructionState:
    """Rays and connectors, all as vertex indices of ``base_ball``."""

    base_ball: Ball = field(repr=False)
    boosted_ball: Ball = field(repr=False)
    rays: tuple[tuple[int, ...], ...]
    connectors: dict = field(default_factory=dict)
    frozen_radius: int = -1
    used: frozenset = frozenset()
    trace: tuple[PairTrace, ...] = ()

    @property
    def m(self) -> int:
        return len(self.rays)

    def boosted_adjacent(self, u: int, v: int) -> bool:
        model = self.base_ball.model
        x, y = self.base_ball.vertices[u], self.base_ball.vertices[v]
        return model.mul(model.inv(x), y) in self.boosted_ball.gens

    def tail_start(self, k: int) -> int:
        """First ray position beyond the frozen radius."""
        dist = self.base_ball.dist
        ray = self.rays[k]
        t = len(ray)
        while t > 0 and dist[ray[t - 1]] > self.frozen_radius:
            t -= 1
        return t

    def tail(self, k: int) -> tuple[int, ...]:
        return self.rays[k][self.tail_start(k):]


def initial_state(model: GroupModel, gens: GenSet, rays: RaySystem) -> ConstructionState:
    base = rays.ball
    if base.model.model_id != model.model_id or base.gens != gens:
        raise ValueError("ray system was not extracted from Cay(model, gens)")
    for k, path in enumerate(rays.paths):
        if any(base.dist[b] != base.dist[a] + 1 for a, b in zip(path, path[1:])):
            raise ValueError(f"ray {k} does not move strictly outward")
    if not rays.is_valid():
        raise ValueError("; ".join(rays.violations()))
    boosted_gens = power_union(model, gens, 3)
    boosted = build_ball(model, boosted_gens, math.ceil(base.radius / 3))
    missing = [v for v in base.vertices if v not in boosted]
    if missing:
        raise InvariantViolation(f"{len(missing)} base vertices missing from the boosted ball")
    return ConstructionState(base, boosted, tuple(tuple(p) for p in rays.paths))


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def state_violations(state: ConstructionState) -> list[str]:
    problems = []
    owner: dict[int, int] = {}
    for k, ray in enumerate(state.rays):
        for v in ray:
            if v in owner:
                problems.append(f"rays {owner[v]} and {k} share vertex {v}")
            owner[v] = k
        for a, b in zip(ray, ray[1:]):
            if not state.boosted_adjacent(a, b):
                problems.append(f"ray {k}: step {a}->{b} is not in S∪S²∪S³")
    interiors: dict[int, tuple[int, int]] = {}
    for (i, j), path in state.connectors.items():
        if owner.get(path[0]) != i or owner.get(path[-1]) != j:
            problems.append(f"connector {i}-{j} does not join rays {i} and {j}")
        for a, b in zip(path, path[1:]):
            if not state.boosted_adjacent(a, b):
                problems.append(f"connector {i}-{j}: step {a}->{b} is not in S∪S²∪S³")
        for v in path[1:-1]:
            if v in owner:
                problems.append(f"connector {i}-{j} meets ray {owner[v]} at {v}")
            if v in interiors:
                problems.append(f"connectors {interiors[v]} and {(i, j)} share {v}")
            interiors[v] = (i, j)
    return problems


def check_state(state: ConstructionState) -> None:
    problems = state_violations(state)
    if problems:
        raise InvariantViolation("; ".join(problems[:5]))


# ---------------------------------------------------------------------------
# routing and repairs
# ---------------------------------------------------------------------------


def _route(state: ConstructionState, i: int, j: int, avoid_rays: bool) -> list[int] | None:
    """Shortest base-graph path from the tail of ray i to the tail of ray j,
    outside the frozen ball and off every used vertex."""
    ball = state.base_ball
    rho = state.frozen_radius
    sources = state.tail(i)
    targets = set(state.tail(j))
    on_ray = {v for ray in state.rays for v in ray}
    own = set(state.rays[i]) | set(state.rays[j])
    parent: dict[int, int | None] = {v: None for v in sources}
    frontier = list(sources)
    while frontier:
        nxt = []
        for u in frontier:
            for w in ball.adjacency[u]:
                if w in parent or ball.dist[w] <= rho or w in state.used:
                    continue
                if w in targets:
                    path = [w, u]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if w in own or (avoid_rays and w in on_ray):
                    continue
                parent[w] = u
                nxt.append(w)
        frontier = nxt
    return None


def repair_intersection(
    state: ConstructionState, connector: list[int], k: int
) -> tuple[ConstructionState, list[int], Repair]:
    """Remove every meeting of ``connector`` with ray ``k``.

    Returns the new state, the (possibly rerouted) connector and a record
    of what was done.
    """
    ray = list(state.rays[k])
    pos = {v: p for p, v in enumerate(ray)}
    hits = [c for c, v in enumerate(connector) if v in pos]
    if not hits:
        raise ValueError(f"connector does not meet ray {k}")
    first, last = hits[0], hits[-1]
    qa, qb = pos[connector[first]], pos[connector[last]]
    lo, hi = min(qa, qb), max(qa, qb)
    if lo < state.tail_start(k):
        raise RoutingFailed(f"connector meets frozen part of ray {k}")

    if first == last:
        new_ray = ray[:lo] + ray[lo + 1:]
        frozen = tuple(ray[lo + 1: lo + 2])
        record = Repair(k, "single", (ray[lo],), frozen=frozen)
        new_connector = connector
    elif hi - lo == 1:
        new_ray = ray[:lo] + ray[lo + 2:]
        frozen = tuple(ray[lo + 2: lo + 3])
        new_connector = connector[:first] + [connector[first], connector[last]] + connector[last + 1:]
        record = Repair(k, "pair", (ray[lo], ray[hi]), frozen=frozen)
    else:
        d = hi - lo
        if hi + 1 >= len(ray):
            raise SegmentTooShort(f"ray {k} ends before the detour can rejoin it")
        to_connector, to_ray = detour_offsets(d)
        detour = [ray[lo + o] for o in to_connector]
        if qa > qb:
            detour.reverse()
        kept = [ray[lo + o] for o in to_ray]
        new_connector = connector[:first] + detour + connector[last + 1:]
        new_ray = ray[:lo] + kept + ray[hi + 2:]
        removed = tuple(v for v in ray[lo: hi + 2] if v not in kept)
        record = Repair(k, "detour", removed, tuple(detour), tuple(kept), d, frozen=tuple(kept))

    rays = list(state.rays)
    rays[k] = tuple(new_ray)
    touched = set(record.removed) | set(record.frozen) | set(record.connector_segment)
    new_state = replace(state, rays=tuple(rays), used=state.used | touched)
    return new_state, new_connector, record


def connect_pair(
    state: ConstructionState,
    i: int,
    j: int,
    strategy: str = AVOID_FIRST,
    check: bool = True,
) -> ConstructionState:
    """Join rays i and j by a connector avoiding every other ray and connector."""
    if not i < j:
        raise ValueError("pairs are ordered i < j")
    ball = state.base_ball
    suggest = 2 * ball.radius
    if not state.tail(i) or not state.tail(j):
        raise FrozenRegionExhausted(
            f"ray {i if not state.tail(i) else j} has no vertices beyond frozen radius {state.frozen_radius}",
            pair=(i, j),
            suggested_radius=suggest,
        )
    routing = "avoiding"
    path = _route(state, i, j, avoid_rays=True) if strategy == AVOID_FIRST else None
    if path is None:
        routing = "crossing"
        path = _route(state, i, j, avoid_rays=False)
    if path is None:
        raise RoutingFailed(
            f"no path from ray {i} to ray {j} outside radius {state.frozen_radius}",
            pair=(i, j),
            suggested_radius=suggest,
        )

    repairs = []
    for k in range(state.m):
        if k in (i, j):
            continue
        if not set(path[1:-1]) & set(state.rays[k]):
            continue
        try:
            state, path, record = repair_intersection(state, path, k)
        except SegmentTooShort as exc:
            raise FrozenRegionExhausted(str(exc), pair=(i, j), suggested_radius=suggest) from None
        except RoutingFailed as exc:
            raise RoutingFailed(str(exc), pair=(i, j), suggested_radius=suggest) from None
        repairs.append(record)
        if check:
            check_state(state)

    touched = set(path) | set(state.used)
    frozen = max([state.frozen_radius] + [ball.dist[v] for v in touched])
    connectors = dict(state.connectors)
    connectors[(i, j)] = tuple(path)
    trace = PairTrace((i, j), routing, tuple(path), tuple(repairs), frozen)
    state = replace(
        state,
        connectors=connectors,
        frozen_radius=frozen,
        used=state.used | set(path),
        trace=state.trace + (trace,),
    )
    if check:
        check_state(state)
    return state


def assemble_embedding(state: ConstructionState) -> MinorEmbedding:
    """Branch sets over the base-ball indices (checked later on the boosted ball)."""
    m = state.m
    missing = [(i, j) for i in range(m) for j in range(i + 1, m) if (i, j) not in state.connectors]
    if missing:
        raise ValueError(f"connectors missing for pairs {missing}")
    dist = state.base_ball.dist
    branch: list[list[int]] = []
    for ray in state.rays:
        kept = [v for v in ray if dist[v] <= state.frozen_radius]
        branch.append(kept or [ray[0]])
    witness = {}
    for (i, j), path in sorted(state.connectors.items()):
        inner = list(path[1:-1])
        # middle vertex goes to the lower-index ray
        half = math.ceil(len(inner) / 2)
        branch[i].extend(inner[:half])
        branch[j].extend(inner[half:])
        witness[(i, j)] = (path[half], path[half + 1])
    return MinorEmbedding(
        complete_graph(m),
        tuple(tuple(sorted(b)) for b in branch),
        witness,
    )


@dataclass
class ConstructionResult:
    embedding: MinorEmbedding  # over boosted-ball indices
    base_embedding: MinorEmbedding
    state: ConstructionState
    verified: bool

    @property
    def boosted_ball(self) -> Ball:
        return self.state.boosted_ball

    def to_json(self) -> dict:
        boosted = self.state.boosted_ball
        return {
            "m": self.state.m,
            "verified": self.verified,
            "base_radius": self.state.base_ball.radius,
            "boosted_radius": boosted.radius,
            "boosted_gens": len(boosted.gens),
            "frozen_radius": self.state.frozen_radius,
            "certificate": self.embedding.to_json(),
            "branch_keys": [
                [boosted.label(v) for v in b] for b in self.embedding.branch_sets
            ],
            "trace": [t.to_json() for t in self.state.trace],
        }


def build_clique_minor(
    model: GroupModel,
    gens: GenSet,
    rays: RaySystem,
    m: int | None = None,
    strategy: str = AVOID_FIRST,
    check: bool = True,
) -> ConstructionResult:
    """Run the whole construction and verify the K_m certificate on the boosted ball."""
    if m is not None and m != rays.m:
        raise ValueError(f"m = {m} but {rays.m} rays were given")
    state = initial_state(model, gens, rays)
    if check:
        check_state(state)
    last = state.frozen_radius
    for i in range(state.m):
        for j in range(i + 1, state.m):
            state = connect_pair(state, i, j, strategy, check)
            if state.frozen_radius < last:
                raise InvariantViolation("frozen radius decreased")
            last = state.frozen_radius
    base_emb = assemble_embedding(state)
    boosted = state.boosted_ball
    mapping = {v: boosted.index(state.base_ball.vertices[v]) for b in base_emb.branch_sets for v in b}
    emb = base_emb.relabel(mapping)
    ok = verify_embedding(boosted.graph(), emb)
    if not ok:
        raise InvariantViolation("assembled certificate does not verify on the boosted ball")
    return ConstructionResult(emb, base_emb, state, ok)


def rays_for_construction(ball: Ball, m: int, start_radius: int | None = None) -> RaySystem | Insufficient:
    """Outward rays from the smallest sphere that supports ``m`` of them."""
    if start_radius is not None:
        return extract_rays(ball, m, start_radius)
    best: Insufficient | None = None
    for s in range(1, ball.radius):
        found = extract_rays(ball, m, s)
        if isinstance(found, RaySystem):
            return found
        if best is None or found.max_found > best.max_found:
            best = found
    return best if best is not None else Insufficient(m, 0)
