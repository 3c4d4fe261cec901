"""Ends of Cayley graphs seen through a finite ball.

The separator is always the closed ball of radius ``r``. Components of the
annulus ``r < dist <= R`` that reach the outer sphere are *live*: they are
where the ends of the group show up at this scale. Thin-end sizes are
reported as the number of disjoint paths crossing a live component from
sphere ``r+1`` to sphere ``R``. That is a finite-scale stand-in for the
size of an end, which is a limit over all separators.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .cayley import Ball, build_ball, sphere
from .errors import DeadComponent, RadiusOutOfRange
from .flows import directed_disjoint_paths, max_disjoint_paths
from .groups import GenSet, GroupModel


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    live: bool


@dataclass(frozen=True)
class EndProfile:
    inner_radius: int
    outer_radius: int
    components: tuple[Component, ...]

    @property
    def live_count(self) -> int:
        return sum(1 for c in self.components if c.live)

    def live_components(self) -> list[int]:
        return [k for k, c in enumerate(self.components) if c.live]


def live_components(ball: Ball, r: int) -> EndProfile:
    """Components of the ball minus its radius-``r`` core, ordered by least vertex."""
    if not 0 <= r < ball.radius:
        raise RadiusOutOfRange(f"inner radius {r} must lie in 0..{ball.radius - 1}")
    outside = [v for v in range(ball.n) if ball.dist[v] > r]
    seen: set[int] = set()
    comps = []
    for s in outside:
        if s in seen:
            continue
        seen.add(s)
        members = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in ball.adjacency[u]:
                if ball.dist[w] > r and w not in seen:
                    seen.add(w)
                    members.append(w)
                    queue.append(w)
        members.sort()
        live = any(ball.dist[v] == ball.radius for v in members)
        comps.append(Component(tuple(members), live))
    return EndProfile(r, ball.radius, tuple(comps))


def end_count_estimate(model: GroupModel, gens: GenSet, r: int, R: int) -> int:
    if not 0 <= r < R:
        raise RadiusOutOfRange("need 0 <= r < R")
    return live_components(build_ball(model, gens, R), r).live_count


def _live_component(ball: Ball, r: int, component_id: int) -> Component:
    profile = live_components(ball, r)
    if not 0 <= component_id < len(profile.components):
        raise IndexError(f"no component {component_id} at inner radius {r}")
    comp = profile.components[component_id]
    if not comp.live:
        raise DeadComponent(f"component {component_id} does not reach sphere {ball.radius}")
    return comp


def thin_end_size_at_scale(ball: Ball, r: int, component_id: int) -> int:
    """Disjoint paths across a live component, from sphere r+1 to sphere R."""
    if r > ball.radius - 2:
        raise RadiusOutOfRange("thin-end size needs r <= R - 2")
    comp = _live_component(ball, r, component_id)
    members = set(comp.vertices)
    sources = [v for v in comp.vertices if ball.dist[v] == r + 1]
    targets = [v for v in comp.vertices if ball.dist[v] == ball.radius]
    count, _ = max_disjoint_paths(ball.graph(), sources, targets, distinct_endpoints=True, within=members)
    return count


def end_report(ball: Ball, r: int) -> dict:
    profile = live_components(ball, r)
    rows = []
    for k, comp in enumerate(profile.components):
        row = {"size": len(comp.vertices), "live": comp.live, "disjoint_paths": None}
        if comp.live and r <= ball.radius - 2:
            row["disjoint_paths"] = thin_end_size_at_scale(ball, r, k)
        rows.append(row)
    return {
        "r": r,
        "R": ball.radius,
        "components": rows,
        "end_count_estimate": profile.live_count,
    }


# ---------------------------------------------------------------------------
# rays
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RaySystem:
    """Pairwise disjoint paths running out to the outer sphere of ``ball``."""

    ball: Ball = field(repr=False)
    paths: tuple[tuple[int, ...], ...]
    start_radius: int
    component_id: int | None = None

    @property
    def m(self) -> int:
        return len(self.paths)

    def violations(self) -> list[str]:
        problems = []
        seen: dict[int, int] = {}
        for k, path in enumerate(self.paths):
            if not path:
                problems.append(f"ray {k} is empty")
                continue
            for v in path:
                if v in seen:
                    problems.append(f"rays {seen[v]} and {k} share vertex {v}")
                seen[v] = k
            for a, b in zip(path, path[1:]):
                if b not in self.ball.adjacency[a]:
                    problems.append(f"ray {k}: {a} and {b} are not adjacent")
            if self.ball.dist[path[-1]] != self.ball.radius:
                problems.append(f"ray {k} ends inside the ball")
        return problems

    def is_valid(self) -> bool:
        return not self.violations()

    def to_json(self) -> dict:
        return {
            "start_radius": self.start_radius,
            "component_id": self.component_id,
            "rays": [list(p) for p in self.paths],
            "ray_keys": [[self.ball.label(v) for v in p] for p in self.paths],
        }


@dataclass(frozen=True)
class Insufficient:
    """Fewer disjoint rays exist than were asked for."""

    requested: int
    max_found: int

    def to_json(self) -> dict:
        return {"status": "insufficient", "requested": self.requested, "max_found": self.max_found}


def extract_rays(
    ball: Ball,
    m: int,
    start_radius: int = 1,
    component_id: int | None = None,
    monotone: bool = True,
) -> RaySystem | Insufficient:
    """``m`` disjoint paths from sphere ``start_radius`` to the outer sphere.

    With ``monotone`` every step moves one sphere outward, so each ray is a
    geodesic prefix and its part beyond any radius is a suffix. A
    ``component_id`` refers to the live components at inner radius
    ``start_radius - 1``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 <= start_radius < ball.radius:
        raise RadiusOutOfRange(f"start radius must lie in 0..{ball.radius - 1}")
    if component_id is not None:
        if start_radius < 1:
            raise RadiusOutOfRange("a component needs start_radius >= 1")
        region = set(_live_component(ball, start_radius - 1, component_id).vertices)
    else:
        region = {v for v in range(ball.n) if ball.dist[v] >= start_radius}
    sources = [v for v in sorted(region) if ball.dist[v] == start_radius]
    targets = [v for v in sorted(region) if ball.dist[v] == ball.radius]
    if not sources or not targets:
        return Insufficient(m, 0)
    if monotone:
        arcs = [
            (u, v)
            for u in region
            for v in ball.adjacency[u]
            if v in region and ball.dist[v] == ball.dist[u] + 1
        ]
        paths = directed_disjoint_paths(ball.n, arcs, sources, targets)
    else:
        _, paths = max_disjoint_paths(ball.graph(), sources, targets, distinct_endpoints=True, within=region)
    if len(paths) < m:
        return Insufficient(m, len(paths))
    paths.sort(key=lambda p: p[0])
    return RaySystem(ball, tuple(tuple(p) for p in paths[:m]), start_radius, component_id)
