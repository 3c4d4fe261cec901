"""Finite balls in Cayley graphs, built by breadth-first search."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import BallTooLarge, EmptyGeneratingSet, ModelMismatch, RadiusOutOfRange
from .graph import Graph
from .groups import Element, GenSet, GroupModel

DEFAULT_MAX_VERTICES = 250_000


@dataclass(frozen=True)
class Ball:
    """The radius-``radius`` ball around the identity in Cay(model, gens).

    Vertex 0 is the identity; vertices are listed sphere by sphere, each
    sphere sorted by the model's canonical key order. Only edges between
    ball vertices are kept.
    """

    model: GroupModel
    gens: GenSet
    radius: int
    vertices: tuple[Element, ...]
    dist: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]
    element_index: dict = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, x: Element) -> int:
        return self.element_index[x]

    def __contains__(self, x: Element) -> bool:
        return x in self.element_index

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def sphere(self, i: int) -> list[int]:
        return sphere(self, i)

    def graph(self) -> Graph:
        return induced_graph(self)

    def label(self, v: int) -> str:
        return self.model.format(self.vertices[v])

    def to_json(self) -> dict:
        return ball_to_json(self)


def build_ball(
    model: GroupModel,
    gens: GenSet,
    radius: int,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> Ball:
    if radius < 0:
        raise RadiusOutOfRange("radius must be non-negative")
    if gens.model_id != model.model_id:
        raise ModelMismatch(f"generating set belongs to {gens.model_id}, not {model.model_id}")
    if len(gens) == 0:
        raise EmptyGeneratingSet("cannot build a Cayley ball without generators")

    e = model.identity
    vertices = [e]
    dist = [0]
    index = {e: 0}
    frontier = [e]
    for d in range(1, radius + 1):
        found = set()
        for x in frontier:
            for s in gens.elements:
                y = model.mul(x, s)
                if y not in index and y not in found:
                    found.add(y)
        if len(vertices) + len(found) > max_vertices:
            raise BallTooLarge(d - 1, len(vertices) + len(found), max_vertices)
        frontier = sorted(found, key=lambda x: model.sort_key(x.key))
        for y in frontier:
            index[y] = len(vertices)
            vertices.append(y)
            dist.append(d)
        if not frontier:
            break

    adjacency = []
    for x in vertices:
        nbrs = set()
        for s in gens.elements:
            j = index.get(model.mul(x, s))
            if j is not None:
                nbrs.add(j)
        adjacency.append(tuple(sorted(nbrs)))
    return Ball(model, gens, radius, tuple(vertices), tuple(dist), tuple(adjacency), index)


def sphere(ball: Ball, i: int) -> list[int]:
    if not 0 <= i <= ball.radius:
        raise RadiusOutOfRange(f"sphere {i} outside 0..{ball.radius}")
    return [v for v, d in enumerate(ball.dist) if d == i]


def induced_graph(ball: Ball) -> Graph:
    return Graph.from_edges(ball.n, ball.edges())


def ball_to_json(ball: Ball) -> dict:
    return {
        "group": ball.model.model_id,
        "radius": ball.radius,
        "gens": [ball.model.format(s) for s in ball.gens.elements],
        "vertices": [
            {"index": i, "key": ball.label(i), "dist": ball.dist[i]} for i in range(ball.n)
        ],
        "edges": [list(e) for e in ball.edges()],
    }


def ball_to_dot(ball: Ball) -> str:
    lines = ["graph cayley {"]
    for i in range(ball.n):
        lines.append(f'  {i} [label="{ball.label(i)}", dist={ball.dist[i]}];')
    for u, v in ball.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines)


def dumps_ball(ball: Ball) -> str:
    return json.dumps(ball_to_json(ball))
