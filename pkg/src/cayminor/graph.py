"""Finite simple undirected graphs on vertices ``0..n-1``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import networkx as nx

from .errors import IndexOutOfBounds, ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    _adj: tuple[tuple[int, ...], ...] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        clean = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise IndexOutOfBounds(f"edge ({u},{v}) outside 0..{self.n - 1}")
            clean.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(clean))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in clean:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled; also returns new-index -> old-index."""
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph.from_edges(len(keep), edges), keep

    def is_connected_set(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        if not vs:
            return False
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w in vs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(vs)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        """Accept either ``{n, edges}`` or the ball export ``{vertices, edges}``."""
        try:
            if "n" in data:
                n = int(data["n"])
            else:
                n = len(data["vertices"])
            return cls.from_edges(n, [(int(u), int(v)) for u, v in data["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed graph JSON: {exc}") from None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def load_graph(path) -> Graph:
    with open(path) as fh:
        return Graph.from_json(json.load(fh))


# -- small standard graphs ---------------------------------------------------


def complete_graph(m: int) -> Graph:
    return Graph.from_edges(m, combinations(range(m), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def from_networkx(g: nx.Graph) -> Graph:
    nodes = sorted(g.nodes())
    pos = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(pos[u], pos[v]) for u, v in g.edges() if u != v])


def parse_pattern(text: str) -> Graph:
    """``k:5`` -> K5, ``k:3,3`` -> K3,3, ``c:5`` -> C5, ``p:4`` -> P4, ``petersen``."""
    text = text.strip().lower()
    try:
        if text == "petersen":
            return petersen_graph()
        kind, _, arg = text.partition(":")
        nums = [int(x) for x in arg.split(",")] if arg else []
        if kind == "k" and len(nums) == 1:
            return complete_graph(nums[0])
        if kind == "k" and len(nums) == 2:
            return complete_bipartite(*nums)
        if kind == "c" and len(nums) == 1:
            return cycle_graph(nums[0])
        if kind == "p" and len(nums) == 1:
            return path_graph(nums[0])
    except ValueError:
        pass
    raise ParseError(f"unknown pattern {text!r}")
