"""Vertex-disjoint paths by unit-capacity maximum flow (Menger)."""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable

from .errors import EmptyTerminalSet
from .graph import Graph

_INF = float("inf")


def _max_flow_paths(
    n: int,
    arcs: Iterable[tuple[int, int]],
    sources: set[int],
    targets: set[int],
    distinct_endpoints: bool,
) -> list[list[int]]:
    """Edmonds-Karp on the vertex-split network.

    Vertex v becomes v_in = 2v, v_out = 2v + 1. Arcs entering a source or
    leaving a target are dropped, so a path touches exactly one source (its
    first vertex) and one target (its last).
    """
    S, T = 2 * n, 2 * n + 1
    cap: list[dict[int, float]] = [dict() for _ in range(2 * n + 2)]

    def add(u: int, v: int, c: float) -> None:
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    terminal_cap = 1 if distinct_endpoints else _INF
    for v in range(n):
        add(2 * v, 2 * v + 1, terminal_cap if (v in sources or v in targets) else 1)
    for s in sorted(sources):
        add(S, 2 * s, terminal_cap)
    for t in sorted(targets):
        add(2 * t + 1, T, terminal_cap)
    for u, v in arcs:
        if u in targets or v in sources:
            continue
        add(2 * u + 1, 2 * v, 1)

    flow = [dict.fromkeys(c, 0) for c in cap]
    while True:
        parent = {S: None}
        queue = deque([S])
        while queue and T not in parent:
            u = queue.popleft()
            for v in sorted(cap[u]):
                if v not in parent and cap[u][v] - flow[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if T not in parent:
            break
        v = T
        while parent[v] is not None:
            u = parent[v]
            flow[u][v] += 1
            flow[v][u] -= 1
            v = u

    # decompose: every unit leaving S follows positive-flow arcs to T
    paths = []
    for first in sorted(flow[S]):
        while flow[S][first] > 0:
            flow[S][first] -= 1
            node = first
            walk = [node // 2]
            while True:
                nxt = next(w for w in sorted(flow[node]) if flow[node][w] > 0)
                flow[node][nxt] -= 1
                if nxt == T:
                    break
                if nxt // 2 != walk[-1]:
                    walk.append(nxt // 2)
                node = nxt
            paths.append(walk)
    return paths


def max_disjoint_paths(
    g: Graph,
    sources: Iterable[int],
    targets: Iterable[int],
    distinct_endpoints: bool = False,
    within: Iterable[int] | None = None,
) -> tuple[int, list[list[int]]]:
    """Maximum number of disjoint source-to-target paths, with the paths.

    By default paths are internally disjoint and may share endpoints (for
    singleton terminals this is the classical Menger number, and each direct
    source-target edge counts once). With ``distinct_endpoints`` the paths
    are pairwise vertex-disjoint. ``within`` restricts all path vertices to
    a subset.
    """
    sources, targets = set(sources), set(targets)
    if not sources or not targets:
        raise EmptyTerminalSet("sources and targets must be nonempty")
    if sources & targets:
        raise ValueError("sources and targets must be disjoint")
    arcs = []
    allowed = None if within is None else set(within)
    for u, v in g.edges:
        if allowed is not None and (u not in allowed or v not in allowed):
            continue
        arcs.append((u, v))
        arcs.append((v, u))
    if allowed is not None:
        sources &= allowed
        targets &= allowed
        if not sources or not targets:
            return 0, []
    paths = _max_flow_paths(g.n, arcs, sources, targets, distinct_endpoints)
    return len(paths), paths


def directed_disjoint_paths(
    n: int,
    arcs: Iterable[tuple[int, int]],
    sources: Iterable[int],
    targets: Iterable[int],
) -> list[list[int]]:
    """Pairwise vertex-disjoint paths along directed arcs (maximum number)."""
    sources, targets = set(sources), set(targets)
    if not sources or not targets:
        raise EmptyTerminalSet("sources and targets must be nonempty")
    return _max_flow_paths(n, arcs, sources, targets, True)


def brute_force_min_cut(
    g: Graph,
    sources: Iterable[int],
    targets: Iterable[int],
    distinct_endpoints: bool = False,
) -> int:
    """Smallest separator, by enumerating vertex subsets (small graphs only).

    Without ``distinct_endpoints``, only non-terminal vertices may be cut
    and each direct source-target edge adds one, matching the internally
    disjoint path count.
    """
    sources, targets = set(sources), set(targets)
    terminals = sources | targets
    if distinct_endpoints:
        direct = 0
        candidates = list(range(g.n))
    else:
        direct = sum(1 for u, v in g.edges if (u in sources and v in targets) or (v in sources and u in targets))
        candidates = [v for v in range(g.n) if v not in terminals]

    def separated(cut: set[int]) -> bool:
        start = [s for s in sources if s not in cut]
        seen = set(start)
        stack = list(start)
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w in cut or w in seen:
                    continue
                if not distinct_endpoints:
                    # interior vertices are non-terminals; direct edges are already counted
                    if u in sources and w in targets:
                        continue
                    if w in sources:
                        continue
                if w in targets:
                    return False
                seen.add(w)
                stack.append(w)
        return True

    for size in range(len(candidates) + 1):
        for cut in combinations(candidates, size):
            if separated(set(cut)):
                return direct + size
    raise AssertionError("unreachable: cutting every candidate separates")
