"""Minor containment on finite graphs.

``find_minor`` is exact: it answers ``FOUND`` with a certificate that has
been checked by ``verify_embedding``, ``ABSENT`` only after an exhaustive
search, or ``BUDGET_EXHAUSTED`` when the node-expansion budget runs out.

Before searching, the host is shrunk with reductions that cannot change
the answer for the given pattern:

* vertices of degree < 2 are deleted when every pattern vertex has degree >= 2;
* degree-2 vertices are contracted into a neighbour when every pattern
  vertex has degree >= 3;
* simplicial vertices are deleted (or yield the clique) for complete patterns;
* a 2-connected pattern is searched block by block;
* a non-planar pattern cannot be a minor of a planar block. Planarity comes
  from networkx, and the rotation system it returns is re-checked against
  Euler's formula before being trusted.

The search grows branch sets one host vertex at a time. Each branch set is
seeded at its smallest host vertex. Growth branches over the free
neighbours of the two branch sets of an unsatisfied pattern edge, and
candidates rejected by earlier siblings are excluded, so no model is
enumerated twice.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .errors import HostTooLarge, IndexOutOfBounds, ParseError
from .graph import Graph, complete_bipartite, complete_graph

BRUTE_FORCE_LIMIT = 12


def default_budget() -> int | None:
    raw = os.environ.get("CAYMINOR_BUDGET")
    if raw is None or raw.strip() == "":
        return 2_000_000
    value = int(raw)
    return None if value <= 0 else value


@dataclass(frozen=True)
class MinorEmbedding:
    """Branch sets (one per pattern vertex) plus one host edge per pattern edge."""

    pattern: Graph
    branch_sets: tuple[tuple[int, ...], ...]
    edge_witness: dict = field(compare=False)

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern.to_json(),
            "branch_sets": [list(b) for b in self.branch_sets],
            "edge_witness": {f"{i}-{j}": list(e) for (i, j), e in sorted(self.edge_witness.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "MinorEmbedding":
        try:
            pattern = Graph.from_json(data["pattern"])
            branch_sets = tuple(tuple(int(v) for v in b) for b in data["branch_sets"])
            witness = {}
            for k, (u, v) in data["edge_witness"].items():
                i, j = (int(x) for x in k.split("-"))
                witness[(min(i, j), max(i, j))] = (int(u), int(v))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from None
        return cls(pattern, branch_sets, witness)

    def relabel(self, mapping) -> "MinorEmbedding":
        """Apply a vertex map (sequence or dict) to every host vertex."""
        return MinorEmbedding(
            self.pattern,
            tuple(tuple(sorted(mapping[v] for v in b)) for b in self.branch_sets),
            {e: (mapping[u], mapping[v]) for e, (u, v) in self.edge_witness.items()},
        )


class Status(str, enum.Enum):
    FOUND = "found"
    ABSENT = "absent"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class MinorResult:
    status: Status
    embedding: MinorEmbedding | None = None
    expansions: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    def to_json(self) -> dict:
        out = {"status": self.status.value, "expansions": self.expansions}
        if self.embedding is not None:
            out["certificate"] = self.embedding.to_json()
        return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify_embedding(host: Graph, emb: MinorEmbedding) -> bool:
    pattern = emb.pattern
    if len(emb.branch_sets) != pattern.n:
        raise IndexOutOfBounds(
            f"certificate has {len(emb.branch_sets)} branch sets for a {pattern.n}-vertex pattern"
        )
    owner: dict[int, int] = {}
    for i, bset in enumerate(emb.branch_sets):
        for v in bset:
            if not 0 <= v < host.n:
                raise IndexOutOfBounds(f"host vertex {v} outside 0..{host.n - 1}")
    for (i, j), (u, v) in emb.edge_witness.items():
        if not (0 <= i < pattern.n and 0 <= j < pattern.n):
            raise IndexOutOfBounds(f"pattern edge ({i},{j}) out of range")
        if not (0 <= u < host.n and 0 <= v < host.n):
            raise IndexOutOfBounds(f"witness edge ({u},{v}) out of range")

    for i, bset in enumerate(emb.branch_sets):
        if not bset:
            return False
        for v in bset:
            if v in owner:
                return False
            owner[v] = i
        if not host.is_connected_set(bset):
            return False
    for i, j in pattern.edges:
        wit = emb.edge_witness.get((i, j))
        if wit is None:
            return False
        u, v = wit
        if not host.has_edge(u, v):
            return False
        if {owner.get(u), owner.get(v)} != {i, j}:
            return False
    return True


# ---------------------------------------------------------------------------
# brute force oracle
# ---------------------------------------------------------------------------


def _connected_masks(n: int, nbr: list[int]) -> list[int]:
    out = []
    for mask in range(1, 1 << n):
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            v = low.bit_length() - 1
            new = nbr[v] & mask & ~seen
            seen |= new
            frontier |= new
        if seen == mask:
            out.append(mask)
    return out


def brute_force_minor(host: Graph, pattern: Graph) -> bool:
    """Exhaustive minor test for hosts with at most 12 vertices.

    Tries every assignment of pairwise-disjoint connected host vertex sets
    to the pattern vertices, in pattern order.
    """
    if host.n > BRUTE_FORCE_LIMIT:
        raise HostTooLarge(f"brute force is limited to {BRUTE_FORCE_LIMIT} host vertices")
    if pattern.n == 0:
        return True
    nbr = [0] * host.n
    for u, v in host.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    masks = _connected_masks(host.n, nbr)
    reach = {}
    for mask in masks:
        r = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            r |= nbr[low.bit_length() - 1]
        reach[mask] = r
    # breadth-first pattern order: later vertices see a placed neighbour
    order: list[int] = []
    for root in range(pattern.n):
        if root in order:
            continue
        order.append(root)
        k = len(order) - 1
        while k < len(order):
            for w in pattern.neighbors(order[k]):
                if w not in order:
                    order.append(w)
            k += 1
    rank = {v: k for k, v in enumerate(order)}
    earlier = [[j for j in pattern.neighbors(i) if rank[j] < rank[i]] for i in order]
    chosen = {}

    full = (1 << host.n) - 1

    def place(k: int, used: int) -> bool:
        if k == pattern.n:
            return True
        needs = [chosen[j] for j in earlier[k]]
        still_needed = pattern.n - k - 1
        for mask in masks:
            if mask & used:
                continue
            r = reach[mask]
            if not all(r & c for c in needs):
                continue
            rest = used | mask
            if bin(full & ~rest).count("1") < still_needed:
                continue
            chosen[order[k]] = mask
            if place(k + 1, rest):
                return True
        return False

    return place(0, 0)


# ---------------------------------------------------------------------------
# planarity certificate
# ---------------------------------------------------------------------------


def _planar_rotation(adj: dict[int, set[int]]) -> dict[int, list[int]] | None:
    g = nx.Graph()
    g.add_nodes_from(adj)
    g.add_edges_from((u, v) for u in adj for v in adj[u])
    ok, emb = nx.check_planarity(g)
    if not ok:
        return None
    return {v: list(emb.neighbors_cw_order(v)) for v in adj}


def check_rotation_system(adj: dict[int, set[int]], rotation: dict[int, list[int]]) -> bool:
    """True iff ``rotation`` is a planar rotation system of the graph.

    Faces are traced and Euler's formula V - E + F = 1 + C is checked.
    """
    if set(rotation) != set(adj):
        return False
    for v, order in rotation.items():
        if len(order) != len(adj[v]) or set(order) != adj[v]:
            return False
    position = {v: {w: k for k, w in enumerate(order)} for v, order in rotation.items()}
    n_vertices = len(adj)
    n_edges = sum(len(a) for a in adj.values()) // 2
    visited: set[tuple[int, int]] = set()
    faces = 0
    for u in adj:
        for v in adj[u]:
            if (u, v) in visited:
                continue
            faces += 1
            a, b = u, v
            while (a, b) not in visited:
                visited.add((a, b))
                order = rotation[b]
                c = order[(position[b][a] + 1) % len(order)]
                a, b = b, c
    isolated = sum(1 for v in adj if not adj[v])
    components = _count_components(adj)
    # every isolated vertex has no half-edges, hence no traced face; its
    # component contributes one (outer) face
    faces += isolated
    return n_vertices - n_edges + faces == 1 + components


def _count_components(adj: dict[int, set[int]]) -> int:
    seen: set[int] = set()
    count = 0
    for s in adj:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def _is_planar_certified(adj: dict[int, set[int]]) -> bool:
    rotation = _planar_rotation(adj)
    if rotation is None:
        return False
    if not check_rotation_system(adj, rotation):
        raise AssertionError("planarity test returned an invalid embedding")
    return True


def _graph_is_planar(g: Graph) -> bool:
    return _is_planar_certified({v: set(g.neighbors(v)) for v in range(g.n)})


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------


@dataclass
class _Reduced:
    """A reduced host: adjacency over surviving labels, each owning a group
    of original vertices (a connected set in the original host)."""

    adj: dict[int, set[int]]
    groups: dict[int, set[int]]

    def copy_restricted(self, keep) -> "_Reduced":
        keep = set(keep)
        return _Reduced(
            {v: self.adj[v] & keep for v in keep},
            {v: set(self.groups[v]) for v in keep},
        )

    def delete(self, v: int) -> None:
        for w in self.adj.pop(v):
            self.adj[w].discard(v)
        self.groups.pop(v)

    def contract_into(self, v: int, u: int) -> None:
        for w in self.adj[v]:
            if w != u:
                self.adj[w].discard(v)
                self.adj[w].add(u)
                self.adj[u].add(w)
        self.adj[u].discard(v)
        del self.adj[v]
        self.groups[u] |= self.groups.pop(v)

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj.values()) // 2


@dataclass
class _PatternInfo:
    graph: Graph
    min_degree: int
    is_clique: bool
    biconnected: bool
    planar: bool

    @classmethod
    def of(cls, pattern: Graph) -> "_PatternInfo":
        n = pattern.n
        min_deg = min((pattern.degree(v) for v in range(n)), default=0)
        is_clique = pattern.m == n * (n - 1) // 2
        nxg = pattern.to_networkx()
        biconnected = n >= 3 and nx.is_biconnected(nxg)
        planar = _graph_is_planar(pattern)
        return cls(pattern, min_deg, is_clique, biconnected, planar)


def _reduce(red: _Reduced, info: _PatternInfo) -> list[int] | None:
    """Shrink ``red`` in place. Returns a clique of reduced vertices
    (of pattern size) if one is exposed by the simplicial rule."""
    m = info.graph.n
    changed = True
    while changed:
        changed = False
        for v in sorted(red.adj):
            if v not in red.adj:
                continue
            deg = len(red.adj[v])
            if info.min_degree >= 1 and deg == 0:
                red.delete(v)
                changed = True
            elif info.min_degree >= 2 and deg == 1:
                red.delete(v)
                changed = True
            elif info.min_degree >= 3 and deg == 2:
                u = min(red.adj[v])
                red.contract_into(v, u)
                changed = True
            elif info.is_clique and m >= 2:
                nbrs = red.adj[v]
                if all(nbrs - {w} <= red.adj[w] for w in nbrs):
                    if deg + 1 >= m:
                        return sorted([v, *sorted(nbrs)[: m - 1]])
                    red.delete(v)
                    changed = True
    return None


def _blocks(red: _Reduced) -> list[set[int]]:
    g = nx.Graph()
    g.add_nodes_from(red.adj)
    g.add_edges_from((u, v) for u in red.adj for v in red.adj[u])
    blocks = [set(b) for b in nx.biconnected_components(g)]
    blocks.sort(key=lambda b: (-len(b), min(b)))
    return blocks


# ---------------------------------------------------------------------------
# branch-set search
# ---------------------------------------------------------------------------


class _BudgetHit(Exception):
    pass


class _Counter:
    def __init__(self, budget: int | None):
        self.budget = budget
        self.count = 0

    def tick(self) -> None:
        self.count += 1
        if self.budget is not None and self.count > self.budget:
            raise _BudgetHit


def _pattern_order(pattern: Graph) -> list[int]:
    """Descending degree, preferring vertices adjacent to those already chosen."""
    order: list[int] = []
    remaining = set(range(pattern.n))
    while remaining:
        placed = set(order)
        best = max(
            remaining,
            key=lambda v: (
                sum(1 for w in pattern.neighbors(v) if w in placed),
                pattern.degree(v),
                -v,
            ),
        )
        order.append(best)
        remaining.remove(best)
    return order


def _twin_predecessor(pattern: Graph, order: list[int]) -> dict[int, int]:
    """For each pattern vertex, the previous vertex in ``order`` from its twin class.

    Twins (equal open or equal closed neighbourhoods) can be permuted by an
    automorphism, so their seeds may be required to increase along ``order``.
    """
    nbhd = [frozenset(pattern.neighbors(v)) for v in range(pattern.n)]
    pred: dict[int, int] = {}
    for pos, v in enumerate(order):
        for u in reversed(order[:pos]):
            if nbhd[u] - {v} == nbhd[v] - {u} and (
                (u in nbhd[v]) or nbhd[u] == nbhd[v]
            ):
                pred[v] = u
                break
    return pred


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


class _BranchSearch:
    def __init__(self, nbr: list[int], pattern: Graph, counter: _Counter):
        self.nbr = nbr
        self.k = len(nbr)
        self.pattern = pattern
        self.counter = counter
        self.order = _pattern_order(pattern)
        self.twin_pred = _twin_predecessor(pattern, self.order)
        p = pattern.n
        self.bset = [0] * p
        self.nset = [0] * p
        self.seed = [-1] * p
        self.excluded = [0] * p
        self.free = (1 << self.k) - 1
        self.n_seeded = 0

    # masks
    def _allowed(self, i: int) -> int:
        # seeds are minimal in their branch set
        above = ~((1 << (self.seed[i] + 1)) - 1)
        return self.free & ~self.excluded[i] & above

    def _unsatisfied(self):
        out = []
        for i, j in self.pattern.edges:
            if self.seed[i] >= 0 and self.seed[j] >= 0 and not (self.nset[i] & self.bset[j]):
                out.append((i, j))
        return out

    def _reachable(self, i: int, j: int) -> bool:
        region = self._allowed(i) | self._allowed(j)
        reach = self.bset[i]
        frontier = reach
        while frontier:
            if self._nbrs_of(frontier) & self.bset[j]:
                return True
            new = self._nbrs_of(frontier) & region & ~reach
            reach |= new
            frontier = new
        return False

    def _nbrs_of(self, mask: int) -> int:
        out = 0
        for v in _iter_bits(mask):
            out |= self.nbr[v]
        return out

    def _add(self, i: int, v: int) -> None:
        bit = 1 << v
        self.bset[i] |= bit
        self.nset[i] |= self.nbr[v]
        self.free &= ~bit

    def run(self) -> list[int] | None:
        if self._search():
            return self.bset[:]
        return None

    def _search(self) -> bool:
        self.counter.tick()
        unsat = self._unsatisfied()
        if unsat:
            best = None
            for i, j in unsat:
                if not self._reachable(i, j):
                    return False
                cands = [(v, i) for v in _iter_bits(self.nset[i] & self._allowed(i))]
                cands += [(v, j) for v in _iter_bits(self.nset[j] & self._allowed(j))]
                if best is None or len(cands) < len(best):
                    best = cands
            saved_excl = self.excluded[:]
            for v, side in best:
                saved = (self.bset[side], self.nset[side], self.free)
                self._add(side, v)
                if self._search():
                    return True
                self.bset[side], self.nset[side], self.free = saved
                self.excluded[side] |= 1 << v
            self.excluded = saved_excl
            return False

        if self.n_seeded == self.pattern.n:
            return True
        unseeded = self.pattern.n - self.n_seeded
        if bin(self.free).count("1") < unseeded:
            return False
        k = self.order[self.n_seeded]
        low = self.seed[self.twin_pred[k]] if k in self.twin_pred else -1
        candidates = self.free & ~((1 << (low + 1)) - 1)
        for v in _iter_bits(candidates):
            self.seed[k] = v
            self.n_seeded += 1
            saved_free = self.free
            self._add(k, v)
            if self._search():
                return True
            self.bset[k] = 0
            self.nset[k] = 0
            self.free = saved_free
            self.n_seeded -= 1
            self.seed[k] = -1
        return False


def _search_block(red: _Reduced, pattern: Graph, counter: _Counter) -> list[set[int]] | None:
    # higher-degree host vertices get lower indices, so they are tried as seeds first
    labels = sorted(red.adj, key=lambda v: (-len(red.adj[v]), v))
    pos = {v: i for i, v in enumerate(labels)}
    nbr = [0] * len(labels)
    for v in labels:
        for w in red.adj[v]:
            nbr[pos[v]] |= 1 << pos[w]
    found = _BranchSearch(nbr, pattern, counter).run()
    if found is None:
        return None
    return [{labels[b] for b in _iter_bits(mask)} for mask in found]


def _solve(red: _Reduced, info: _PatternInfo, counter: _Counter, use_planarity: bool):
    """Returns branch sets over reduced labels, or None if absent."""
    pattern = info.graph
    clique = _reduce(red, info)
    if clique is not None:
        return [{v} for v in clique]
    if red.n < pattern.n or red.m < pattern.m:
        return None
    if info.biconnected:
        blocks = _blocks(red)
        if len(blocks) > 1 or (blocks and len(blocks[0]) < red.n):
            for block in blocks:
                if len(block) < pattern.n:
                    continue
                sub = red.copy_restricted(block)
                result = _solve(sub, info, counter, use_planarity)
                if result is not None:
                    return result
            return None
    if use_planarity and not info.planar and _is_planar_certified(red.adj):
        return None
    return _search_block(red, pattern, counter)


def _lift(host: Graph, pattern: Graph, red: _Reduced, sets: list[set[int]]) -> MinorEmbedding:
    branch = [sorted(set().union(*(red.groups[v] for v in s))) for s in sets]
    owner = {v: i for i, b in enumerate(branch) for v in b}
    witness = {}
    for i, j in pattern.sorted_edges():
        for u in branch[i]:
            w = next((w for w in host.neighbors(u) if owner.get(w) == j), None)
            if w is not None:
                witness[(i, j)] = (u, w)
                break
    return MinorEmbedding(pattern, tuple(tuple(b) for b in branch), witness)


def find_minor(
    host: Graph,
    pattern: Graph,
    budget: int | None = None,
    use_planarity: bool = True,
) -> MinorResult:
    """Decide whether ``pattern`` is a minor of ``host``.

    ``budget`` caps search-node expansions (``None`` is unlimited).
    ``use_planarity=False`` disables the planar-host shortcut, leaving the
    reductions and the exhaustive branch-set search.
    """
    if pattern.n == 0:
        raise ValueError("pattern must have at least one vertex")
    counter = _Counter(budget)
    info = _PatternInfo.of(pattern)
    red = _Reduced({v: set(host.neighbors(v)) for v in range(host.n)}, {v: {v} for v in range(host.n)})
    try:
        sets = _solve(red, info, counter, use_planarity)
    except _BudgetHit:
        return MinorResult(Status.BUDGET_EXHAUSTED, None, counter.count)
    if sets is None:
        return MinorResult(Status.ABSENT, None, counter.count)
    emb = _lift(host, pattern, red, sets)
    if not verify_embedding(host, emb):
        raise AssertionError("search produced an invalid certificate")
    return MinorResult(Status.FOUND, emb, counter.count)


def find_clique_minor(host: Graph, m: int, budget: int | None = None, use_planarity: bool = True) -> MinorResult:
    if m < 1:
        raise ValueError("m must be at least 1")
    return find_minor(host, complete_graph(m), budget, use_planarity)


def hadwiger_lower_bound(host: Graph, budget: int | None = None) -> tuple[int, MinorEmbedding]:
    """Largest m whose K_m search returned FOUND, and its certificate.

    Searches m = 1, 2, ... and stops at the first m that is not found.
    """
    if host.n == 0:
        raise ValueError("host must have at least one vertex")
    best = None
    m = 1
    while m <= host.n:
        res = find_clique_minor(host, m, budget)
        if not res.found:
            break
        best = (m, res.embedding)
        m += 1
    return best


# ---------------------------------------------------------------------------
# planarity
# ---------------------------------------------------------------------------


@dataclass
class PlanarityResult:
    status: str  # "planar", "nonplanar", "budget_exhausted"
    witness: MinorEmbedding | None = None
    searches: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"status": self.status, "searches": self.searches}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _kuratowski_witness(host: Graph) -> MinorEmbedding | None:
    """A K5 or K3,3 minor read off a Kuratowski subdivision, if the host is non-planar."""
    ok, sub = nx.check_planarity(host.to_networkx(), counterexample=True)
    if ok:
        return None
    branch_vertices = sorted(v for v in sub.nodes() if sub.degree(v) >= 3)
    index = {v: k for k, v in enumerate(branch_vertices)}
    k = len(branch_vertices)
    sets: list[list[int]] = [[v] for v in branch_vertices]
    witness: dict[tuple[int, int], tuple[int, int]] = {}
    for b in branch_vertices:
        for first in sorted(sub.neighbors(b)):
            prev, cur, chain = b, first, []
            while cur not in index:
                chain.append(cur)
                prev, cur = cur, next(w for w in sub.neighbors(cur) if w != prev)
            i, j = index[b], index[cur]
            key = (min(i, j), max(i, j))
            if key in witness:
                continue
            # subdivision vertices join the branch set the chain started from
            sets[i].extend(chain)
            witness[key] = (prev, cur)
    if k == 5:
        order = list(range(5))
        pattern = complete_graph(5)
    elif k == 6:
        partners = {j for key in witness for j in key if 0 in key} - {0}
        side_a = [i for i in range(6) if i not in partners]
        if len(side_a) != 3:
            return None
        order = side_a + sorted(partners)
        pattern = complete_bipartite(3, 3)
    else:
        return None
    new = {old: pos for pos, old in enumerate(order)}
    emb = MinorEmbedding(
        pattern,
        tuple(tuple(sorted(sets[old])) for old in order),
        {
            (min(new[i], new[j]), max(new[i], new[j])): e
            for (i, j), e in witness.items()
        },
    )
    return emb if verify_embedding(host, emb) else None


def is_planar(host: Graph, budget: int | None = None, use_planarity: bool = True) -> PlanarityResult:
    """Planar iff exact searches find neither K5 nor K3,3 as a minor."""
    n, m = host.n, host.m
    if n >= 3 and m > 3 * n - 6:
        witness = _kuratowski_witness(host)
        if witness is not None:
            return PlanarityResult("nonplanar", witness, {"euler_prefilter": True})
    searches = {}
    pending = False
    for name, pat in (("K5", complete_graph(5)), ("K3,3", complete_bipartite(3, 3))):
        res = find_minor(host, pat, budget, use_planarity)
        searches[name] = res.status.value
        if res.found:
            return PlanarityResult("nonplanar", res.embedding, searches)
        if res.status is Status.BUDGET_EXHAUSTED:
            pending = True
    if pending:
        return PlanarityResult("budget_exhausted", None, searches)
    return PlanarityResult("planar", None, searches)


def dumps_embedding(emb: MinorEmbedding) -> str:
    return json.dumps(emb.to_json())
