import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cayminor.cayley import build_ball
from cayminor.errors import EmptyTerminalSet
from cayminor.flows import brute_force_min_cut, directed_disjoint_paths, max_disjoint_paths
from cayminor.graph import Graph, complete_graph, path_graph
from cayminor.groups import parse_genset, parse_group


def check_paths(g, sources, targets, paths, distinct):
    sources, targets = set(sources), set(targets)
    for p in paths:
        assert p[0] in sources and p[-1] in targets
        assert all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
        assert not set(p[1:-1]) & (sources | targets)
    interiors = [set(p[1:-1]) if not distinct else set(p) for p in paths]
    for a, b in itertools.combinations(interiors, 2):
        assert not a & b


def test_examples():
    assert max_disjoint_paths(path_graph(4), [0], [3])[0] == 1
    count, paths = max_disjoint_paths(complete_graph(4), [0], [3])
    assert count == 3 == brute_force_min_cut(complete_graph(4), [0], [3])
    check_paths(complete_graph(4), [0], [3], paths, False)


def test_terminal_errors():
    with pytest.raises(EmptyTerminalSet):
        max_disjoint_paths(path_graph(3), [], [2])
    with pytest.raises(ValueError):
        max_disjoint_paths(path_graph(3), [0, 1], [1])


def test_within_restricts_paths():
    g = Graph.from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)])
    assert max_disjoint_paths(g, [0], [3])[0] == 2
    assert max_disjoint_paths(g, [0], [3], within={0, 1, 3})[0] == 1


def test_directed_paths_follow_arcs():
    paths = directed_disjoint_paths(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [0], [2])
    assert paths == [[0, 1, 2]]
    assert directed_disjoint_paths(3, [(1, 0), (2, 1)], [0], [2]) == []


@st.composite
def instances(draw):
    n = draw(st.integers(2, 9))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])
    order = draw(st.permutations(range(n)))
    k = draw(st.integers(1, n - 1))
    j = draw(st.integers(k + 1, n))
    return g, order[:k], order[k:j]


@given(inst=instances(), distinct=st.booleans())
def test_menger_against_brute_force(inst, distinct):
    g, s, t = inst
    count, paths = max_disjoint_paths(g, s, t, distinct_endpoints=distinct)
    assert count == len(paths) == brute_force_min_cut(g, s, t, distinct_endpoints=distinct)
    check_paths(g, s, t, paths, distinct)


def test_z2_annulus_matches_brute_force_cut():
    z2 = parse_group("z^2")
    b = build_ball(z2, parse_genset(z2, None), 3)
    keep = [v for v in range(b.n) if b.dist[v] >= 2]
    sub, labels = b.graph().induced(keep)
    where = {old: new for new, old in enumerate(labels)}
    s = [where[v] for v in keep if b.dist[v] == 2]
    t = [where[v] for v in keep if b.dist[v] == 3]
    count, _ = max_disjoint_paths(sub, s, t, distinct_endpoints=True)
    assert count == brute_force_min_cut(sub, s, t, distinct_endpoints=True) == 8


def test_seeded_random_suite():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(2, 10)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.4])
        verts = list(range(n))
        rng.shuffle(verts)
        k = rng.randint(1, n - 1)
        s, t = verts[:k], verts[k: rng.randint(k + 1, n)]
        assert max_disjoint_paths(g, s, t)[0] == brute_force_min_cut(g, s, t)
