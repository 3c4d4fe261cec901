import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from cayminor.cayley import build_ball
from cayminor.errors import HostTooLarge, IndexOutOfBounds
from cayminor.graph import (
    Graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_networkx,
    parse_pattern,
    path_graph,
    petersen_graph,
)
from cayminor.groups import parse_genset, parse_group
from cayminor.minors import (
    MinorEmbedding,
    Status,
    _planar_rotation,
    brute_force_minor,
    check_rotation_system,
    find_clique_minor,
    find_minor,
    hadwiger_lower_bound,
    is_planar,
    verify_embedding,
)

K3, K4, K5, K33 = complete_graph(3), complete_graph(4), complete_graph(5), complete_bipartite(3, 3)


def emb(pattern, sets, witness):
    return MinorEmbedding(pattern, tuple(tuple(s) for s in sets), witness)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


# -- verification ------------------------------------------------------------


def test_verify_examples():
    singletons = emb(K5, [[v] for v in range(5)], {e: e for e in K5.edges})
    assert verify_embedding(K5, singletons)
    c5 = cycle_graph(5)
    good = emb(K3, [[0, 1], [2, 3], [4]], {(0, 1): (1, 2), (0, 2): (0, 4), (1, 2): (3, 4)})
    assert verify_embedding(c5, good)
    bad = emb(K3, [[0, 2], [1], [3, 4]], {(0, 1): (0, 1), (0, 2): (0, 4), (1, 2): (1, 2)})
    assert not verify_embedding(c5, bad)


def test_verify_rejects_overlap_missing_witness_and_non_edges():
    c5 = cycle_graph(5)
    overlap = emb(K3, [[0, 1], [1, 2], [3, 4]], {(0, 1): (0, 1), (0, 2): (0, 4), (1, 2): (2, 3)})
    assert not verify_embedding(c5, overlap)
    missing = emb(K3, [[0, 1], [2, 3], [4]], {(0, 1): (1, 2), (0, 2): (0, 4)})
    assert not verify_embedding(c5, missing)
    non_edge = emb(K3, [[0, 1], [2, 3], [4]], {(0, 1): (1, 2), (0, 2): (1, 4), (1, 2): (3, 4)})
    assert not verify_embedding(c5, non_edge)


def test_verify_raises_on_out_of_range_indices():
    with pytest.raises(IndexOutOfBounds):
        verify_embedding(cycle_graph(5), emb(K3, [[0], [1], [9]], {}))


def test_certificate_json_round_trip():
    res = find_minor(petersen_graph(), K5)
    assert MinorEmbedding.from_json(res.embedding.to_json()) == res.embedding


# -- search ------------------------------------------------------------------


def test_find_minor_examples():
    assert find_minor(cycle_graph(5), K4).status is Status.ABSENT
    res = find_minor(petersen_graph(), K5)
    assert res.found and verify_embedding(petersen_graph(), res.embedding)
    for host in (cycle_graph(5), path_graph(3), Graph(1, frozenset())):
        single = find_minor(host, complete_graph(1))
        assert single.found and len(single.embedding.branch_sets[0]) == 1


def test_find_clique_minor_examples():
    assert find_clique_minor(cycle_graph(5), 3).found
    assert find_clique_minor(path_graph(5), 3).status is Status.ABSENT
    z5 = parse_group("cyclic:5")
    host = build_ball(z5, parse_genset(z5, "1,2"), 1).graph()
    assert find_clique_minor(host, 5).found


def test_hadwiger_examples():
    assert hadwiger_lower_bound(cycle_graph(5))[0] == 3
    assert hadwiger_lower_bound(complete_graph(6))[0] == 6
    tree = from_networkx(nx.random_labeled_tree(10, seed=7) if hasattr(nx, "random_labeled_tree")
                         else nx.random_tree(10, seed=7))
    m, cert = hadwiger_lower_bound(tree)
    assert m == 2 and verify_embedding(tree, cert)


def test_planarity_examples():
    assert is_planar(cycle_graph(5)).status == "planar"
    for g in (K5, K33, petersen_graph()):
        res = is_planar(g)
        assert res.status == "nonplanar"
        assert verify_embedding(g, res.witness)
        assert res.witness.pattern in (K5, K33)


@pytest.mark.parametrize("m", [5, 6, 7])
def test_large_cliques_are_nonplanar(m):
    res = is_planar(complete_graph(m))
    assert res.status == "nonplanar" and verify_embedding(complete_graph(m), res.witness)


@given(n=st.integers(1, 15), seed=st.integers(0, 10_000))
def test_trees_and_cycles_are_planar(n, seed):
    tree = from_networkx(nx.random_labeled_tree(n, seed=seed) if hasattr(nx, "random_labeled_tree")
                         else nx.random_tree(n, seed=seed))
    assert is_planar(tree).status == "planar"
    if n >= 3:
        assert is_planar(cycle_graph(n)).status == "planar"


def test_brute_force_examples():
    assert brute_force_minor(cycle_graph(5), K3)
    assert not brute_force_minor(cycle_graph(5), K4)
    assert brute_force_minor(K4, K4)
    with pytest.raises(HostTooLarge):
        brute_force_minor(cycle_graph(13), K3)


def test_budget_exhaustion_is_a_result():
    z2 = parse_group("z^2")
    host = build_ball(z2, parse_genset(z2, None), 4).graph()
    res = find_minor(host, K5, budget=10, use_planarity=False)
    assert res.status is Status.BUDGET_EXHAUSTED and res.embedding is None
    assert find_minor(host, K5).status is Status.ABSENT


def test_search_is_deterministic():
    g = from_networkx(nx.gnp_random_graph(11, 0.5, seed=3))
    a, b = find_minor(g, K5), find_minor(g, K5)
    assert a.status == b.status and a.embedding == b.embedding


def test_rotation_system_check():
    k4 = {v: set(K4.neighbors(v)) for v in range(4)}
    assert check_rotation_system(k4, _planar_rotation(k4))
    k33 = {v: set(K33.neighbors(v)) for v in range(6)}
    rotations = itertools.product(*[itertools.permutations(sorted(k33[v])) for v in range(6)])
    assert not any(check_rotation_system(k33, {v: list(r) for v, r in enumerate(rot)}) for rot in rotations)


def test_parse_pattern():
    assert parse_pattern("k:3,3") == K33
    assert parse_pattern("petersen") == petersen_graph()
    assert parse_pattern("c:5") == cycle_graph(5)


# -- properties --------------------------------------------------------------


@given(g=graphs(), pattern=st.sampled_from([K3, K4, K33, cycle_graph(4)]))
def test_found_certificates_verify_and_match_oracle(g, pattern):
    res = find_minor(g, pattern, budget=None)
    if res.found:
        assert verify_embedding(g, res.embedding)
    assert res.found == brute_force_minor(g, pattern)


@given(g=graphs(max_n=10), extra=st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=8))
def test_certificates_survive_adding_edges(g, extra):
    res = find_minor(g, K3)
    if not res.found:
        return
    bigger = Graph.from_edges(g.n, list(g.edges) + [(u, v) for u, v in extra if u != v and max(u, v) < g.n])
    assert verify_embedding(bigger, res.embedding)


def _compose(outer: MinorEmbedding, inner: MinorEmbedding) -> MinorEmbedding:
    """K ≤ H (outer, over H) and H ≤ Γ (inner, over Γ) give K ≤ Γ."""
    sets = [sorted(v for h in b for v in inner.branch_sets[h]) for b in outer.branch_sets]
    # an outer witness is an H-edge, realised in Γ by the inner witness
    witness = {e: inner.edge_witness[(min(x, y), max(x, y))] for e, (x, y) in outer.edge_witness.items()}
    return MinorEmbedding(outer.pattern, tuple(tuple(s) for s in sets), witness)


def test_minor_of_minor_composes():
    h = petersen_graph()
    # subdivide every Petersen edge once
    edges, n = [], h.n
    for u, v in h.sorted_edges():
        edges += [(u, n), (n, v)]
        n += 1
    gamma = Graph.from_edges(n, edges)
    outer = find_minor(h, K5).embedding
    inner = find_minor(gamma, h).embedding
    assert verify_embedding(gamma, _compose(outer, inner))


def test_oracle_agreement_on_small_atlas():
    pats = [K3, K4, K33]
    for nxg in nx.graph_atlas_g()[1:]:
        if nxg.number_of_nodes() > 6 or not nx.is_connected(nxg):
            continue
        g = from_networkx(nxg)
        for p in pats:
            for use_planarity in (True, False):
                assert find_minor(g, p, None, use_planarity).found == brute_force_minor(g, p)


def test_seeded_random_agreement_without_planarity():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 9)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5])
        for p in (K4, K5, K33):
            assert find_minor(g, p, None, use_planarity=False).found == brute_force_minor(g, p)
