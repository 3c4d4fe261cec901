import pytest
from hypothesis import given, strategies as st

from cayminor.cayley import build_ball
from cayminor.construction import (
    SHORTEST,
    assemble_embedding,
    build_clique_minor,
    check_state,
    connect_pair,
    decompose_23,
    detour_offsets,
    initial_state,
    rays_for_construction,
    repair_intersection,
    state_violations,
)
from cayminor.ends import RaySystem
from cayminor.errors import (
    ConstructionFailed,
    FrozenRegionExhausted,
    RoutingFailed,
    SegmentTooShort,
    TooShort,
)
from cayminor.groups import parse_genset, parse_group
from cayminor.minors import find_clique_minor, verify_embedding

Z2 = parse_group("z^2")
S = parse_genset(Z2, None)


def horizontal_rays(R, rows):
    """Rays along y = k, from x = 0 out to the sphere of radius R."""
    b = build_ball(Z2, S, R)
    paths = tuple(tuple(b.index(Z2.element((x, k))) for x in range(0, R - k + 1)) for k in rows)
    return b, RaySystem(b, paths, 0)


def key(b, v):
    return b.vertices[v].key


def test_decompose_examples():
    assert decompose_23(2) == (1, 0)
    assert decompose_23(3) == (0, 1)
    assert decompose_23(7) == (2, 1)
    for n in (1, 0, -4):
        with pytest.raises(TooShort):
            decompose_23(n)


def test_detour_offset_examples():
    assert detour_offsets(2) == ([0, 2], [1, 3])
    assert detour_offsets(5) == ([0, 3, 5], [1, 4, 6])


@given(d=st.integers(2, 500))
def test_detour_offsets_property(d):
    low, high = detour_offsets(d)
    assert not set(low) & set(high)
    assert low[0] == 0 and low[-1] == d and high[0] == 1 and high[-1] == d + 1
    assert all(b - a in (2, 3) for a, b in zip(low, low[1:]))
    assert all(b - a in (2, 3) for a, b in zip(high, high[1:]))


def test_adjacent_rows_join_by_one_edge():
    _, rays = horizontal_rays(10, [0, 1])
    state = connect_pair(initial_state(Z2, S, rays), 0, 1)
    (path,) = state.connectors.values()
    assert len(path) == 2 and state.trace[0].repairs == ()
    assert state.trace[0].routing == "avoiding"


def test_crossing_connector_triggers_repairs():
    b, rays = horizontal_rays(12, [0, 1, 2, 3])
    state = connect_pair(initial_state(Z2, S, rays), 0, 3, strategy=SHORTEST)
    repairs = state.trace[0].repairs
    assert [r.ray for r in repairs] == [1, 2]
    assert all(r.case == "single" for r in repairs)
    assert state_violations(state) == []
    assert key(b, state.rays[1][0]) == (1, 1)


def _single_ray_state(R=20):
    b, rays = horizontal_rays(R, [0])
    return b, initial_state(Z2, S, rays)


def _path(b, points):
    return [b.index(Z2.element(p)) for p in points]


def test_repair_single_vertex():
    b, state = _single_ray_state()
    conn = _path(b, [(2, 1), (2, 0), (2, -1)])
    new, conn2, rec = repair_intersection(state, conn, 0)
    assert rec.case == "single" and conn2 == conn
    assert key(b, new.rays[0][2]) == (3, 0)
    check_state(new)


def test_repair_two_consecutive_vertices():
    b, state = _single_ray_state()
    conn = _path(b, [(2, 1), (2, 0), (3, 0), (3, 1)])
    new, conn2, rec = repair_intersection(state, conn, 0)
    assert rec.case == "pair" and conn2 == conn
    assert [key(b, v) for v in new.rays[0][:3]] == [(0, 0), (1, 0), (4, 0)]
    check_state(new)


@pytest.mark.parametrize("reverse", [False, True])
def test_repair_detour(reverse):
    b, state = _single_ray_state()
    pts = [(2, 1)] + [(x, 0) for x in range(2, 8)] + [(7, 1)]
    if reverse:
        pts.reverse()
    conn = _path(b, pts)
    new, conn2, rec = repair_intersection(state, conn, 0)
    assert rec.case == "detour" and rec.span == 5
    xs = [key(b, v)[0] for v in rec.connector_segment]
    assert xs == ([2, 5, 7] if not reverse else [7, 5, 2])
    assert [key(b, v)[0] for v in rec.ray_segment] == [3, 6, 8]
    assert not set(conn2) & set(new.rays[0])
    assert all(new.boosted_adjacent(u, v) for u, v in zip(conn2, conn2[1:]))
    check_state(new)


def test_detour_without_room_is_segment_too_short():
    R = 20
    b, state = _single_ray_state(R)
    conn = _path(b, [(R - 3, 1)] + [(x, 0) for x in range(R - 3, R + 1)])
    with pytest.raises(SegmentTooShort):
        repair_intersection(state, conn, 0)


def test_repair_requires_an_intersection():
    b, state = _single_ray_state()
    with pytest.raises(ValueError):
        repair_intersection(state, _path(b, [(1, 1), (2, 1)]), 0)


def test_one_ray_is_a_vacuous_k1():
    b, rays = horizontal_rays(6, [0])
    state = initial_state(Z2, S, rays)
    emb = assemble_embedding(state)
    assert len(emb.branch_sets) == 1 and emb.branch_sets[0] == (rays.paths[0][0],)
    res = build_clique_minor(Z2, S, rays, 1)
    assert res.verified


def test_two_rays_split_at_the_middle():
    b, rays = horizontal_rays(10, [0, 3])
    res = build_clique_minor(Z2, S, rays, 2)
    conn = res.state.connectors[(0, 1)]
    inner = conn[1:-1]
    half = -(-len(inner) // 2)
    base = res.base_embedding
    assert set(inner[:half]) <= set(base.branch_sets[0])
    assert set(inner[half:]) <= set(base.branch_sets[1])
    assert base.edge_witness[(0, 1)] == (conn[half], conn[half + 1])


def test_four_horizontal_rays_give_k4():
    b, rays = horizontal_rays(24, [0, 1, 2, 3])
    res = build_clique_minor(Z2, S, rays, 4, strategy=SHORTEST)
    assert res.verified
    assert verify_embedding(res.boosted_ball.graph(), res.embedding)
    assert any(t.repairs for t in res.state.trace)


@pytest.mark.parametrize("m,R", [(4, 24), (5, 36)])
def test_z2_end_to_end(m, R):
    base = build_ball(Z2, S, R)
    rays = rays_for_construction(base, m)
    res = build_clique_minor(Z2, S, rays, m)
    boosted = res.boosted_ball
    assert verify_embedding(boosted.graph(), res.embedding)
    radii = [t.frozen_radius for t in res.state.trace]
    assert radii == sorted(radii) and radii[-1] <= R
    again = build_clique_minor(Z2, S, rays_for_construction(build_ball(Z2, S, R), m), m)
    assert again.to_json() == res.to_json()
    # the base ball is planar, so the same clique is not there unboosted
    if m >= 5:
        assert not find_clique_minor(base.graph(), m).found


def test_free_group_routing_fails_or_verifies():
    f2 = parse_group("free:2")
    s = parse_genset(f2, None)
    b = build_ball(f2, s, 6)
    rays = rays_for_construction(b, 3)
    try:
        res = build_clique_minor(f2, s, rays, 3)
    except RoutingFailed as exc:
        assert exc.pair is not None and exc.suggested_radius > 6
    else:
        assert verify_embedding(res.boosted_ball.graph(), res.embedding)


def test_small_ball_exhausts_frozen_region():
    b = build_ball(Z2, S, 8)
    rays = rays_for_construction(b, 6)
    with pytest.raises(FrozenRegionExhausted) as info:
        build_clique_minor(Z2, S, rays, 6)
    assert info.value.suggested_radius > 8 and info.value.pair is not None


def test_rays_must_move_outward():
    b, _ = horizontal_rays(6, [0])
    back = tuple(b.index(Z2.element((x, 0))) for x in (2, 1, 0))
    with pytest.raises(ValueError):
        initial_state(Z2, S, RaySystem(b, (back,), 2))


def test_mismatched_m_is_rejected():
    _, rays = horizontal_rays(6, [0, 1])
    with pytest.raises(ValueError):
        build_clique_minor(Z2, S, rays, 3)


@given(m=st.integers(2, 5), R=st.integers(6, 22), start=st.integers(1, 3))
def test_any_successful_build_verifies(m, R, start):
    base = build_ball(Z2, S, R)
    rays = rays_for_construction(base, m, start)
    if not isinstance(rays, RaySystem):
        return
    try:
        res = build_clique_minor(Z2, S, rays, m)
    except ConstructionFailed:
        return
    assert verify_embedding(res.boosted_ball.graph(), res.embedding)
