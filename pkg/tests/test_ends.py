import pytest
from hypothesis import given, strategies as st

from cayminor.cayley import build_ball
from cayminor.ends import (
    Insufficient,
    RaySystem,
    end_count_estimate,
    end_report,
    extract_rays,
    live_components,
    thin_end_size_at_scale,
)
from cayminor.errors import DeadComponent, RadiusOutOfRange
from cayminor.groups import parse_genset, parse_group


def ball(spec, r, gens=None):
    g = parse_group(spec)
    return build_ball(g, parse_genset(g, gens), r)


def test_z_has_two_live_components_of_size_one():
    b = ball("z", 5)
    prof = live_components(b, 1)
    assert prof.live_count == 2
    assert [thin_end_size_at_scale(b, 1, k) for k in prof.live_components()] == [1, 1]


def test_z2_is_one_ended_at_every_scale():
    b = ball("z^2", 8)
    assert live_components(b, 2).live_count == 1
    for r in range(0, 7):
        assert live_components(b, r).live_count == 1


def test_free_group_components():
    b = ball("free:2", 4)
    prof = live_components(b, 1)
    # one component per reduced word of length 2
    assert prof.live_count == 12 >= 4
    assert all(thin_end_size_at_scale(b, 1, k) == 1 for k in prof.live_components())


def test_end_count_estimates():
    z5 = parse_group("cyclic:5")
    for r, R in [(0, 3), (1, 3), (1, 5)]:
        assert end_count_estimate(z5, parse_genset(z5, "1"), r, R) == 0
    d = parse_group("freeprod:cyclic:2,cyclic:2")
    assert end_count_estimate(d, parse_genset(d, None), 1, 6) == 2
    b = ball("freeprod:cyclic:2,cyclic:2", 6)
    assert [thin_end_size_at_scale(b, 1, k) for k in live_components(b, 1).live_components()] == [1, 1]


def test_errors():
    b = ball("cyclic:5", 3, "1")
    with pytest.raises(DeadComponent):
        thin_end_size_at_scale(b, 0, 0)
    with pytest.raises(RadiusOutOfRange):
        live_components(b, 3)
    with pytest.raises(RadiusOutOfRange):
        thin_end_size_at_scale(ball("z", 4), 3, 0)


@pytest.mark.parametrize("spec,R", [("z^2", 6), ("free:2", 4), ("freeprod:cyclic:2,cyclic:3", 6), ("cyclic:8", 5)])
@given(r=st.integers(0, 3))
def test_components_partition_the_annulus(spec, R, r):
    b = ball(spec, R)
    prof = live_components(b, r)
    covered = [v for c in prof.components for v in c.vertices]
    assert sorted(covered) == [v for v in range(b.n) if b.dist[v] > r]
    assert prof.live_count <= len(prof.components)
    firsts = [c.vertices[0] for c in prof.components]
    assert firsts == sorted(firsts)


def test_tree_live_count_grows_with_r():
    b = ball("free:2", 6)
    counts = [live_components(b, r).live_count for r in range(6)]
    assert counts == sorted(counts)


def test_report_shape():
    rep = end_report(ball("z", 5), 1)
    assert rep["end_count_estimate"] == 2
    assert rep["components"] == [
        {"size": 4, "live": True, "disjoint_paths": 1},
        {"size": 4, "live": True, "disjoint_paths": 1},
    ]


def test_z2_rays():
    b = ball("z^2", 12)
    rays = extract_rays(b, 4, 1)
    assert isinstance(rays, RaySystem) and rays.is_valid() and rays.m == 4
    for p in rays.paths:
        assert [b.dist[v] for v in p] == list(range(1, 13))


def test_free_group_single_component_has_one_ray():
    b = ball("free:2", 4)
    assert extract_rays(b, 5, start_radius=2, component_id=0) == Insufficient(5, 1)


@pytest.mark.parametrize("spec", ["z", "z^2", "free:2", "freeprod:cyclic:2,cyclic:2"])
def test_single_geodesic_ray(spec):
    b = ball(spec, 5)
    comp = live_components(b, 0).live_components()[0]
    rays = extract_rays(b, 1, 1, component_id=comp)
    assert rays.is_valid()
    assert [b.dist[v] for v in rays.paths[0]] == list(range(1, 6))


def test_rays_violations_are_reported():
    b = ball("z", 3)
    bad = RaySystem(b, ((1, 2), (2, 4)), 1)
    assert not bad.is_valid()
    assert any("share" in p for p in bad.violations())
