import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import LineString, Point, box
from shapely.ops import unary_union

from swarmtrack.environment import (
    AGENT_RADIUS,
    Doorway,
    EnvironmentMap,
    Location,
    LocationKind,
    adjacency,
    location_at,
    raycast_wall,
    sample_free_point,
    sample_in_rect,
)
from swarmtrack.errors import LayoutError
from swarmtrack.layouts import BUILTIN_LAYOUTS, build_layout, layout_from_spec, load_layout
from swarmtrack.rng import make_rng

R, C = LocationKind.ROOM, LocationKind.CORRIDOR


def shapely_walls(env):
    """Independent wall model: every location outline minus the doorway openings."""
    outlines = unary_union([box(*loc.bounds).exterior for loc in env.locations])
    holes = unary_union([LineString(d.segment) for d in env.doorways]) if env.doorways else None
    return outlines.difference(holes) if holes is not None else outlines


@pytest.mark.parametrize("name", BUILTIN_LAYOUTS)
def test_builtin_layouts_have_five_rooms_and_a_corridor(name):
    env = build_layout(name)
    kinds = [loc.kind for loc in env.locations]
    assert len(env.locations) == 6
    assert kinds.count(R) == 5 and kinds.count(C) == 1


@pytest.mark.parametrize("name", BUILTIN_LAYOUTS)
def test_builtin_geometry_ranges(name):
    env = build_layout(name)
    corridor = next(loc for loc in env.locations if loc.kind is C)
    assert min(corridor.width, corridor.height) == 2.0
    assert 10.0 <= max(corridor.width, corridor.height) <= 16.0
    for room in env.rooms:
        assert 16.0 <= room.area <= 30.0
    for d in env.doorways:
        assert d.width >= 0.8


def test_env1_rooms_all_open_on_corridor(env1):
    adj = adjacency(env1)
    assert adj[5] == {0, 1, 2, 3, 4}
    for room in range(5):
        assert adj[room] == {5}


@pytest.mark.parametrize("name", BUILTIN_LAYOUTS)
def test_adjacency_symmetric_irreflexive(name):
    adj = adjacency(build_layout(name))
    for a, nbrs in adj.items():
        assert a not in nbrs
        for b in nbrs:
            assert a in adj[b]


def test_single_room_map_is_valid():
    env = EnvironmentMap([Location(0, R, (0, 0, 3, 3))], [])
    assert adjacency(env) == {0: set()}


def test_two_rooms_one_door(two_rooms):
    assert adjacency(two_rooms) == {0: {1}, 1: {0}}


class TestValidation:
    def test_overlap_rejected(self):
        with pytest.raises(LayoutError, match="location 0.*overlaps location 1"):
            EnvironmentMap(
                [Location(0, R, (0, 0, 4, 4)), Location(1, R, (3, 0, 7, 4))],
                [Doorway(0, 1, ((3, 1), (3, 2)))],
            )

    def test_disconnected_rejected(self):
        with pytest.raises(LayoutError, match="location 1"):
            EnvironmentMap([Location(0, R, (0, 0, 4, 4)), Location(1, R, (4, 0, 8, 4))], [])

    def test_dangling_doorway_rejected(self):
        with pytest.raises(LayoutError, match="doorway 0"):
            EnvironmentMap([Location(0, R, (0, 0, 4, 4))], [Doorway(0, 7, ((4, 1), (4, 2)))])

    def test_door_off_shared_edge_rejected(self):
        with pytest.raises(LayoutError, match="boundary"):
            EnvironmentMap(
                [Location(0, R, (0, 0, 4, 4)), Location(1, R, (4, 0, 8, 4))],
                [Doorway(0, 1, ((2, 4), (3, 4)))],
            )

    def test_narrow_door_rejected(self):
        with pytest.raises(LayoutError, match="width"):
            EnvironmentMap(
                [Location(0, R, (0, 0, 4, 4)), Location(1, R, (4, 0, 8, 4))],
                [Doorway(0, 1, ((4, 1), (4, 1.5)))],
            )

    def test_small_room_rejected(self):
        with pytest.raises(LayoutError, match="area"):
            EnvironmentMap([Location(0, R, (0, 0, 1, 1))], [])

    def test_narrow_corridor_rejected(self):
        with pytest.raises(LayoutError, match="corridor"):
            EnvironmentMap([Location(0, C, (0, 0, 10, 1))], [])

    def test_self_door_rejected(self):
        with pytest.raises(LayoutError, match="itself"):
            EnvironmentMap([Location(0, R, (0, 0, 4, 4))], [Doorway(0, 0, ((4, 1), (4, 2)))])


class TestLayoutSpecFile:
    GOOD = """\
name: tiny
locations:
  - {id: 0, kind: room, rect: [0, 0, 5, 5]}
  - {id: 1, kind: corridor, rect: [0, 5, 10, 7]}
doorways:
  - {loc_a: 0, loc_b: 1, segment: [[2, 5], [3, 5]]}
"""

    def test_loads(self, tmp_path):
        p = tmp_path / "tiny.yaml"
        p.write_text(self.GOOD)
        env = load_layout(p)
        assert env.name == "tiny" and adjacency(env) == {0: {1}, 1: {0}}
        assert build_layout(str(p)).name == "tiny"

    def test_overlap_reports_line(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text(self.GOOD.replace("rect: [0, 5, 10, 7]", "rect: [0, 4, 10, 7]"))
        with pytest.raises(LayoutError) as info:
            load_layout(p)
        assert info.value.line == 3 and "overlaps" in str(info.value)

    def test_dangling_door_reports_line(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text(self.GOOD.replace("loc_b: 1", "loc_b: 9"))
        with pytest.raises(LayoutError) as info:
            load_layout(p)
        assert info.value.line == 6

    def test_unknown_key_reports_line(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text(self.GOOD.replace("kind: room", "kind: room, colour: red"))
        with pytest.raises(LayoutError, match="colour") as info:
            load_layout(p)
        assert info.value.line == 3

    def test_spec_dict(self):
        env = layout_from_spec({"locations": [{"id": 0, "kind": "room", "rect": [0, 0, 3, 3]}]})
        assert len(env.locations) == 1

    def test_unknown_builtin(self):
        with pytest.raises(LayoutError, match="unknown layout"):
            build_layout("Env9")


class TestLocationAt:
    def test_centroid(self, env1):
        for loc in env1.locations:
            assert location_at(env1, loc.centroid) == loc.id

    def test_shared_edge_goes_to_max_side(self, two_rooms):
        assert location_at(two_rooms, (5.0, 2.0)) == 1

    def test_outside(self, env1):
        assert location_at(env1, (-1.0, 3.0)) is None
        assert location_at(env1, (13.0, 11.5)) is None

    @settings(max_examples=500, deadline=None)
    @given(st.floats(0, 14, exclude_max=True), st.floats(0, 12, exclude_max=True))
    def test_partition(self, x, y):
        env = build_layout("Env1")
        hits = [loc.id for loc in env.locations if loc.contains(x, y)]
        assert len(hits) <= 1
        assert location_at(env, (x, y)) == (hits[0] if hits else None)


class TestRaycast:
    def test_axis_distance(self):
        env = EnvironmentMap([Location(0, R, (0, 0, 5, 3))], [])
        assert raycast_wall(env, (1.0, 1.0), 0.0) == pytest.approx(4.0)

    def test_passes_through_doorway(self, two_rooms):
        assert raycast_wall(two_rooms, (1.0, 1.0), 0.0) == pytest.approx(8.0)

    def test_north(self):
        env = EnvironmentMap([Location(0, R, (0, 0, 5, 3))], [])
        assert raycast_wall(env, (1.0, 1.0), math.pi / 2) == pytest.approx(2.0)

    def test_missing_doorway_blocks(self, two_rooms):
        assert raycast_wall(two_rooms, (1.0, 2.5), 0.0) == pytest.approx(4.0)

    def test_origin_outside(self, env1):
        with pytest.raises(ValueError):
            raycast_wall(env1, (-3.0, -3.0), 0.0)

    @settings(max_examples=300, deadline=None)
    @given(st.sampled_from(BUILTIN_LAYOUTS), st.floats(0, 1), st.floats(0, 2 * math.pi))
    def test_positive_and_matches_shapely(self, name, u, heading):
        env = build_layout(name)
        p = sample_free_point(env, make_rng(int(u * 1e9)))
        d = raycast_wall(env, p, heading)
        assert d > 0
        walls = shapely_walls(env)
        far = (p[0] + 100 * math.cos(heading), p[1] + 100 * math.sin(heading))
        hit = LineString([p, far]).intersection(walls)
        assert Point(p).distance(hit) == pytest.approx(d, abs=1e-9)


class TestFreeDistance:
    def test_head_on_equals_raycast_minus_radius(self):
        env = EnvironmentMap([Location(0, R, (0, 0, 5, 3))], [])
        assert env.free_distance(1.0, 1.5, 0.0) == pytest.approx(4.0 - AGENT_RADIUS)

    @settings(max_examples=150, deadline=None)
    @given(st.sampled_from(BUILTIN_LAYOUTS), st.integers(0, 10**6), st.floats(0, 2 * math.pi))
    def test_matches_marching_oracle(self, name, seed, heading):
        env = build_layout(name)
        walls = shapely_walls(env)
        x, y = sample_free_point(env, make_rng(seed))
        d = env.free_distance(x, y, heading)
        dx, dy = math.cos(heading), math.sin(heading)

        def clear(t):
            return walls.distance(Point(x + t * dx, y + t * dy)) >= AGENT_RADIUS - 1e-12

        # every point up to d is clear, a point just past d is not
        for t in np.linspace(0, d, 200):
            assert clear(t)
        assert not clear(d + 1e-6)


class TestSampling:
    def test_mean_near_centroid(self, env1):
        rng = make_rng(11)
        pts = np.array([sample_free_point(env1, rng, 3) for _ in range(10_000)])
        cx, cy = env1.location(3).centroid
        assert abs(pts[:, 0].mean() - cx) <= 0.05 * cx
        assert abs(pts[:, 1].mean() - cy) <= 0.05 * cy

    def test_unit_rect_inset_bounds(self):
        rng = make_rng(2)
        pts = np.array([sample_in_rect((0, 0, 1, 1), rng, 0.2) for _ in range(2000)])
        assert pts.min() >= 0.2 and pts.max() <= 0.8

    def test_too_small_for_inset(self):
        with pytest.raises(ValueError):
            sample_in_rect((0, 0, 0.3, 2), make_rng(0), 0.2)

    def test_whole_map_spreads(self, env1):
        rng = make_rng(5)
        locs = {location_at(env1, sample_free_point(env1, rng)) for _ in range(100)}
        assert len(locs) >= 2

    def test_inset_respected(self, env1):
        rng = make_rng(9)
        for _ in range(500):
            x, y = sample_free_point(env1, rng)
            assert env1.in_free_space(x, y)
