"""Office geometry: rectangular locations joined by doorway holes.

Walls are the edges of each location rectangle.  A doorway is an open
segment on the edge shared by two locations; rays and robots pass
through it.  Everything here is immutable once built.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from swarmtrack.errors import LayoutError

AGENT_RADIUS = 0.2
MIN_ROOM_AREA = 4.0
MIN_CORRIDOR_WIDTH = 1.2
MIN_DOOR_WIDTH = 0.8

_EPS = 1e-9
_TOUCH = 1e-12

Point = tuple[float, float]
Rect = tuple[float, float, float, float]


class LocationKind(str, enum.Enum):
    ROOM = "room"
    CORRIDOR = "corridor"


@dataclass(frozen=True)
class Location:
    id: int
    kind: LocationKind
    bounds: Rect  # x_min, y_min, x_max, y_max in meters

    @property
    def width(self) -> float:
        return self.bounds[2] - self.bounds[0]

    @property
    def height(self) -> float:
        return self.bounds[3] - self.bounds[1]

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def centroid(self) -> Point:
        x0, y0, x1, y1 = self.bounds
        return ((x0 + x1) / 2, (y0 + y1) / 2)

    def contains(self, x: float, y: float) -> bool:
        """Half-open containment ``[x_min, x_max) x [y_min, y_max)``."""
        x0, y0, x1, y1 = self.bounds
        return x0 <= x < x1 and y0 <= y < y1


@dataclass(frozen=True)
class Doorway:
    loc_a: int
    loc_b: int
    segment: tuple[Point, Point]

    @property
    def width(self) -> float:
        (ax, ay), (bx, by) = self.segment
        return math.hypot(bx - ax, by - ay)

    @property
    def vertical(self) -> bool:
        (ax, _), (bx, _) = self.segment
        return ax == bx

    def span(self) -> tuple[float, float, float]:
        """(wall coordinate, low end, high end) of the opening."""
        (ax, ay), (bx, by) = self.segment
        if self.vertical:
            return ax, min(ay, by), max(ay, by)
        return ay, min(ax, bx), max(ax, bx)


@dataclass(frozen=True, eq=False)
class EnvironmentMap:
    locations: tuple[Location, ...]
    doorways: tuple[Doorway, ...]
    name: str = "custom"
    # Wall segments after cutting out doorway openings, built in __post_init__.
    walls: tuple[tuple[Point, Point], ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "doorways", tuple(self.doorways))
        validate_map(self)
        by_id = {loc.id: loc for loc in self.locations}
        adj: dict[int, set[int]] = {loc.id: set() for loc in self.locations}
        doors_of: dict[int, list[Doorway]] = {loc.id: [] for loc in self.locations}
        for d in self.doorways:
            adj[d.loc_a].add(d.loc_b)
            adj[d.loc_b].add(d.loc_a)
            doors_of[d.loc_a].append(d)
            doors_of[d.loc_b].append(d)
        object.__setattr__(self, "walls", _wall_segments(self.locations, doors_of))
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_adj", {k: frozenset(v) for k, v in adj.items()})
        object.__setattr__(self, "_doors_of", {k: tuple(v) for k, v in doors_of.items()})

    def location(self, loc_id: int) -> Location:
        try:
            return self._by_id[loc_id]
        except KeyError:
            raise KeyError(f"no location with id {loc_id}") from None

    @property
    def rooms(self) -> list[Location]:
        return sorted(
            (loc for loc in self.locations if loc.kind is LocationKind.ROOM),
            key=lambda loc: loc.id,
        )

    def neighbors(self, loc_id: int) -> frozenset[int]:
        return self._adj[loc_id]

    def clearance(self, x: float, y: float) -> float:
        """Distance from (x, y) to the nearest wall."""
        best = math.inf
        for (ax, ay), (bx, by) in self.walls:
            # walls are axis-aligned, so clamp-to-segment is exact
            cx = min(max(x, ax), bx)
            cy = min(max(y, ay), by)
            d = math.hypot(x - cx, y - cy)
            if d < best:
                best = d
        return best

    def in_free_space(self, x: float, y: float, tol: float = 1e-9) -> bool:
        """True when a disc of AGENT_RADIUS centred at (x, y) is inside the world and clear of walls."""
        return location_at(self, (x, y)) is not None and self.clearance(x, y) >= AGENT_RADIUS - tol

    def free_distance(self, x: float, y: float, heading: float) -> float:
        """How far a disc of AGENT_RADIUS can travel along ``heading`` before touching a wall.

        Each wall is inflated to a capsule of radius AGENT_RADIUS and the
        centre is cast as a ray against the capsules.  For a head-on hit
        this equals ``raycast_wall - AGENT_RADIUS``.
        """
        dx = math.cos(heading)
        dy = math.sin(heading)
        r = AGENT_RADIUS
        best = math.inf
        for (ax, ay), (bx, by) in self.walls:
            if ay == by:
                t = _ray_box(x, y, dx, dy, ax, ay - r, bx, by + r)
            else:
                t = _ray_box(x, y, dx, dy, ax - r, ay, bx + r, by)
            if t < best:
                best = t
            t = _ray_disc(x, y, dx, dy, ax, ay, r)
            if t < best:
                best = t
            t = _ray_disc(x, y, dx, dy, bx, by, r)
            if t < best:
                best = t
        return best

    def _pass_through(self, loc_id: int, x: float, y: float) -> int | None:
        for d in self._doors_of[loc_id]:
            c, lo, hi = d.span()
            along, across = (y, x) if d.vertical else (x, y)
            if abs(across - c) <= _EPS and lo + _EPS < along < hi - _EPS:
                return d.loc_b if d.loc_a == loc_id else d.loc_a
        return None


def _exit_distance(x, y, dx, dy, x0, y0, x1, y1) -> float:
    """Distance from a point inside a box to its boundary along (dx, dy)."""
    tx = (x1 - x) / dx if dx > 0 else (x0 - x) / dx if dx < 0 else math.inf
    ty = (y1 - y) / dy if dy > 0 else (y0 - y) / dy if dy < 0 else math.inf
    t = tx if tx < ty else ty
    return t if t > 0.0 else 0.0


def _ray_box(x, y, dx, dy, x0, y0, x1, y1) -> float:
    """Entry distance of a ray into a closed box; inf if it misses or only grazes outward."""
    t_near, t_far = -math.inf, math.inf
    for o, d, lo, hi in ((x, dx, x0, x1), (y, dy, y0, y1)):
        if d == 0.0:
            if o < lo or o > hi:
                return math.inf
            continue
        t1 = (lo - o) / d
        t2 = (hi - o) / d
        if t1 > t2:
            t1, t2 = t2, t1
        if t1 > t_near:
            t_near = t1
        if t2 < t_far:
            t_far = t2
    if t_near > t_far or t_far <= _TOUCH:
        return math.inf
    return t_near if t_near > 0.0 else 0.0


def _ray_disc(x, y, dx, dy, cx, cy, r) -> float:
    ox = x - cx
    oy = y - cy
    b = dx * ox + dy * oy
    c = ox * ox + oy * oy - r * r
    disc = b * b - c
    if disc <= 0.0:
        return math.inf
    root = math.sqrt(disc)
    if -b + root <= _TOUCH:
        return math.inf
    t = -b - root
    return t if t > 0.0 else 0.0


def _wall_segments(locations, doors_of) -> tuple[tuple[Point, Point], ...]:
    """Location edges minus doorway openings, deduplicated, endpoints ordered low to high."""
    segs = set()
    for loc in locations:
        x0, y0, x1, y1 = loc.bounds
        edges = [
            (False, y0, x0, x1),  # horizontal edges: (vertical?, fixed coord, lo, hi)
            (False, y1, x0, x1),
            (True, x0, y0, y1),
            (True, x1, y0, y1),
        ]
        for vertical, c, lo, hi in edges:
            holes = sorted(
                (d_lo, d_hi)
                for d in doors_of[loc.id]
                if d.vertical == vertical
                for d_c, d_lo, d_hi in [d.span()]
                if abs(d_c - c) <= _EPS
            )
            pieces = []
            cur = lo
            for h_lo, h_hi in holes:
                if h_lo > cur:
                    pieces.append((cur, h_lo))
                cur = max(cur, h_hi)
            if cur < hi:
                pieces.append((cur, hi))
            for a, b in pieces:
                segs.add(((c, a), (c, b)) if vertical else ((a, c), (b, c)))
    return tuple(sorted(segs))


def _shares_edge(loc: Location, d: Doorway) -> int:
    """+1 if the doorway lies on the max edge of ``loc``, -1 on the min edge, 0 otherwise."""
    c, lo, hi = d.span()
    x0, y0, x1, y1 = loc.bounds
    lo_edge, hi_edge, a0, a1 = (x0, x1, y0, y1) if d.vertical else (y0, y1, x0, x1)
    if not (a0 - _EPS <= lo and hi <= a1 + _EPS):
        return 0
    if abs(c - hi_edge) <= _EPS:
        return 1
    if abs(c - lo_edge) <= _EPS:
        return -1
    return 0


def validate_map(env: EnvironmentMap) -> None:
    """Raise LayoutError naming the first element that breaks a map invariant."""
    if not env.locations:
        raise LayoutError("map has no locations", element="map")
    seen: set[int] = set()
    for loc in env.locations:
        tag = f"location {loc.id}"
        if loc.id in seen:
            raise LayoutError("duplicate location id", element=tag)
        seen.add(loc.id)
        if not isinstance(loc.kind, LocationKind):
            raise LayoutError(f"unknown kind {loc.kind!r}", element=tag)
        x0, y0, x1, y1 = loc.bounds
        if not (x0 < x1 and y0 < y1):
            raise LayoutError("rectangle needs x_min < x_max and y_min < y_max", element=tag)
        if loc.kind is LocationKind.ROOM and loc.area < MIN_ROOM_AREA:
            raise LayoutError(f"room area {loc.area:g} m^2 is below {MIN_ROOM_AREA:g}", element=tag)
        if loc.kind is LocationKind.CORRIDOR and min(loc.width, loc.height) < MIN_CORRIDOR_WIDTH:
            raise LayoutError(
                f"corridor narrower than {MIN_CORRIDOR_WIDTH:g} m", element=tag
            )
    locs = list(env.locations)
    for i, a in enumerate(locs):
        for b in locs[i + 1:]:
            ox = min(a.bounds[2], b.bounds[2]) - max(a.bounds[0], b.bounds[0])
            oy = min(a.bounds[3], b.bounds[3]) - max(a.bounds[1], b.bounds[1])
            if ox > _EPS and oy > _EPS:
                raise LayoutError(f"overlaps location {b.id}", element=f"location {a.id}")
    by_id = {loc.id: loc for loc in locs}
    for k, d in enumerate(env.doorways):
        tag = f"doorway {k} ({d.loc_a}-{d.loc_b})"
        if d.loc_a not in by_id or d.loc_b not in by_id:
            raise LayoutError("references a missing location", element=tag)
        if d.loc_a == d.loc_b:
            raise LayoutError("joins a location to itself", element=tag)
        (ax, ay), (bx, by) = d.segment
        if ax != bx and ay != by:
            raise LayoutError("segment is not axis-aligned", element=tag)
        if d.width < MIN_DOOR_WIDTH:
            raise LayoutError(f"width {d.width:g} m is below {MIN_DOOR_WIDTH:g}", element=tag)
        side_a = _shares_edge(by_id[d.loc_a], d)
        side_b = _shares_edge(by_id[d.loc_b], d)
        if side_a == 0 or side_b == 0 or side_a == side_b:
            raise LayoutError("segment is not on the boundary shared by its locations", element=tag)
    # connectivity of the doorway graph
    adj: dict[int, set[int]] = {i: set() for i in by_id}
    for d in env.doorways:
        adj[d.loc_a].add(d.loc_b)
        adj[d.loc_b].add(d.loc_a)
    start = locs[0].id
    reached = {start}
    queue = deque([start])
    while queue:
        for nxt in adj[queue.popleft()]:
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    missing = sorted(set(by_id) - reached)
    if missing:
        raise LayoutError("unreachable from the rest of the map", element=f"location {missing[0]}")


def location_at(env: EnvironmentMap, p: Point) -> int | None:
    x, y = p
    for loc in env.locations:
        if loc.contains(x, y):
            return loc.id
    return None


def adjacency(env: EnvironmentMap) -> dict[int, set[int]]:
    return {loc.id: set(env.neighbors(loc.id)) for loc in env.locations}


def raycast_wall(env: EnvironmentMap, origin: Point, heading: float) -> float:
    """Distance from ``origin`` along ``heading`` to the first wall.

    Doorways are holes: a ray leaving through one continues in the
    neighbouring location.
    """
    loc_id = location_at(env, origin)
    if loc_id is None:
        raise ValueError(f"origin {origin} is outside the world")
    x, y = origin
    dx, dy = math.cos(heading), math.sin(heading)
    total = 0.0
    for _ in range(4 * len(env.locations) + 4):
        t = _exit_distance(x, y, dx, dy, *env.location(loc_id).bounds)
        x += t * dx
        y += t * dy
        total += t
        nxt = env._pass_through(loc_id, x, y)
        if nxt is None:
            break
        loc_id = nxt
    return total


def sample_in_rect(bounds: Rect, rng: np.random.Generator, inset: float = AGENT_RADIUS) -> Point:
    x0, y0, x1, y1 = bounds
    w = x1 - x0 - 2 * inset
    h = y1 - y0 - 2 * inset
    if w <= 0 or h <= 0:
        raise ValueError(f"rectangle {bounds} is too small for a {inset} m inset")
    return x0 + inset + rng.random() * w, y0 + inset + rng.random() * h


def sample_free_point(
    env: EnvironmentMap, rng: np.random.Generator, location_id: int | None = None
) -> Point:
    """Uniform point in a location (or anywhere), kept AGENT_RADIUS from its walls."""
    if location_id is not None:
        return sample_in_rect(env.location(location_id).bounds, rng)
    r = AGENT_RADIUS
    weights = [
        max(loc.width - 2 * r, 0.0) * max(loc.height - 2 * r, 0.0) for loc in env.locations
    ]
    u = rng.random() * sum(weights)
    acc = 0.0
    chosen = env.locations[-1]
    for loc, w in zip(env.locations, weights):
        acc += w
        if u < acc:
            chosen = loc
            break
    return sample_in_rect(chosen.bounds, rng)
