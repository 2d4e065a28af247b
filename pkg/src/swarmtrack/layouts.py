"""Built-in office layouts and the YAML layout-spec loader.

Every built-in has five rooms (ids 0-4) and one 2 m wide corridor
(id 5).  Rooms hang off the corridor through 1.5 m doorways; Env3 also
has a room-to-room door.

Layout spec format::

    name: small-office
    locations:
      - {id: 0, kind: room, rect: [0, 0, 5, 5]}
      - {id: 1, kind: corridor, rect: [0, 5, 12, 7]}
    doorways:
      - {loc_a: 0, loc_b: 1, segment: [[2, 5], [3, 5]]}
"""

from __future__ import annotations

from pathlib import Path

from swarmtrack.environment import Doorway, EnvironmentMap, Location, LocationKind
from swarmtrack.errors import LayoutError
from swarmtrack.yamlio import load_yaml_with_lines, reject_unknown

R, C = LocationKind.ROOM, LocationKind.CORRIDOR
DOOR_WIDTH = 1.5


def _door_v(a, b, x, y_mid):
    h = DOOR_WIDTH / 2
    return Doorway(a, b, ((x, y_mid - h), (x, y_mid + h)))


def _door_h(a, b, y, x_mid):
    h = DOOR_WIDTH / 2
    return Doorway(a, b, ((x_mid - h, y), (x_mid + h, y)))


def _env1() -> EnvironmentMap:
    # 14 m horizontal corridor, three rooms south, two north
    locs = [
        Location(0, R, (0.0, 0.0, 5.0, 5.0)),
        Location(1, R, (5.0, 0.0, 10.0, 5.0)),
        Location(2, R, (10.0, 0.0, 14.0, 5.0)),
        Location(3, R, (0.0, 7.0, 6.0, 12.0)),
        Location(4, R, (6.0, 7.0, 11.0, 11.0)),
        Location(5, C, (0.0, 5.0, 14.0, 7.0)),
    ]
    doors = [
        _door_h(0, 5, 5.0, 2.5),
        _door_h(1, 5, 5.0, 7.5),
        _door_h(2, 5, 5.0, 12.0),
        _door_h(3, 5, 7.0, 3.0),
        _door_h(4, 5, 7.0, 8.5),
    ]
    return EnvironmentMap(locs, doors, name="Env1")


def _env2() -> EnvironmentMap:
    # 16 m corridor, two small rooms south, three north
    locs = [
        Location(0, R, (0.0, 0.0, 4.0, 4.0)),
        Location(1, R, (11.0, 0.0, 16.0, 4.0)),
        Location(2, R, (0.0, 6.0, 5.0, 11.0)),
        Location(3, R, (5.0, 6.0, 10.0, 11.0)),
        Location(4, R, (10.0, 6.0, 16.0, 11.0)),
        Location(5, C, (0.0, 4.0, 16.0, 6.0)),
    ]
    doors = [
        _door_h(0, 5, 4.0, 2.0),
        _door_h(1, 5, 4.0, 13.5),
        _door_h(2, 5, 6.0, 2.5),
        _door_h(3, 5, 6.0, 7.5),
        _door_h(4, 5, 6.0, 13.0),
    ]
    return EnvironmentMap(locs, doors, name="Env2")


def _env3() -> EnvironmentMap:
    # 12 m vertical corridor; rooms 0 and 1 also joined directly
    locs = [
        Location(0, R, (0.0, 0.0, 5.0, 5.0)),
        Location(1, R, (0.0, 5.0, 5.0, 10.0)),
        Location(2, R, (7.0, 0.0, 12.0, 4.0)),
        Location(3, R, (7.0, 4.0, 12.0, 8.0)),
        Location(4, R, (7.0, 8.0, 13.0, 12.0)),
        Location(5, C, (5.0, 0.0, 7.0, 12.0)),
    ]
    doors = [
        _door_v(0, 5, 5.0, 2.5),
        _door_v(1, 5, 5.0, 7.5),
        _door_v(2, 5, 7.0, 2.0),
        _door_v(3, 5, 7.0, 6.0),
        _door_v(4, 5, 7.0, 10.0),
        _door_h(0, 1, 5.0, 2.5),
    ]
    return EnvironmentMap(locs, doors, name="Env3")


def _env4() -> EnvironmentMap:
    # 10 m corridor with a fifth room closing its east end
    locs = [
        Location(0, R, (0.0, 0.0, 5.0, 5.0)),
        Location(1, R, (5.0, 0.0, 10.0, 5.0)),
        Location(2, R, (0.0, 7.0, 5.0, 11.0)),
        Location(3, R, (5.0, 7.0, 10.0, 12.0)),
        Location(4, R, (10.0, 4.0, 14.0, 8.0)),
        Location(5, C, (0.0, 5.0, 10.0, 7.0)),
    ]
    doors = [
        _door_h(0, 5, 5.0, 2.5),
        _door_h(1, 5, 5.0, 7.5),
        _door_h(2, 5, 7.0, 2.5),
        _door_h(3, 5, 7.0, 7.5),
        _door_v(4, 5, 10.0, 6.0),
    ]
    return EnvironmentMap(locs, doors, name="Env4")


_BUILDERS = {"Env1": _env1, "Env2": _env2, "Env3": _env3, "Env4": _env4}
BUILTIN_LAYOUTS = tuple(_BUILDERS)
_CACHE: dict[str, EnvironmentMap] = {}


def build_layout(layout) -> EnvironmentMap:
    """Built-in id ("Env1".."Env4"), path to a layout YAML, a parsed spec dict, or a map."""
    if isinstance(layout, EnvironmentMap):
        return layout
    if isinstance(layout, dict):
        return layout_from_spec(layout)
    key = str(layout)
    if key in _BUILDERS:
        if key not in _CACHE:
            _CACHE[key] = _BUILDERS[key]()
        return _CACHE[key]
    path = Path(key)
    if path.suffix in (".yaml", ".yml") or path.exists():
        return load_layout(path)
    raise LayoutError(f"unknown layout {key!r}; built-ins are {', '.join(BUILTIN_LAYOUTS)}")


def load_layout(path) -> EnvironmentMap:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise LayoutError(f"cannot read layout file {path}: {exc}") from exc
    spec = load_yaml_with_lines(text, source=str(path))
    if "name" not in spec:
        spec["name"] = path.stem
    return layout_from_spec(spec)


def _pair(value, what, line):
    try:
        x, y = value
        return float(x), float(y)
    except (TypeError, ValueError):
        raise LayoutError(f"{what} must be a pair of numbers", line=line) from None


def layout_from_spec(spec: dict) -> EnvironmentMap:
    if not isinstance(spec, dict):
        raise LayoutError("layout spec must be a mapping")
    reject_unknown(spec, {"name", "locations", "doorways"}, LayoutError)
    line_of: dict[str, int | None] = {}
    locations = []
    for k, item in enumerate(spec.get("locations") or []):
        line = getattr(item, "line", None)
        if not isinstance(item, dict):
            raise LayoutError("location entry must be a mapping", line=line)
        reject_unknown(item, {"id", "kind", "rect"}, LayoutError)
        try:
            kind = LocationKind(str(item["kind"]).lower())
            rect = tuple(float(v) for v in item["rect"])
            loc_id = int(item["id"])
        except KeyError as exc:
            raise LayoutError(f"location {k} is missing {exc.args[0]!r}", line=line) from None
        except (TypeError, ValueError) as exc:
            raise LayoutError(f"location {k}: {exc}", line=line) from None
        if len(rect) != 4:
            raise LayoutError("rect must be [x_min, y_min, x_max, y_max]", line=line)
        locations.append(Location(loc_id, kind, rect))
        line_of[f"location {loc_id}"] = line
    doorways = []
    for k, item in enumerate(spec.get("doorways") or []):
        line = getattr(item, "line", None)
        if not isinstance(item, dict):
            raise LayoutError("doorway entry must be a mapping", line=line)
        reject_unknown(item, {"loc_a", "loc_b", "segment"}, LayoutError)
        try:
            a, b = int(item["loc_a"]), int(item["loc_b"])
            seg = item["segment"]
        except KeyError as exc:
            raise LayoutError(f"doorway {k} is missing {exc.args[0]!r}", line=line) from None
        if not isinstance(seg, (list, tuple)) or len(seg) != 2:
            raise LayoutError("segment must be [[x, y], [x, y]]", line=line)
        doorways.append(Doorway(a, b, (_pair(seg[0], "segment end", line), _pair(seg[1], "segment end", line))))
        line_of[f"doorway {k} ({a}-{b})"] = line
    try:
        return EnvironmentMap(locations, doorways, name=str(spec.get("name", "custom")))
    except LayoutError as exc:
        if exc.line is None and exc.element in line_of and line_of[exc.element] is not None:
            raise LayoutError(exc.detail, element=exc.element, line=line_of[exc.element]) from None
        raise


def check_builtin_layouts() -> None:
    for key in BUILTIN_LAYOUTS:
        build_layout(key)

