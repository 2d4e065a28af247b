"""YAML loading that remembers source line numbers for diagnostics."""

from __future__ import annotations

import yaml

from swarmtrack.errors import ConfigError


class LineDict(dict):
    """Mapping that records its own line and the line of each key (1-based)."""

    line: int | None = None
    key_lines: dict


class _LineLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node):
    loader.flatten_mapping(node)
    out = LineDict()
    out.line = node.start_mark.line + 1
    out.key_lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        if key in out:
            raise ConfigError("duplicate key", key=key, line=key_node.start_mark.line + 1)
        out[key] = loader.construct_object(value_node, deep=True)
        out.key_lines[key] = key_node.start_mark.line + 1
    return out


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


def load_yaml_with_lines(text: str, source: str = "<string>") -> LineDict:
    try:
        data = yaml.load(text, Loader=_LineLoader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise ConfigError(f"{source}: {exc.problem}", line=line) from None
    if data is None:
        data = LineDict()
        data.key_lines = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping", line=1)
    return data


def key_line(mapping, key) -> int | None:
    lines = getattr(mapping, "key_lines", None) or {}
    return lines.get(key, getattr(mapping, "line", None))


def reject_unknown(mapping, allowed, error=ConfigError, prefix: str = "") -> None:
    for key in mapping:
        if key not in allowed:
            raise error(
                f"unknown key {prefix}{key!r}; expected one of {sorted(allowed)}",
                line=key_line(mapping, key),
            )
