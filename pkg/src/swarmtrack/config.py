"""YAML configs for single runs and experiment grids.

Single run (``swarmtrack run``)::

    layout: Env1
    n_robots: 12
    seed: 7
    sim: {duration: 600, dt: 0.1, n_persons: 4, robot_speed: 1.0, snapshot_period: 1.0}
    crowd: {check_interval: 20, p_leave_room: 0.1, p_leave_corridor: 0.9}
    sensing: {detect_radius: 2.0, sense_period: 1.0, p_detect: 0.9}
    comm: {comm_radius: 2.5}

Experiment grid (``swarmtrack batch``) replaces ``layout``/``n_robots``/
``seed`` with ``layouts``, ``swarm_sizes``, ``runs_per_config``,
``base_seed`` and ``output_dir``.  Every key is optional except
``layouts``; unknown keys are rejected.

Run seeds are ``mix_seed(base_seed, layout_index, size_index, run_index)``
(see :mod:`swarmtrack.rng`).
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple

from swarmtrack.engine import SimConfig
from swarmtrack.errors import ConfigError
from swarmtrack.layouts import build_layout
from swarmtrack.rng import mix_seed
from swarmtrack.yamlio import key_line, load_yaml_with_lines, reject_unknown

OUTPUT_ENV_VAR = "SWARMTRACK_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "swarmtrack-out"

_SECTIONS = {
    "sim": ("duration", "dt", "n_persons", "robot_speed", "snapshot_period"),
    "crowd": ("check_interval", "p_leave_room", "p_leave_corridor"),
    "sensing": ("detect_radius", "sense_period", "p_detect"),
    "comm": ("comm_radius",),
}
_INT_KEYS = {"n_persons", "n_robots", "seed", "base_seed", "runs_per_config"}


def _number(mapping, key, prefix=""):
    value = mapping[key]
    name = prefix + key
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key=name, line=key_line(mapping, key))
    if key in _INT_KEYS:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"expected an integer, got {value!r}", key=name, line=key_line(mapping, key))
        return int(value)
    return float(value)


def _apply_sections(doc, base: SimConfig) -> SimConfig:
    """Overlay the sim/crowd/sensing/comm sections of ``doc`` onto ``base``."""
    values = {}
    for section, keys in _SECTIONS.items():
        if section not in doc:
            continue
        body = doc[section]
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError("section must be a mapping", key=section, line=key_line(doc, section))
        reject_unknown(body, set(keys), prefix=f"{section}.")
        values[section] = {k: _number(body, k, f"{section}.") for k in body}
    try:
        crowd = replace(base.crowd, **values.get("crowd", {}))
        sensing = replace(base.sensing, **values.get("sensing", {}))
        comm = replace(base.comm, **values.get("comm", {}))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return replace(base, crowd=crowd, sensing=sensing, comm=comm, **values.get("sim", {}))


def parse_sim_config(text: str, source: str = "<config>") -> SimConfig:
    doc = load_yaml_with_lines(text, source)
    reject_unknown(doc, {"layout", "n_robots", "seed", *_SECTIONS})
    cfg = _apply_sections(doc, SimConfig())
    top = {}
    if "layout" in doc:
        top["layout"] = str(doc["layout"])
    for key in ("n_robots", "seed"):
        if key in doc:
            top[key] = _number(doc, key)
    cfg = replace(cfg, **top)
    cfg.validate()
    return cfg


class RunSpec(NamedTuple):
    layout_index: int
    size_index: int
    run_index: int
    layout: str
    n_robots: int
    config: SimConfig

    @property
    def key(self) -> str:
        return f"{layout_label(self.layout)}/{self.n_robots}/{self.run_index}"


def layout_label(layout: str) -> str:
    """Directory name for a layout id or layout file path."""
    return os.path.splitext(os.path.basename(str(layout)))[0]


@dataclass(frozen=True)
class ExperimentConfig:
    layouts: tuple[str, ...]
    swarm_sizes: tuple[int, ...] = (4, 8, 12)
    runs_per_config: int = 5
    base_seed: int = 0
    output_dir: str = field(default_factory=lambda: os.environ.get(OUTPUT_ENV_VAR, DEFAULT_OUTPUT_DIR))
    base: SimConfig = field(default_factory=SimConfig)

    def validate(self) -> None:
        if not self.layouts:
            raise ConfigError("need at least one layout", key="layouts")
        if not self.swarm_sizes:
            raise ConfigError("need at least one swarm size", key="swarm_sizes")
        if len(set(self.swarm_sizes)) != len(self.swarm_sizes):
            raise ConfigError("swarm sizes must be distinct", key="swarm_sizes")
        if len({layout_label(l) for l in self.layouts}) != len(self.layouts):
            raise ConfigError("layouts must be distinct", key="layouts")
        if self.runs_per_config < 1:
            raise ConfigError("runs_per_config must be at least 1", key="runs_per_config")
        for n in self.swarm_sizes:
            if n < 1:
                raise ConfigError(f"swarm size {n} must be at least 1", key="swarm_sizes")
        for layout in self.layouts:
            env = build_layout(layout)
            replace(self.base, layout=layout).validate(env)
        seeds = [spec.config.seed for spec in self.runs()]
        if len(set(seeds)) != len(seeds):
            raise ConfigError("derived run seeds collide; pick another base_seed", key="base_seed")

    def runs(self) -> Iterator[RunSpec]:
        for li, layout in enumerate(self.layouts):
            for si, n in enumerate(self.swarm_sizes):
                for ri in range(self.runs_per_config):
                    seed = mix_seed(self.base_seed, li, si, ri)
                    cfg = replace(self.base, layout=layout, n_robots=n, seed=seed)
                    yield RunSpec(li, si, ri, layout, n, cfg)

    def to_dict(self) -> dict:
        base = self.base.to_dict()
        for key in ("layout", "n_robots", "seed"):
            base.pop(key)
        return {
            "layouts": list(self.layouts),
            "swarm_sizes": list(self.swarm_sizes),
            "runs_per_config": self.runs_per_config,
            "base_seed": self.base_seed,
            "params": base,
        }

    def digest(self) -> str:
        """Fingerprint of everything that affects run outputs (not output_dir)."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


_EXPERIMENT_KEYS = {"layouts", "swarm_sizes", "runs_per_config", "base_seed", "output_dir", *_SECTIONS}


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    doc = load_yaml_with_lines(text, source)
    reject_unknown(doc, _EXPERIMENT_KEYS)
    if "layouts" not in doc:
        raise ConfigError("missing required key", key="layouts", line=1)

    def str_list(key):
        value = doc[key]
        if isinstance(value, (str, int)):
            value = [value]
        if not isinstance(value, list):
            raise ConfigError("expected a list", key=key, line=key_line(doc, key))
        return value

    layouts = tuple(str(v) for v in str_list("layouts"))
    kwargs = {"layouts": layouts}
    if "swarm_sizes" in doc:
        sizes = []
        for v in str_list("swarm_sizes"):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"swarm size {v!r} is not an integer", key="swarm_sizes",
                                  line=key_line(doc, "swarm_sizes"))
            sizes.append(v)
        kwargs["swarm_sizes"] = tuple(sizes)
    for key in ("runs_per_config", "base_seed"):
        if key in doc:
            kwargs[key] = _number(doc, key)
    if "output_dir" in doc:
        kwargs["output_dir"] = str(doc["output_dir"])
    kwargs["base"] = _apply_sections(doc, SimConfig())
    cfg = ExperimentConfig(**kwargs)
    try:
        cfg.validate()
    except ConfigError as exc:
        if exc.line is None and exc.key in doc:
            raise ConfigError(str(exc), line=key_line(doc, exc.key)) from None
        raise
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, str(path))


def load_sim_config(path) -> SimConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_sim_config(text, str(path))

