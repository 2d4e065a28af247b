"""CSV persistence for run logs.

A run directory holds::

    config.json        schema_version, config echo, seed, location kinds
    transitions.csv    time_s,person_id,from_location,to_location,to_kind
    observations.csv   time_s,robot_id,person_id,location,timestamp_s,observer
    beliefs.csv        time_s,robot_id,person_id,location,timestamp_s,observer

Times are simulation seconds written with ``repr`` so they read back
bit-for-bit.  Rows are sorted by time, then robot id, then person id.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from swarmtrack.crowd import Transition
from swarmtrack.engine import BeliefRow, Observation, RunLog
from swarmtrack.gossip import TrackRecord

SCHEMA_VERSION = 1

TABLES = {
    "transitions": ["time_s", "person_id", "from_location", "to_location", "to_kind"],
    "observations": ["time_s", "robot_id", "person_id", "location", "timestamp_s", "observer"],
    "beliefs": ["time_s", "robot_id", "person_id", "location", "timestamp_s", "observer"],
}
CONFIG_FILE = "config.json"


def dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_table(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_run_log(log: RunLog, directory) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    kinds = log.location_kinds
    _write_table(
        d / "transitions.csv",
        TABLES["transitions"],
        ([repr(t.time), t.person_id, t.from_location, t.to_location, kinds[t.to_location]] for t in log.transitions),
    )
    _write_table(
        d / "observations.csv",
        TABLES["observations"],
        (
            [repr(o.record.timestamp), o.robot_id, o.record.person_id, o.record.location,
             repr(o.record.timestamp), o.record.observer]
            for o in log.observations
        ),
    )
    _write_table(
        d / "beliefs.csv",
        TABLES["beliefs"],
        ([repr(b.time), b.robot_id, b.person_id, b.location, repr(b.timestamp), b.observer] for b in log.belief_rows),
    )
    dump_json(
        {
            "schema_version": SCHEMA_VERSION,
            "seed": log.seed,
            "n_robots": log.n_robots,
            "duration_s": log.duration,
            "config": log.config,
            "location_kinds": {str(k): v for k, v in sorted(log.location_kinds.items())},
            "initial_locations": {str(k): v for k, v in sorted(log.initial_locations.items())},
            "tables": {f"{name}.csv": cols for name, cols in TABLES.items()},
        },
        d / CONFIG_FILE,
    )
    return d


def _read_table(path: Path, expected):
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected:
            raise ValueError(f"{path}: unexpected header {header}, expected {expected}")
        yield from reader


def read_run_log(directory) -> RunLog:
    d = Path(directory)
    meta = json.loads((d / CONFIG_FILE).read_text())
    if meta.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{d}: unsupported schema_version {meta.get('schema_version')!r}")
    log = RunLog(
        config=meta["config"],
        seed=int(meta["seed"]),
        n_robots=int(meta["n_robots"]),
        duration=float(meta["duration_s"]),
        location_kinds={int(k): v for k, v in meta["location_kinds"].items()},
        initial_locations={int(k): v for k, v in meta["initial_locations"].items()},
    )
    for t, pid, a, b, _kind in _read_table(d / "transitions.csv", TABLES["transitions"]):
        log.transitions.append(Transition(int(pid), int(a), int(b), float(t)))
    for _t, rid, pid, loc, ts, obs in _read_table(d / "observations.csv", TABLES["observations"]):
        log.observations.append(Observation(int(rid), TrackRecord(int(pid), int(loc), float(ts), int(obs))))
    for t, rid, pid, loc, ts, obs in _read_table(d / "beliefs.csv", TABLES["beliefs"]):
        log.belief_rows.append(BeliefRow(float(t), int(rid), int(pid), int(loc), float(ts), int(obs)))
    return log


def find_run_dirs(root) -> list[Path]:
    return sorted(p.parent for p in Path(root).rglob(CONFIG_FILE) if (p.parent / "beliefs.csv").exists())
