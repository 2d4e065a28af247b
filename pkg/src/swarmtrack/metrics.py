"""Event detection and propagation delays, and their ECDFs.

An event is a person entering a room.  Its detection delay is the time
to the first direct observation of the person in that room during the
same stay.  Its propagation delay for a fraction ``f`` is the time
until at least ``ceil(f * n_robots)`` robots simultaneously believe the
person is in that room with a record no older than the entry.  Both are
measured from the entry time; events that never reach a milestone are
censored and stay in every denominator.
"""

from __future__ import annotations

import bisect
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from swarmtrack.engine import RunLog

FRACTIONS = (0.25, 0.5, 0.75)
METRICS = ("detect", "prop25", "prop50", "prop75")
TAIL_EXCLUSION = 180.0
SCHEMA_VERSION = 1


@dataclass(frozen=True, order=True)
class Event:
    t_enter: float
    person_id: int
    room: int


@dataclass(frozen=True)
class EventOutcome:
    event: Event
    detect_delay: float | None
    prop_delay_25: float | None
    prop_delay_50: float | None
    prop_delay_75: float | None

    def delay(self, metric: str) -> float | None:
        return {
            "detect": self.detect_delay,
            "prop25": self.prop_delay_25,
            "prop50": self.prop_delay_50,
            "prop75": self.prop_delay_75,
        }[metric]


@dataclass(frozen=True)
class Ecdf:
    """Step function over delays; the denominator counts censored samples too."""

    steps: tuple[tuple[float, float], ...]
    total: int
    uncensored: int

    @property
    def plateau(self) -> float:
        return self.uncensored / self.total

    def __call__(self, x: float) -> float:
        i = bisect.bisect_right([d for d, _ in self.steps], x)
        return self.steps[i - 1][1] if i else 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "uncensored": self.uncensored,
            "steps": [list(s) for s in self.steps],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Ecdf":
        return cls(tuple((float(a), float(b)) for a, b in d["steps"]), int(d["total"]), int(d["uncensored"]))


def ecdf(delays: Sequence[float | None]) -> Ecdf:
    if not delays:
        raise ValueError("ECDF needs at least one event")
    total = len(delays)
    defined = sorted(d for d in delays if d is not None)
    steps = []
    for i, d in enumerate(defined):
        if i + 1 < len(defined) and defined[i + 1] == d:
            continue
        steps.append((d, (i + 1) / total))
    return Ecdf(tuple(steps), total, len(defined))


def extract_events(log: RunLog, tail: float = TAIL_EXCLUSION) -> list[Event]:
    cutoff = log.duration - tail
    events = [
        Event(tr.time, tr.person_id, tr.to_location)
        for tr in log.transitions
        if log.location_kinds[tr.to_location] == "room" and tr.time <= cutoff
    ]
    return sorted(events)


class _LogIndex:
    """Per-person lookups over one run log."""

    def __init__(self, log: RunLog):
        self.moves: dict[int, list[float]] = defaultdict(list)
        for tr in log.transitions:
            self.moves[tr.person_id].append(tr.time)
        for times in self.moves.values():
            times.sort()
        self.sightings: dict[int, list[tuple[float, int]]] = defaultdict(list)
        for obs in log.observations:
            rec = obs.record
            self.sightings[rec.person_id].append((rec.timestamp, rec.location))
        for s in self.sightings.values():
            s.sort()
        # person -> snapshot time -> [(location, timestamp), ...]
        snaps: dict[int, dict[float, list]] = defaultdict(lambda: defaultdict(list))
        self.snapshot_times: list[float] = []
        last = None
        for row in log.belief_rows:
            if row.time != last:
                self.snapshot_times.append(row.time)
                last = row.time
            snaps[row.person_id][row.time].append((row.location, row.timestamp))
        self.snapshot_times = sorted(set(self.snapshot_times))
        self.snaps = snaps

    def stay_end(self, person_id: int, t_enter: float) -> float:
        times = self.moves.get(person_id, [])
        i = bisect.bisect_right(times, t_enter)
        return times[i] if i < len(times) else math.inf


def detection_delay(e: Event, log: RunLog, index: _LogIndex | None = None) -> float | None:
    index = index or _LogIndex(log)
    end = index.stay_end(e.person_id, e.t_enter)
    for ts, loc in index.sightings.get(e.person_id, ()):
        if ts < e.t_enter or loc != e.room:
            continue
        if ts >= end:
            break
        return ts - e.t_enter
    return None


def threshold_count(fraction: float, n_robots: int) -> int:
    if fraction not in FRACTIONS:
        raise ValueError(f"fraction must be one of {FRACTIONS}, got {fraction}")
    return math.ceil(fraction * n_robots)


def propagation_delay(
    e: Event,
    log: RunLog,
    fraction: float,
    n_robots: int | None = None,
    index: _LogIndex | None = None,
) -> float | None:
    n_robots = log.n_robots if n_robots is None else n_robots
    need = threshold_count(fraction, n_robots)
    index = index or _LogIndex(log)
    if detection_delay(e, log, index) is None:
        return None
    per_time = index.snaps.get(e.person_id, {})
    start = bisect.bisect_left(index.snapshot_times, e.t_enter)
    for t in index.snapshot_times[start:]:
        aware = sum(1 for loc, ts in per_time.get(t, ()) if loc == e.room and ts >= e.t_enter)
        if aware >= need:
            return t - e.t_enter
    return None


def evaluate_log(log: RunLog, tail: float = TAIL_EXCLUSION) -> list[EventOutcome]:
    index = _LogIndex(log)
    out = []
    for e in extract_events(log, tail):
        det = detection_delay(e, log, index)
        props = [propagation_delay(e, log, f, log.n_robots, index) for f in FRACTIONS]
        out.append(EventOutcome(e, det, *props))
    return out


@dataclass
class SizeMetrics:
    n_robots: int
    n_runs: int
    n_events: int
    rates: dict[str, float]
    censored: dict[str, int]
    median_delay: dict[str, float | None]
    curves: dict[str, Ecdf] = field(repr=False)

    @property
    def detection_rate(self) -> float:
        return self.rates["detect"]

    def to_dict(self) -> dict:
        return {
            "n_robots": self.n_robots,
            "n_runs": self.n_runs,
            "n_events": self.n_events,
            "rates": self.rates,
            "censored": self.censored,
            "median_delay_s": self.median_delay,
            "ecdf": {m: c.to_dict() for m, c in self.curves.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SizeMetrics":
        return cls(
            n_robots=int(d["n_robots"]),
            n_runs=int(d["n_runs"]),
            n_events=int(d["n_events"]),
            rates=dict(d["rates"]),
            censored=dict(d["censored"]),
            median_delay=dict(d["median_delay_s"]),
            curves={m: Ecdf.from_dict(c) for m, c in d["ecdf"].items()},
        )


@dataclass
class MetricsReport:
    sizes: dict[int, SizeMetrics]
    schema_version: int = SCHEMA_VERSION

    def __getitem__(self, n_robots: int) -> SizeMetrics:
        return self.sizes[n_robots]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "sizes": [self.sizes[n].to_dict() for n in sorted(self.sizes)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        sizes = [SizeMetrics.from_dict(s) for s in d["sizes"]]
        return cls({s.n_robots: s for s in sizes})


def summarize(outcomes: Sequence[EventOutcome], n_robots: int, n_runs: int) -> SizeMetrics:
    if not outcomes:
        raise ValueError(f"no events to score for swarm size {n_robots}")
    rates, censored, medians, curves = {}, {}, {}, {}
    for m in METRICS:
        delays = [o.delay(m) for o in outcomes]
        defined = [d for d in delays if d is not None]
        curves[m] = ecdf(delays)
        rates[m] = len(defined) / len(delays)
        censored[m] = len(delays) - len(defined)
        medians[m] = statistics.median(defined) if defined else None
    return SizeMetrics(n_robots, n_runs, len(outcomes), rates, censored, medians, curves)


def aggregate(logs: Iterable[RunLog], n_robots: int | None = None) -> MetricsReport:
    """Pool events over all logs (runs and layouts) of one swarm size."""
    logs = list(logs)
    if not logs:
        raise ValueError("no logs to aggregate")
    sizes = {log.n_robots for log in logs}
    if n_robots is not None:
        sizes.add(n_robots)
    if len(sizes) != 1:
        raise ValueError(f"logs mix swarm sizes {sorted(sizes)}")
    n = sizes.pop()
    outcomes = [o for log in logs for o in evaluate_log(log)]
    return MetricsReport({n: summarize(outcomes, n, len(logs))})


def combine(reports: Iterable[MetricsReport]) -> MetricsReport:
    sizes: dict[int, SizeMetrics] = {}
    for rep in reports:
        for n, s in rep.sizes.items():
            if n in sizes:
                raise ValueError(f"swarm size {n} appears in more than one report")
            sizes[n] = s
    return MetricsReport(sizes)
