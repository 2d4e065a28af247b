"""Track-record sharing between robots in radio range.

A robot's beliefs are a plain ``dict`` mapping person id to the most
recent :class:`TrackRecord` it knows of.  Merging keeps, per person,
the greater record under a total order (timestamp, then observer, then
location), which makes ``merge_stores`` a join on a lattice:
commutative, associative and idempotent.

Functions never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

BeliefStore = dict  # person_id -> TrackRecord


class TrackRecord(NamedTuple):
    person_id: int
    location: int
    timestamp: float
    observer: int

    def order_key(self) -> tuple[float, int, int]:
        return (self.timestamp, self.observer, self.location)


@dataclass(frozen=True)
class CommParams:
    comm_radius: float = 2.5

    def __post_init__(self):
        if not self.comm_radius > 0:
            raise ValueError("comm_radius must be positive")


def record_order(a: TrackRecord, b: TrackRecord) -> int:
    """-1, 0 or 1 as ``a`` is older than, equal to, or newer than ``b``."""
    if a.person_id != b.person_id:
        raise ValueError(f"cannot order records of persons {a.person_id} and {b.person_id}")
    ka, kb = a.order_key(), b.order_key()
    return (ka > kb) - (ka < kb)


def _newer(a: TrackRecord, b: TrackRecord) -> bool:
    return (a[2], a[3], a[1]) > (b[2], b[3], b[1])


def merge_record(store: Mapping[int, TrackRecord], incoming: TrackRecord) -> BeliefStore:
    current = store.get(incoming.person_id)
    out = dict(store)
    if current is None or _newer(incoming, current):
        out[incoming.person_id] = incoming
    return out


def merge_stores(
    mine: Mapping[int, TrackRecord], theirs: Mapping[int, TrackRecord]
) -> BeliefStore:
    out = dict(mine)
    for pid, rec in theirs.items():
        current = out.get(pid)
        if current is None or _newer(rec, current):
            out[pid] = rec
    return out


def exchange(
    positions: Sequence, stores: Sequence[Mapping[int, TrackRecord]], params: CommParams
) -> list[BeliefStore]:
    """One gossip round over start-of-round snapshots.

    Every pair within ``comm_radius`` (euclidean, walls ignored) ends up
    holding the merge of both snapshots.  Because the snapshots are taken
    before any merge, a record moves at most one hop per round.

    ``positions`` holds (x, y) pairs or anything with a ``position``
    attribute (robot poses).
    """
    if len(positions) != len(stores):
        raise ValueError("positions and stores must be index-aligned")
    pts = [getattr(p, "position", p) for p in positions]
    r2 = params.comm_radius * params.comm_radius
    out = [dict(s) for s in stores]
    n = len(pts)
    for i in range(n):
        xi, yi = pts[i]
        for j in range(i + 1, n):
            xj, yj = pts[j]
            dx = xi - xj
            dy = yi - yj
            if dx * dx + dy * dy <= r2:
                si, sj = stores[i], stores[j]
                if si == sj:
                    continue
                _merge_into(out[i], sj)
                _merge_into(out[j], si)
    return out


def _merge_into(target: dict, source: Mapping[int, TrackRecord]) -> None:
    for pid, rec in source.items():
        current = target.get(pid)
        if current is None or _newer(rec, current):
            target[pid] = rec
