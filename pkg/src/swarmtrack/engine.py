"""Fixed-step simulation loop.

Each tick advances the clock by ``dt`` and then, at the new time,
runs in this order:

1. crowd step (on check-interval boundaries, person-id order)
2. robot motion (robot-id order)
3. sensing (on sense-period boundaries); each robot merges its own
   detections into its store
4. one gossip round
5. belief snapshot (on snapshot-period boundaries)

Boundaries are decided on the integer tick counter, so floating-point
drift in ``k * dt`` never shifts a schedule.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from swarmtrack.crowd import CrowdParams, PersonState, Transition, step_person
from swarmtrack.environment import EnvironmentMap, sample_free_point
from swarmtrack.errors import ConfigError
from swarmtrack.gossip import CommParams, TrackRecord, exchange, merge_record
from swarmtrack.layouts import build_layout
from swarmtrack.mobility import DEFAULT_SPEED, TWO_PI, RobotPose, step_robot
from swarmtrack.rng import make_streams
from swarmtrack.sensing import SensingParams, sense


@dataclass(frozen=True)
class SimConfig:
    layout: str = "Env1"
    n_robots: int = 12
    n_persons: int = 4
    duration: float = 600.0
    dt: float = 0.1
    seed: int = 0
    robot_speed: float = DEFAULT_SPEED
    snapshot_period: float = 1.0
    crowd: CrowdParams = field(default_factory=CrowdParams)
    sensing: SensingParams = field(default_factory=SensingParams)
    comm: CommParams = field(default_factory=CommParams)

    def steps_per(self, period: float, what: str) -> int:
        k = round(period / self.dt)
        if k < 1 or abs(k * self.dt - period) > 1e-9 * max(period, 1.0):
            raise ConfigError(f"dt={self.dt} does not divide {what}={period}", key=what)
        return k

    @property
    def n_ticks(self) -> int:
        return self.steps_per(self.duration, "duration")

    def validate(self, env: EnvironmentMap | None = None) -> EnvironmentMap:
        if not self.duration > 0:
            raise ConfigError("duration must be positive", key="duration")
        if not self.dt > 0:
            raise ConfigError("dt must be positive", key="dt")
        if self.n_robots < 1:
            raise ConfigError("need at least one robot", key="n_robots")
        if self.n_persons < 0:
            raise ConfigError("n_persons must be non-negative", key="n_persons")
        if not self.robot_speed > 0:
            raise ConfigError("robot_speed must be positive", key="robot_speed")
        self.steps_per(self.duration, "duration")
        self.steps_per(self.sensing.sense_period, "sense_period")
        self.steps_per(self.crowd.check_interval, "check_interval")
        self.steps_per(self.snapshot_period, "snapshot_period")
        env = env or build_layout(self.layout)
        n_rooms = len(env.rooms)
        if self.n_persons > n_rooms:
            raise ConfigError(
                f"n_persons={self.n_persons} exceeds the {n_rooms} rooms of {env.name}",
                key="n_persons",
            )
        return env

    def to_dict(self) -> dict:
        return asdict(self)


class BeliefRow(NamedTuple):
    time: float
    robot_id: int
    person_id: int
    location: int
    timestamp: float
    observer: int


class Observation(NamedTuple):
    robot_id: int
    record: TrackRecord


@dataclass
class RunLog:
    config: dict
    seed: int
    n_robots: int
    duration: float
    location_kinds: dict[int, str]
    initial_locations: dict[int, int]
    transitions: list[Transition] = field(default_factory=list)
    observations: list[Observation] = field(default_factory=list)
    belief_rows: list[BeliefRow] = field(default_factory=list)


@dataclass
class SimState:
    config: SimConfig
    env: EnvironmentMap
    streams: dict[str, np.random.Generator]
    persons: list[PersonState]
    robots: list[RobotPose]
    stores: list[dict]
    log: RunLog
    tick_index: int = 0
    time: float = 0.0
    steps_check: int = 0
    steps_sense: int = 0
    steps_snapshot: int = 0


def init_sim(config: SimConfig, env: EnvironmentMap | None = None) -> SimState:
    env = config.validate(env)
    streams = make_streams(config.seed)
    placement = streams["placement"]
    persons = []
    for pid, room in enumerate(env.rooms[: config.n_persons]):
        persons.append(PersonState(pid, room.id, sample_free_point(env, placement, room.id), 0.0))
    robots = []
    for rid in range(config.n_robots):
        pos = sample_free_point(env, placement)
        robots.append(RobotPose(rid, pos, placement.random() * TWO_PI, config.robot_speed))
    log = RunLog(
        config=config.to_dict(),
        seed=config.seed,
        n_robots=config.n_robots,
        duration=config.duration,
        location_kinds={loc.id: loc.kind.value for loc in env.locations},
        initial_locations={p.person_id: p.location for p in persons},
    )
    return SimState(
        config=config,
        env=env,
        streams=streams,
        persons=persons,
        robots=robots,
        stores=[{} for _ in robots],
        log=log,
        steps_check=config.steps_per(config.crowd.check_interval, "check_interval"),
        steps_sense=config.steps_per(config.sensing.sense_period, "sense_period"),
        steps_snapshot=config.steps_per(config.snapshot_period, "snapshot_period"),
    )


def _clock(k: int, dt: float) -> float:
    return round(k * dt, 9)


def tick(state: SimState) -> SimState:
    cfg, env, log = state.config, state.env, state.log
    k = state.tick_index + 1
    t = _clock(k, cfg.dt)

    if k % state.steps_check == 0:
        rng = state.streams["crowd"]
        for i, person in enumerate(state.persons):
            person, moved = step_person(env, person, t, cfg.crowd, rng)
            state.persons[i] = person
            if moved is not None:
                log.transitions.append(moved)

    rng = state.streams["mobility"]
    state.robots = [step_robot(env, pose, cfg.dt, rng) for pose in state.robots]

    if k % state.steps_sense == 0:
        rng = state.streams["sensing"]
        for i, pose in enumerate(state.robots):
            for rec in sense(env, pose, state.persons, t, cfg.sensing, rng):
                log.observations.append(Observation(pose.robot_id, rec))
                state.stores[i] = merge_record(state.stores[i], rec)

    state.stores = exchange(state.robots, state.stores, cfg.comm)

    if k % state.steps_snapshot == 0:
        for pose, store in zip(state.robots, state.stores):
            for pid in sorted(store):
                rec = store[pid]
                log.belief_rows.append(
                    BeliefRow(t, pose.robot_id, pid, rec.location, rec.timestamp, rec.observer)
                )

    state.tick_index = k
    state.time = t
    return state


def run(config: SimConfig, env: EnvironmentMap | None = None) -> RunLog:
    state = init_sim(config, env)
    for _ in range(config.n_ticks):
        tick(state)
    return state.log
