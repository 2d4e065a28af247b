"""Range-limited person detection standing in for face recognition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from swarmtrack.crowd import PersonState
from swarmtrack.environment import EnvironmentMap, location_at
from swarmtrack.gossip import TrackRecord
from swarmtrack.mobility import RobotPose


@dataclass(frozen=True)
class SensingParams:
    detect_radius: float = 2.0
    sense_period: float = 1.0
    p_detect: float = 0.9

    def __post_init__(self):
        if not self.detect_radius > 0:
            raise ValueError("detect_radius must be positive")
        if not 0 < self.p_detect <= 1:
            raise ValueError("p_detect must be in (0, 1]")
        if not self.sense_period > 0:
            raise ValueError("sense_period must be positive")


def sense(
    env: EnvironmentMap,
    robot: RobotPose,
    persons: Sequence[PersonState],
    t: float,
    params: SensingParams,
    rng: np.random.Generator,
) -> list[TrackRecord]:
    """Records for persons sharing the robot's location and within ``detect_radius``.

    Each candidate costs one Bernoulli draw; persons behind a wall are
    never candidates.
    """
    here = location_at(env, robot.position)
    rx, ry = robot.position
    r2 = params.detect_radius * params.detect_radius
    out = []
    for p in persons:
        if p.location != here:
            continue
        dx = p.position[0] - rx
        dy = p.position[1] - ry
        if dx * dx + dy * dy > r2:
            continue
        if rng.random() < params.p_detect:
            out.append(TrackRecord(p.person_id, p.location, t, robot.robot_id))
    return out
