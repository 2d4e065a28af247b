"""Ballistic random walk.

A robot drives straight at constant speed.  When the next step would
bring its body (a disc of AGENT_RADIUS) into contact with a wall it
stops at the contact point and draws a fresh heading uniformly among
the directions that are open for at least one more body radius.
Robots ignore each other and persons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from swarmtrack.environment import AGENT_RADIUS, EnvironmentMap

TWO_PI = 2.0 * math.pi
MAX_HEADING_TRIES = 64
FALLBACK_PROBES = 16
DEFAULT_SPEED = 1.0


@dataclass(frozen=True)
class RobotPose:
    robot_id: int
    position: tuple[float, float]
    heading: float
    speed: float = DEFAULT_SPEED
    # Free travel left along ``heading``; None means not yet measured.
    # Walls never move, so this is the wall distance minus the standoff.
    run_left: float | None = None


def _admissible_heading(env, x, y, rng) -> tuple[float, float]:
    for _ in range(MAX_HEADING_TRIES):
        h = rng.random() * TWO_PI
        # free_distance is measured at the body edge, so > r means the
        # wall is more than 2r from the centre on a head-on line
        free = env.free_distance(x, y, h)
        if free > AGENT_RADIUS:
            return h, free
    probes = [(env.free_distance(x, y, h), h) for h in (k * TWO_PI / FALLBACK_PROBES for k in range(FALLBACK_PROBES))]
    free, h = max(probes)
    return h, free


def resample_heading(
    env: EnvironmentMap, position: tuple[float, float], rng: np.random.Generator
) -> float:
    return _admissible_heading(env, position[0], position[1], rng)[0]


def step_robot(
    env: EnvironmentMap, pose: RobotPose, dt: float, rng: np.random.Generator
) -> RobotPose:
    stride = pose.speed * dt
    x, y = pose.position
    heading = pose.heading
    run_left = pose.run_left
    if run_left is None:
        run_left = env.free_distance(x, y, heading)
    c, s = math.cos(heading), math.sin(heading)
    if run_left > stride:
        return RobotPose(
            pose.robot_id, (x + stride * c, y + stride * s), heading, pose.speed, run_left - stride
        )
    x += run_left * c
    y += run_left * s
    heading, free = _admissible_heading(env, x, y, rng)
    return RobotPose(pose.robot_id, (x, y), heading, pose.speed, free)
