"""Person automatons hopping between adjacent locations.

At every check boundary a person leaves its location with a probability
that depends on the location kind, moving to a uniformly chosen
neighbour.  Dwell time is therefore geometric in the number of checks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from swarmtrack.environment import EnvironmentMap, LocationKind, sample_free_point


@dataclass(frozen=True)
class CrowdParams:
    check_interval: float = 20.0
    p_leave_room: float = 0.1
    p_leave_corridor: float = 0.9

    def __post_init__(self):
        if not self.check_interval > 0:
            raise ValueError("check_interval must be positive")
        if not 0 < self.p_leave_room < self.p_leave_corridor <= 1:
            raise ValueError("need 0 < p_leave_room < p_leave_corridor <= 1")

    def p_leave(self, kind: LocationKind) -> float:
        return self.p_leave_room if kind is LocationKind.ROOM else self.p_leave_corridor


@dataclass(frozen=True)
class PersonState:
    person_id: int
    location: int
    position: tuple[float, float]
    entered_at: float = 0.0


class Transition(NamedTuple):
    person_id: int
    from_location: int
    to_location: int
    time: float


def expected_dwell(kind: LocationKind, params: CrowdParams) -> float:
    """Mean stay in seconds: ``check_interval / p_leave``."""
    return params.check_interval / params.p_leave(kind)


def step_person(
    env: EnvironmentMap,
    person: PersonState,
    t: float,
    params: CrowdParams,
    rng: np.random.Generator,
) -> tuple[PersonState, Transition | None]:
    here = env.location(person.location)
    # always consume exactly one draw for the leave decision
    if rng.random() >= params.p_leave(here.kind):
        return person, None
    options = sorted(env.neighbors(person.location))
    if not options:
        return person, None
    dest = options[min(int(rng.random() * len(options)), len(options) - 1)]
    moved = replace(
        person,
        location=dest,
        position=sample_free_point(env, rng, dest),
        entered_at=t,
    )
    return moved, Transition(person.person_id, person.location, dest, t)
