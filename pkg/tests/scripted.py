"""Hand-built 3-robot, 1-person, 2-room run log with known outcomes.

Person 0 starts in room A (id 0).  Moves: A->B at 100, B->A at 300,
A->B at 500 (past the 420 s cutoff).

Sightings: r2 sees A@90 (old stay), r0 sees B@130, r1 sees B@140,
r2 sees A@350, r0 sees B@520 (later stay).

Beliefs (held from the given time on):
    r0: (B,130) from 130, (A,350) from 360
    r1: (B,140) from 140, (A,350) from 370
    r2: (A,90) from 90,  (B,140) from 160, (A,350) from 350

Expected, thresholds 1/2/3 robots for 25/50/75 %:
    B@100: detect 30, reach 30 / 40 / 60
    A@300: detect 50, reach 50 / 60 / 70
"""

from swarmtrack.crowd import Transition
from swarmtrack.engine import BeliefRow, Observation, RunLog
from swarmtrack.gossip import TrackRecord

A, B = 0, 1

EXPECTED = {
    (100.0, B): (30.0, 30.0, 40.0, 60.0),
    (300.0, A): (50.0, 50.0, 60.0, 70.0),
}

_BELIEFS = {
    0: [(130, (B, 130.0, 0)), (360, (A, 350.0, 2))],
    1: [(140, (B, 140.0, 1)), (370, (A, 350.0, 2))],
    2: [(90, (A, 90.0, 2)), (160, (B, 140.0, 1)), (350, (A, 350.0, 2))],
}


def _belief(robot, t):
    held = None
    for start, rec in _BELIEFS[robot]:
        if t >= start:
            held = rec
    return held


def scripted_log() -> RunLog:
    log = RunLog(
        config={"layout": "scripted"},
        seed=0,
        n_robots=3,
        duration=600.0,
        location_kinds={A: "room", B: "room"},
        initial_locations={0: A},
    )
    log.transitions = [
        Transition(0, A, B, 100.0),
        Transition(0, B, A, 300.0),
        Transition(0, A, B, 500.0),
    ]
    for robot, t, loc in [(2, 90.0, A), (0, 130.0, B), (1, 140.0, B), (2, 350.0, A), (0, 520.0, B)]:
        log.observations.append(Observation(robot, TrackRecord(0, loc, t, robot)))
    for t in range(1, 601):
        for robot in range(3):
            held = _belief(robot, t)
            if held is not None:
                loc, ts, obs = held
                log.belief_rows.append(BeliefRow(float(t), robot, 0, loc, ts, obs))
    return log
