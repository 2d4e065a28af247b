import pytest

from conftest import ScriptedRng
from swarmtrack.crowd import PersonState
from swarmtrack.gossip import TrackRecord
from swarmtrack.layouts import build_layout
from swarmtrack.mobility import RobotPose
from swarmtrack.rng import make_rng
from swarmtrack.sensing import SensingParams, sense

CERTAIN = SensingParams(2.0, 1.0, 1.0)


def test_in_range_detection():
    env = build_layout("Env1")
    robot = RobotPose(3, (2.0, 2.0), 0.0)
    person = PersonState(1, 0, (3.5, 2.0))
    assert sense(env, robot, [person], 12.0, CERTAIN, ScriptedRng(0.3)) == [TrackRecord(1, 0, 12.0, 3)]


def test_walls_are_opaque():
    env = build_layout("Env1")
    robot = RobotPose(0, (2.5, 5.5), 0.0)  # corridor
    person = PersonState(1, 0, (2.5, 4.5), 0.0)  # room 0, 1 m away through the wall
    assert sense(env, robot, [person], 5.0, CERTAIN, ScriptedRng()) == []


def test_out_of_range():
    env = build_layout("Env1")
    robot = RobotPose(0, (0.5, 0.5), 0.0)
    person = PersonState(1, 0, (4.5, 4.5), 0.0)
    assert sense(env, robot, [person], 5.0, CERTAIN, ScriptedRng()) == []


def test_bernoulli_frequency():
    env = build_layout("Env1")
    robot = RobotPose(0, (2.0, 2.0), 0.0)
    person = PersonState(1, 0, (3.5, 2.0), 0.0)
    params = SensingParams(2.0, 1.0, 0.9)
    rng = make_rng(99)
    hits = sum(len(sense(env, robot, [person], 1.0, params, rng)) for _ in range(10_000))
    assert hits / 10_000 == pytest.approx(0.9, abs=0.01)


def test_records_carry_true_location_and_time():
    env = build_layout("Env2")
    rng = make_rng(4)
    persons = [PersonState(i, loc.id, loc.centroid, 0.0) for i, loc in enumerate(env.locations)]
    for loc in env.locations:
        robot = RobotPose(7, (loc.centroid[0] + 0.5, loc.centroid[1]), 0.0)
        for rec in sense(env, robot, persons, 33.0, CERTAIN, rng):
            assert rec.timestamp == 33.0 and rec.observer == 7
            assert rec.location == persons[rec.person_id].location == loc.id


@pytest.mark.parametrize("bad", [(0.0, 1.0, 0.5), (2.0, 0.0, 0.5), (2.0, 1.0, 0.0), (2.0, 1.0, 1.1)])
def test_param_invariants(bad):
    with pytest.raises(ValueError):
        SensingParams(*bad)
