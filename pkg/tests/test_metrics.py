import pytest
from hypothesis import given, strategies as st

from scripted import B, EXPECTED, scripted_log
from swarmtrack.crowd import Transition
from swarmtrack.engine import Observation, RunLog
from swarmtrack.gossip import TrackRecord
from swarmtrack.metrics import (
    Ecdf,
    Event,
    MetricsReport,
    aggregate,
    detection_delay,
    ecdf,
    evaluate_log,
    extract_events,
    propagation_delay,
    threshold_count,
)


def bare_log(transitions, kinds=None, n_robots=3, duration=600.0):
    return RunLog(
        config={}, seed=0, n_robots=n_robots, duration=duration,
        location_kinds=kinds or {0: "room", 1: "room", 2: "corridor"},
        initial_locations={0: 0}, transitions=list(transitions),
    )


class TestEvents:
    def test_corridor_entry_is_not_an_event(self):
        log = bare_log([Transition(0, 0, 2, 50.0)])
        assert extract_events(log) == []

    def test_room_entry(self):
        log = bare_log([Transition(0, 2, 1, 90.0)])
        assert extract_events(log) == [Event(90.0, 0, 1)]

    def test_tail_excluded(self):
        log = bare_log([Transition(0, 2, 1, 450.0), Transition(0, 1, 0, 420.0)])
        assert extract_events(log) == [Event(420.0, 0, 0)]


class TestDelays:
    def test_subtraction(self):
        log = bare_log([Transition(0, 2, 1, 100.0)])
        log.observations = [Observation(1, TrackRecord(0, 1, 130.0, 1))]
        assert detection_delay(Event(100.0, 0, 1), log) == 30.0

    def test_occupancy_window(self):
        log = bare_log([Transition(0, 2, 1, 100.0), Transition(0, 1, 2, 160.0), Transition(0, 2, 1, 280.0)])
        log.observations = [Observation(1, TrackRecord(0, 1, 300.0, 1))]
        assert detection_delay(Event(100.0, 0, 1), log) is None
        assert detection_delay(Event(280.0, 0, 1), log) == 20.0

    def test_undetected(self):
        log = bare_log([Transition(0, 2, 1, 100.0)])
        assert detection_delay(Event(100.0, 0, 1), log) is None

    def test_thresholds(self):
        assert threshold_count(0.25, 12) == 3
        assert threshold_count(0.5, 12) == 6
        assert threshold_count(0.75, 12) == 9
        assert threshold_count(0.25, 4) == 1
        assert threshold_count(0.75, 4) == 3

    def test_bad_fraction(self):
        with pytest.raises(ValueError):
            propagation_delay(Event(100.0, 0, 1), scripted_log(), 0.3)

    def test_never_reached_is_censored(self):
        log = scripted_log()
        log.n_robots = 8  # 75 % of 8 needs 6 robots; only 3 exist
        assert propagation_delay(Event(100.0, 0, B), log, 0.75) is None

    def test_scripted_oracle(self):
        log = scripted_log()
        outcomes = evaluate_log(log)
        got = {
            (o.event.t_enter, o.event.room): (o.detect_delay, o.prop_delay_25, o.prop_delay_50, o.prop_delay_75)
            for o in outcomes
        }
        assert got == EXPECTED

    def test_orderings_hold(self):
        for o in evaluate_log(scripted_log()):
            assert o.detect_delay <= o.prop_delay_25 <= o.prop_delay_50 <= o.prop_delay_75


class TestEcdf:
    def test_counting(self):
        c = ecdf([10.0, 20.0, 30.0, None])
        assert c(20.0) == 0.5 and c(5.0) == 0.0 and c.plateau == 0.75

    def test_all_censored(self):
        c = ecdf([None, None])
        assert c.steps == () and c.plateau == 0.0 and c(1e9) == 0.0

    def test_duplicates(self):
        assert ecdf([10.0, 10.0]).steps == ((10.0, 1.0),)

    def test_empty(self):
        with pytest.raises(ValueError):
            ecdf([])

    @given(st.lists(st.one_of(st.none(), st.floats(0, 600)), min_size=1, max_size=40))
    def test_monotone_bounded(self, delays):
        c = ecdf(delays)
        fracs = [f for _, f in c.steps]
        assert fracs == sorted(fracs)
        assert all(0 <= f <= 1 for f in fracs)
        assert c.plateau == pytest.approx(sum(d is not None for d in delays) / len(delays))
        if c.steps:
            assert c.steps[-1][1] == pytest.approx(c.plateau)

    def test_round_trip(self):
        c = ecdf([1.5, None, 3.0])
        assert Ecdf.from_dict(c.to_dict()) == c


class TestAggregate:
    def test_single_log_matches_direct(self):
        rep = aggregate([scripted_log()])
        s = rep[3]
        assert s.n_events == 2 and s.rates["detect"] == 1.0
        assert s.curves["detect"].steps == ((30.0, 0.5), (50.0, 1.0))
        assert s.median_delay["prop75"] == 65.0

    def test_pooled_denominator(self):
        def log_with(n_events):
            trs = [Transition(0, 2, 1 - k % 2, 20.0 * (k + 1)) for k in range(n_events)]
            return bare_log(trs)

        rep = aggregate([log_with(3), log_with(5)])
        assert rep[3].n_events == 8 and rep[3].curves["detect"].total == 8
        assert rep[3].rates["detect"] == 0.0

    def test_mixed_sizes_rejected(self):
        other = scripted_log()
        other.n_robots = 4
        with pytest.raises(ValueError, match="mix"):
            aggregate([scripted_log(), other])

    def test_report_round_trip(self):
        rep = aggregate([scripted_log()])
        again = MetricsReport.from_dict(rep.to_dict())
        assert again.to_dict() == rep.to_dict()
