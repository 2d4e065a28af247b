import pytest

from swarmtrack.environment import Doorway, EnvironmentMap, Location, LocationKind
from swarmtrack.layouts import build_layout


class ScriptedRng:
    """Stand-in for numpy Generator that replays fixed ``random()`` values."""

    def __init__(self, *values, default=None):
        self.values = list(values)
        self.default = default

    def random(self):
        if self.values:
            return self.values.pop(0)
        if self.default is None:
            raise AssertionError("scripted rng exhausted")
        return self.default


@pytest.fixture
def env1():
    return build_layout("Env1")


@pytest.fixture
def two_rooms():
    """Rooms A=[0,5]x[0,3] and B=[5,9]x[0,3] with a door on x=5, y in [0.5, 1.5]."""
    return EnvironmentMap(
        [
            Location(0, LocationKind.ROOM, (0.0, 0.0, 5.0, 3.0)),
            Location(1, LocationKind.ROOM, (5.0, 0.0, 9.0, 3.0)),
        ],
        [Doorway(0, 1, ((5.0, 0.5), (5.0, 1.5)))],
        name="pair",
    )
