"""Desk-scale swarm simulator for collective people tracking.

Robots random-walk an office layout, detect persons moving between
rooms, and share timestamped sightings with peers in radio range using
a last-writer-wins merge. Metrics report how quickly room-entry events
are detected and spread through the swarm.
"""

from swarmtrack.environment import (
    AGENT_RADIUS,
    Doorway,
    EnvironmentMap,
    Location,
    LocationKind,
    adjacency,
    location_at,
    raycast_wall,
    sample_free_point,
)
from swarmtrack.errors import ConfigError, LayoutError
from swarmtrack.gossip import (
    CommParams,
    TrackRecord,
    exchange,
    merge_record,
    merge_stores,
    record_order,
)
from swarmtrack.layouts import BUILTIN_LAYOUTS, build_layout, load_layout

__version__ = "0.1.0"

__all__ = [
    "AGENT_RADIUS",
    "BUILTIN_LAYOUTS",
    "CommParams",
    "ConfigError",
    "Doorway",
    "EnvironmentMap",
    "LayoutError",
    "Location",
    "LocationKind",
    "TrackRecord",
    "adjacency",
    "build_layout",
    "exchange",
    "load_layout",
    "location_at",
    "merge_record",
    "merge_stores",
    "raycast_wall",
    "record_order",
    "sample_free_point",
]
