"""Positions and link geometry in a local flat-earth frame.

All coordinates are metres in an east/north/up frame whose origin sits on
the ground below the centre of the platform's flight circle.  Earth
curvature is ignored; at the scales involved (tens of km horizontally,
20 km up) the error stays far below the channel-model granularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateGeometryError

__all__ = [
    "Point3",
    "FlightPattern",
    "LinkGeometry",
    "haps_position",
    "link_geometry",
]


@dataclass(frozen=True)
class Point3:
    """A point in the local frame.  z is height above ground, never negative."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.z < 0:
            raise ConfigError(f"point below ground: z={self.z}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class FlightPattern:
    """Circular station-keeping pattern sampled at fixed azimuth steps.

    ``speed_kmh`` is descriptive metadata only: the simulator evaluates a
    frozen snapshot per position, so the platform speed never enters any
    computation.
    """

    center: Point3 = field(default_factory=lambda: Point3(0.0, 0.0, 20_000.0))
    diameter_m: float = 6_000.0
    position_count: int = 12
    angular_step_deg: float = 30.0
    speed_kmh: float = 110.0

    def __post_init__(self):
        if self.diameter_m <= 0:
            raise ConfigError("flight circle diameter must be positive")
        if self.position_count <= 0:
            raise ConfigError("position_count must be positive")
        if not math.isclose(self.position_count * self.angular_step_deg, 360.0):
            raise ConfigError(
                "position_count * angular_step_deg must cover exactly one revolution, "
                f"got {self.position_count} * {self.angular_step_deg}"
            )

    @property
    def radius_m(self) -> float:
        return self.diameter_m / 2.0

    @property
    def altitude_m(self) -> float:
        return self.center.z


@dataclass(frozen=True)
class LinkGeometry:
    """Geometry of the ray from one point towards another."""

    elevation_deg: float
    azimuth_deg: float
    slant_range_m: float


def haps_position(pattern: FlightPattern, run_index: int) -> Point3:
    """Platform position for one simulation run.

    Run ``k`` sits at azimuth ``k * angular_step_deg`` measured from the
    +x axis, on the circle of ``pattern``.
    """
    if not 0 <= run_index < pattern.position_count:
        raise ConfigError(
            f"run_index {run_index} outside [0, {pattern.position_count})"
        )
    angle = math.radians(run_index * pattern.angular_step_deg)
    return Point3(
        pattern.center.x + pattern.radius_m * math.cos(angle),
        pattern.center.y + pattern.radius_m * math.sin(angle),
        pattern.center.z,
    )


def link_geometry(a: Point3, b: Point3) -> LinkGeometry:
    """Elevation, azimuth and slant range of the ray a -> b.

    Elevation is measured from a's local horizontal plane (positive when b
    is above it), azimuth clockwise-free in [0, 360) from the +x axis.
    """
    dx = b.x - a.x
    dy = b.y - a.y
    dz = b.z - a.z
    horizontal = math.hypot(dx, dy)
    slant = math.sqrt(dx * dx + dy * dy + dz * dz)
    if slant == 0.0:
        raise DegenerateGeometryError("link endpoints coincide")
    elevation = math.degrees(math.atan2(dz, horizontal))
    azimuth = math.degrees(math.atan2(dy, dx)) % 360.0
    return LinkGeometry(elevation, azimuth, slant)
