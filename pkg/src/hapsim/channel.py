"""Propagation: free-space loss and the non-terrestrial rural channel.

The large-scale model is elevation-binned: per bin it gives a LOS
probability, lognormal shadow-fading standard deviations for LOS/NLOS,
and a clutter loss applied to NLOS links only.  The table ships as a CSV
(see ``data/ntn_rural_s_band.csv`` for the schema) so other environments
can be swapped in without touching code.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError
from .geometry import LinkGeometry, Point3, link_geometry

__all__ = [
    "C_LIGHT",
    "fspl",
    "NtnTables",
    "LinkLoss",
    "assign_los",
    "draw_shadow",
    "access_path_loss",
    "feeder_loss",
]

log = logging.getLogger(__name__)

C_LIGHT = 299_792_458.0  # m/s

DEFAULT_TABLE_RESOURCE = "ntn_rural_s_band.csv"


def fspl(frequency_hz, distance_m):
    """Free-space path loss in dB: 20*log10(4*pi*d*f/c).

    Accepts scalars or arrays; rejects non-positive inputs, for which the
    formula has no physical meaning.
    """
    f = np.asarray(frequency_hz, dtype=float)
    d = np.asarray(distance_m, dtype=float)
    if np.any(f <= 0) or np.any(d <= 0):
        raise DomainError("fspl requires positive frequency and distance")
    loss = 20.0 * np.log10(4.0 * np.pi * d * f / C_LIGHT)
    if loss.ndim == 0:
        return float(loss)
    return loss


@dataclass(frozen=True)
class NtnTables:
    """Elevation-binned large-scale channel statistics."""

    elevation_deg: np.ndarray
    los_probability: np.ndarray
    shadow_std_los_db: np.ndarray
    shadow_std_nlos_db: np.ndarray
    clutter_loss_nlos_db: np.ndarray

    def __post_init__(self):
        n = len(self.elevation_deg)
        if n == 0:
            raise ConfigError("channel table has no rows")
        for name in ("los_probability", "shadow_std_los_db",
                     "shadow_std_nlos_db", "clutter_loss_nlos_db"):
            if len(getattr(self, name)) != n:
                raise ConfigError(f"channel table column {name} has wrong length")
        if np.any(np.diff(self.elevation_deg) <= 0):
            raise ConfigError("elevation bins must be strictly increasing")
        if np.any((self.los_probability < 0) | (self.los_probability > 1)):
            raise ConfigError("LOS probabilities must lie in [0, 1]")

    @classmethod
    def from_file(cls, path) -> "NtnTables":
        """Parse a table file: comment/header lines then CSV rows."""
        rows = []
        for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.replace(",", " ").split()]
            if parts and not _is_number(parts[0]):
                continue  # column-name header
            if len(parts) != 5:
                raise ConfigError(
                    f"{path}:{line_no}: expected 5 fields, got {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise ConfigError(f"{path}:{line_no}: {exc}") from exc
        if not rows:
            raise ConfigError(f"{path}: no data rows found")
        data = np.array(rows, dtype=float)
        return cls(
            elevation_deg=data[:, 0],
            los_probability=data[:, 1],
            shadow_std_los_db=data[:, 2],
            shadow_std_nlos_db=data[:, 3],
            clutter_loss_nlos_db=data[:, 4],
        )

    @classmethod
    def default(cls) -> "NtnTables":
        """The bundled rural S-band table."""
        ref = resources.files("hapsim.data") / DEFAULT_TABLE_RESOURCE
        with resources.as_file(ref) as path:
            return cls.from_file(path)

    def bin_index(self, elevation_deg: float) -> int:
        """Nearest-bin lookup; clamps (and logs) out-of-range elevations."""
        bins = self.elevation_deg
        spacing = bins[1] - bins[0] if len(bins) > 1 else math.inf
        idx = int(np.argmin(np.abs(bins - elevation_deg)))
        if abs(elevation_deg - bins[idx]) > spacing / 2 + 1e-9:
            log.warning(
                "elevation %.2f deg outside channel table range, clamped to %g deg bin",
                elevation_deg, bins[idx],
            )
        return idx


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


@dataclass(frozen=True)
class LinkLoss:
    """One access link's loss decomposition (all dB)."""

    fspl_db: float
    shadow_db: float
    clutter_db: float
    los: bool

    @property
    def total_db(self) -> float:
        return self.fspl_db + self.shadow_db + self.clutter_db


def assign_los(elevation_deg: float, tables: NtnTables, rng: np.random.Generator) -> bool:
    """Draw the LOS/NLOS state for one terminal at the given elevation."""
    p = tables.los_probability[tables.bin_index(elevation_deg)]
    return bool(rng.random() < p)


def draw_shadow(elevation_deg: float, los: bool, tables: NtnTables,
                rng: np.random.Generator) -> float:
    """Draw a lognormal shadow-fading value (dB) for one terminal."""
    i = tables.bin_index(elevation_deg)
    sigma = tables.shadow_std_los_db[i] if los else tables.shadow_std_nlos_db[i]
    return float(rng.normal(0.0, sigma))


def access_path_loss(carrier_hz: float, geom: LinkGeometry, los: bool,
                     tables: NtnTables, shadow_db: float) -> LinkLoss:
    """Total loss of a ground-to-platform access link.

    Free-space loss over the slant range, plus the caller's shadow draw
    (fixed per terminal for a whole campaign), plus per-bin clutter loss
    when the link is NLOS.
    """
    spreading = fspl(carrier_hz, geom.slant_range_m)
    clutter = 0.0
    if not los:
        clutter = float(tables.clutter_loss_nlos_db[tables.bin_index(geom.elevation_deg)])
    return LinkLoss(fspl_db=spreading, shadow_db=shadow_db, clutter_db=clutter, los=los)


def feeder_loss(gateway: Point3, haps: Point3, carrier_hz: float) -> float:
    """Gateway-to-platform loss (dB): pure free-space over the slant range."""
    geom = link_geometry(gateway, haps)
    return fspl(carrier_hz, geom.slant_range_m)
