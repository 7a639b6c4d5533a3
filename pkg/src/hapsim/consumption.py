"""Power-efficiency comparison of relayed versus direct transmission.

The power-efficiency factor of a transmit chain is the fraction of total
consumed power that leaves the antenna as signal.  Writing the chain
source-to-antenna as stages with linear gain ``G_i`` and drain efficiency
``eta_i``, every stage's wasted power is referred to the chain input by
the gain accumulated ahead of it:

    H = 1 / (1 + sum_k (1/eta_k - 1) / prod_{i<k} G_i)

A relay beats direct transmission, for equal delivered rate in the
noise-limited far-field regime, when

    (d1/d3)^2 / (Grx_relay/Grx_sink) + (d2/d3)^2 / (H_relay/H_source) < 1

with d1 the source-relay distance, d2 the relay-sink distance and d3 the
direct source-sink distance.  For a stratospheric platform the relay
candidate is the onboard repeater: d2 equals the access slant range, and
in the comparison against an onboard base station the direct path is that
same access link, so d3 = d2 and the feeder/access ratio d1/d3 drives the
first term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .geometry import Point3, link_geometry

__all__ = [
    "EfficiencyStage",
    "RelayScenario",
    "RelayAdvantage",
    "AssessmentRow",
    "power_efficiency_factor",
    "repeater_chain_efficiency",
    "base_station_chain_efficiency",
    "relay_advantage",
    "haps_relay_assessment",
]


@dataclass(frozen=True)
class EfficiencyStage:
    """One active stage: linear power gain and drain efficiency."""

    gain: float
    efficiency: float

    def __post_init__(self):
        if self.gain <= 0:
            raise DomainError(f"stage gain must be positive, got {self.gain}")
        if not 0 < self.efficiency <= 1:
            raise DomainError(
                f"stage efficiency must lie in (0, 1], got {self.efficiency}"
            )


def power_efficiency_factor(stages: Sequence[EfficiencyStage]) -> float:
    """Power-efficiency factor H of a chain ordered source to antenna.

    Lossless passive elements (efficiency 1) drop out; an empty chain is
    a bare antenna with H = 1.
    """
    waste = 0.0
    gain_before = 1.0
    for stage in stages:
        waste += (1.0 / stage.efficiency - 1.0) / gain_before
        gain_before *= stage.gain
    return 1.0 / (1.0 + waste)


def repeater_chain_efficiency(mixer: EfficiencyStage, rf_amp: EfficiencyStage) -> float:
    """H of a repeater transmit chain (mixer then RF amplifier).

    Closed form of :func:`power_efficiency_factor` for the two-stage
    chain; the antennas on both ends are passive and contribute nothing.
    """
    waste = (1.0 / mixer.efficiency - 1.0) + (1.0 / rf_amp.efficiency - 1.0) / mixer.gain
    return 1.0 / (1.0 + waste)


def base_station_chain_efficiency(baseband_amp: EfficiencyStage,
                                  mixer: EfficiencyStage,
                                  rf_amp: EfficiencyStage) -> float:
    """H of a base-station transmit chain (baseband amp, mixer, RF amp)."""
    waste = (
        (1.0 / baseband_amp.efficiency - 1.0)
        + (1.0 / mixer.efficiency - 1.0) / baseband_amp.gain
        + (1.0 / rf_amp.efficiency - 1.0) / (baseband_amp.gain * mixer.gain)
    )
    return 1.0 / (1.0 + waste)


@dataclass(frozen=True)
class RelayScenario:
    """Inputs of one relay-versus-direct comparison (gains linear)."""

    d1_m: float
    d2_m: float
    d3_m: float
    relay_rx_gain: float
    sink_rx_gain: float
    relay_efficiency: float
    source_efficiency: float

    def __post_init__(self):
        if self.d1_m < 0 or self.d2_m < 0:
            raise DomainError("relay path distances must be non-negative")
        if self.d3_m <= 0:
            raise DomainError("direct-path distance must be positive")
        if self.relay_rx_gain <= 0 or self.sink_rx_gain <= 0:
            raise DomainError("receive gains must be positive")
        if not 0 < self.relay_efficiency <= 1 or not 0 < self.source_efficiency <= 1:
            raise DomainError("efficiency factors must lie in (0, 1]")


@dataclass(frozen=True)
class RelayAdvantage:
    """Outcome of the comparison; the relay wins when rhs < 1."""

    rhs: float
    relay_preferred: bool
    margin: float


def relay_advantage(scenario: RelayScenario) -> RelayAdvantage:
    """Evaluate the relay-advantage inequality for one scenario."""
    s = scenario
    rhs = (
        (s.d1_m / s.d3_m) ** 2 / (s.relay_rx_gain / s.sink_rx_gain)
        + (s.d2_m / s.d3_m) ** 2 / (s.relay_efficiency / s.source_efficiency)
    )
    return RelayAdvantage(rhs=rhs, relay_preferred=rhs < 1.0, margin=1.0 - rhs)


@dataclass(frozen=True)
class AssessmentRow:
    """Per-terminal relay assessment over the deployed geometry."""

    terminal_id: int
    d1_m: float
    d2_m: float
    d3_m: float
    rhs: float
    relay_preferred: bool
    margin: float
    feeder_access_ratio_sq: float


def haps_relay_assessment(terminal_positions: Sequence[Point3], platform: Point3,
                          gateway: Point3, relay_rx_gain_db: float,
                          sink_rx_gain_db: float, relay_efficiency: float,
                          source_efficiency: float) -> list[AssessmentRow]:
    """Relay-versus-direct verdict for every terminal of a deployment.

    The platform is the relay: d1 is the gateway feeder slant, and the
    access slant serves as both relay-sink and direct distance, the
    onboard base station being the direct-transmission alternative.
    """
    d1 = link_geometry(gateway, platform).slant_range_m
    g_relay = 10.0 ** (relay_rx_gain_db / 10.0)
    g_sink = 10.0 ** (sink_rx_gain_db / 10.0)
    rows = []
    for tid, pos in enumerate(terminal_positions):
        d_access = link_geometry(platform, pos).slant_range_m
        verdict = relay_advantage(RelayScenario(
            d1_m=d1,
            d2_m=d_access,
            d3_m=d_access,
            relay_rx_gain=g_relay,
            sink_rx_gain=g_sink,
            relay_efficiency=relay_efficiency,
            source_efficiency=source_efficiency,
        ))
        rows.append(AssessmentRow(
            terminal_id=tid,
            d1_m=d1,
            d2_m=d_access,
            d3_m=d_access,
            rhs=verdict.rhs,
            relay_preferred=verdict.relay_preferred,
            margin=verdict.margin,
            feeder_access_ratio_sq=(d1 / d_access) ** 2,
        ))
    return rows
