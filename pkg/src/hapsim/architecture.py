"""Bent-pipe and regenerative payload link budgets.

A regenerative payload carries the base station: panels transmit at their
own power rating and uplink reception ends at the onboard receiver.  A
bent-pipe payload is an amplify-and-forward repeater: the downlink signal
originates at the ground gateway, crosses the feeder link and leaves the
repeater with its gain applied; the uplink is amplified and forwarded to
the gateway receiver.

Two modelling switches matter for cross-architecture comparisons:

* ``feeder_chain`` - "compensated" treats the repeater gain as sized to
  make up the feeder chain exactly, so the bent pipe radiates the same
  power as the regenerative panels; "explicit" propagates the actual
  per-position feeder loss through the chain (fluctuations of a few
  tenths of a dB over the flight circle plus a fixed offset).
* ``ul_noise`` - "matched" gives the bent-pipe uplink the same receiver
  floor as the onboard base station; "cascade" applies the Friis cascade
  of repeater and gateway receiver instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "THERMAL_NOISE_DENSITY_DBM_HZ",
    "CascadeStage",
    "RepeaterModel",
    "LinkBudget",
    "thermal_noise_dbm",
    "cascade_noise_figure",
    "bp_effective_dl_eirp",
    "repeater_noise_at_ue",
    "bp_uplink_noise_figure",
    "power_sum_dbm",
    "link_budget",
]

THERMAL_NOISE_DENSITY_DBM_HZ = -174.0


@dataclass(frozen=True)
class CascadeStage:
    """One receive-chain stage: net gain and noise figure, both dB."""

    gain_db: float
    noise_figure_db: float


@dataclass(frozen=True)
class RepeaterModel:
    """Amplify-and-forward repeater parameters."""

    gain_db: float = 105.0
    noise_figure_db: float = 7.0
    max_output_dbm: float = 30.0
    output_limit_enabled: bool = False


@dataclass(frozen=True)
class LinkBudget:
    """Resolved budget of one link at one platform position."""

    signal_dbm: float
    interference_dbm: float  # -inf when no co-channel transmitter is active
    noise_dbm: float
    sinr_db: float


def thermal_noise_dbm(bandwidth_hz: float, noise_figure_db: float = 0.0) -> float:
    """Receiver noise floor over a bandwidth: kT density + 10log10(B) + NF."""
    if bandwidth_hz <= 0:
        raise DomainError("bandwidth must be positive")
    return THERMAL_NOISE_DENSITY_DBM_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def cascade_noise_figure(stages: Sequence[CascadeStage]) -> float:
    """Friis noise figure (dB) of stages in signal order.

    Each stage's excess noise is divided by the total gain ahead of it, so
    a high-gain first stage makes everything downstream negligible.
    """
    if not stages:
        raise DomainError("cascade needs at least one stage")
    total = 0.0
    gain_before = 1.0
    for stage in stages:
        factor = 10.0 ** (stage.noise_figure_db / 10.0)
        if factor < 1.0:
            raise DomainError("noise figure below 0 dB is unphysical")
        total += (factor - 1.0) / gain_before
        gain_before *= 10.0 ** (stage.gain_db / 10.0)
    return 10.0 * math.log10(1.0 + total)


def bp_effective_dl_eirp(gateway_tx_dbm: float, gateway_gain_dbi: float,
                         feeder_loss_db: float, repeater: RepeaterModel,
                         panel_gain_dbi: float) -> float:
    """Downlink EIRP of a bent pipe with the feeder chain made explicit.

    Gateway power plus its antenna gain, attenuated over the feeder link,
    amplified by the repeater (optionally clamped to its rated maximum
    output), then radiated through the panel.
    """
    output_dbm = gateway_tx_dbm + gateway_gain_dbi - feeder_loss_db + repeater.gain_db
    if repeater.output_limit_enabled:
        output_dbm = min(output_dbm, repeater.max_output_dbm)
    return output_dbm + panel_gain_dbi


def repeater_noise_at_ue(repeater: RepeaterModel, bandwidth_hz: float,
                         access_loss_db) -> float | np.ndarray:
    """Repeater-amplified noise as received on the ground (dBm).

    Thermal floor over the bandwidth, raised by the repeater gain and
    noise figure, attenuated by the access-link loss.  Stays 15+ dB below
    a handset's own floor for any realistic access loss, which is why the
    default budgets ignore it.
    """
    floor = thermal_noise_dbm(bandwidth_hz)
    out = floor + repeater.gain_db + repeater.noise_figure_db - np.asarray(access_loss_db, dtype=float)
    if out.ndim == 0:
        return float(out)
    return out


def bp_uplink_noise_figure(repeater: RepeaterModel, gateway_noise_figure_db: float) -> float:
    """Uplink noise figure of the bent pipe referred to the repeater input.

    The feeder chain is treated as loss-compensated, so the cascade is the
    repeater followed by the gateway receiver; with 105 dB in front, the
    gateway's contribution vanishes and the repeater figure dominates.
    """
    return cascade_noise_figure([
        CascadeStage(repeater.gain_db, repeater.noise_figure_db),
        CascadeStage(0.0, gateway_noise_figure_db),
    ])


def power_sum_dbm(values_dbm: Iterable[float]) -> float:
    """Sum powers given in dBm; -inf for an empty collection."""
    acc = 0.0
    for v in values_dbm:
        acc += 10.0 ** (v / 10.0)
    if acc == 0.0:
        return -math.inf
    return 10.0 * math.log10(acc)


def link_budget(signal_dbm: float, interference_dbm: float, noise_dbm: float) -> LinkBudget:
    """Combine signal against interference-plus-noise (both in dBm)."""
    denom = 10.0 ** (noise_dbm / 10.0)
    if interference_dbm != -math.inf:
        denom += 10.0 ** (interference_dbm / 10.0)
    sinr = signal_dbm - 10.0 * math.log10(denom)
    return LinkBudget(
        signal_dbm=signal_dbm,
        interference_dbm=interference_dbm,
        noise_dbm=noise_dbm,
        sinr_db=sinr,
    )
