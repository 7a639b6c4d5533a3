"""Monte Carlo campaign: terminal drops, scheduling and spectral efficiency.

A campaign freezes one terminal drop (positions, LOS states, shadow
draws) and replays it against every platform position of the flight
circle.  Each position is one scheduling interval: every terminal
receives one downlink packet over its equal share of the cell bandwidth
and transmits one uplink packet over its fixed allocation.  User
spectral efficiency is total bits over total time-bandwidth product, so
positions with a larger bandwidth share weigh proportionally more.

Determinism: all randomness flows from one seeded generator consumed in
a fixed order (terminal radii, angles, LOS assignment, shadow fading)
before any link evaluation starts, so identical seeds give bit-identical
results for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import antenna, architecture, channel
from .antenna import ElementPattern, Panel
from .config import ScenarioConfig
from .errors import ConfigError, DomainError, OutOfCoverageError, SchedulingError
from .geometry import FlightPattern, Point3, haps_position, link_geometry

__all__ = [
    "LinkAbstraction",
    "PacketRecord",
    "AggregateStats",
    "Terminal",
    "Beam",
    "CampaignReport",
    "CampaignResult",
    "sinr_to_se",
    "user_se",
    "aggregate_se",
    "cell_centers",
    "drop_terminals",
    "build_drop",
    "build_beams",
    "attach",
    "ul_slot_assignments",
    "run_campaign",
]


# ----------------------------------------------------------------------
# Link abstraction

@dataclass(frozen=True)
class LinkAbstraction:
    """Truncated, attenuated Shannon mapping from SINR to bit/s/Hz."""

    attenuation: float = 0.6
    sinr_min_db: float = -10.0
    se_max: float = 4.4


def sinr_to_se(sinr_db, abstraction: LinkAbstraction = LinkAbstraction()):
    """Spectral efficiency for a SINR: zero below the floor, capped above.

    Vectorized; scalars in, scalar out.
    """
    sinr = np.asarray(sinr_db, dtype=float)
    linear = 10.0 ** (sinr / 10.0)
    se = np.minimum(abstraction.attenuation * np.log2(1.0 + linear), abstraction.se_max)
    se = np.where(sinr < abstraction.sinr_min_db, 0.0, se)
    if se.ndim == 0:
        return float(se)
    return se


# ----------------------------------------------------------------------
# Packets and aggregation

@dataclass(frozen=True)
class PacketRecord:
    """One delivered packet: information bits over a time-bandwidth slice."""

    bits: float
    duration_s: float
    bandwidth_hz: float


def user_se(packets: Sequence[PacketRecord]) -> float:
    """Per-user spectral efficiency: total bits over total time-bandwidth.

    An empty stream (never scheduled, or all packets empty) is 0 bit/s/Hz,
    which downstream aggregation counts as outage.
    """
    bits = sum(p.bits for p in packets)
    tb = sum(p.duration_s * p.bandwidth_hz for p in packets)
    if tb == 0.0:
        return 0.0
    return bits / tb


@dataclass(frozen=True)
class AggregateStats:
    """Campaign statistics over one link direction."""

    mean_se: float
    cell_edge_se: float
    outage_count: int
    edge_user_count: int
    n_users: int


def aggregate_se(per_user_se) -> AggregateStats:
    """Mean and cell-edge SE of a user population.

    Cell edge is the mean of the lowest ``ceil(0.05 * n)`` users; outage
    users contribute zero to both statistics rather than being dropped.
    """
    values = np.asarray(per_user_se, dtype=float)
    if values.size == 0:
        raise DomainError("cannot aggregate an empty user set")
    edge_n = math.ceil(0.05 * values.size)
    ordered = np.sort(values)
    return AggregateStats(
        mean_se=float(values.mean()),
        cell_edge_se=float(ordered[:edge_n].mean()),
        outage_count=int(np.count_nonzero(values == 0.0)),
        edge_user_count=edge_n,
        n_users=int(values.size),
    )


# ----------------------------------------------------------------------
# Layout and terminal drop

@dataclass(frozen=True)
class Terminal:
    """One dropped terminal with its frozen channel state."""

    terminal_id: int
    x: float
    y: float
    kind: str
    los: bool
    shadow_db: float

    @property
    def position(self) -> Point3:
        return Point3(self.x, self.y, 0.0)


def cell_centers(layout: str, service_radius_m: float,
                 outer_fraction: float = 0.44,
                 azimuth_offset_deg: float = 0.0) -> np.ndarray:
    """Ground cell centres as an (n, 2) array.

    The single layout has one cell at the origin.  The seven-cell layout
    adds six outer centres at ``outer_fraction`` of the service radius,
    60 degrees apart, aligned with the side-panel azimuths.
    """
    if layout == "single":
        return np.zeros((1, 2))
    if layout != "seven_cell":
        raise ConfigError(f"unknown layout {layout!r}")
    d = outer_fraction * service_radius_m
    az = np.radians(azimuth_offset_deg + 60.0 * np.arange(6))
    outer = np.column_stack([d * np.cos(az), d * np.sin(az)])
    return np.vstack([np.zeros((1, 2)), outer])


_MAX_LOS_ATTEMPTS = 100_000


def drop_terminals(n: int, service_radius_m: float, kind: str,
                   tables: channel.NtnTables, rng: np.random.Generator,
                   platform_center: Point3,
                   target_los: int | None = None) -> list[Terminal]:
    """Drop ``n`` terminals uniformly over the service disc.

    LOS states are Bernoulli draws from the elevation-binned probability,
    evaluated towards the flight-circle centre.  With ``target_los`` set,
    the whole assignment vector is redrawn until exactly that many
    terminals are LOS, which reproduces drops reported with fixed splits.
    Shadow fading is drawn once per terminal and reused at every platform
    position, matching a terminal that never moves.
    """
    if n <= 0:
        raise ConfigError("terminal count must be positive")
    if target_los is not None and not 0 <= target_los <= n:
        raise ConfigError(f"target LOS count {target_los} outside [0, {n}]")
    radius = service_radius_m * np.sqrt(rng.random(n))
    theta = rng.random(n) * 2.0 * np.pi
    xs = radius * np.cos(theta)
    ys = radius * np.sin(theta)

    elev = np.degrees(np.arctan2(
        platform_center.z,
        np.hypot(platform_center.x - xs, platform_center.y - ys),
    ))
    bins = np.array([tables.bin_index(e) for e in elev])
    p_los = tables.los_probability[bins]

    if target_los is None:
        los = rng.random(n) < p_los
    else:
        for _ in range(_MAX_LOS_ATTEMPTS):
            los = rng.random(n) < p_los
            if int(los.sum()) == target_los:
                break
        else:
            raise ConfigError(
                f"could not hit LOS target {target_los}/{n}; "
                "check the target against the elevation profile"
            )

    sigma = np.where(los, tables.shadow_std_los_db[bins], tables.shadow_std_nlos_db[bins])
    shadow = rng.normal(0.0, sigma)

    return [
        Terminal(
            terminal_id=i,
            x=float(xs[i]),
            y=float(ys[i]),
            kind=kind,
            los=bool(los[i]),
            shadow_db=float(shadow[i]),
        )
        for i in range(n)
    ]


def _load_tables(config: ScenarioConfig) -> channel.NtnTables:
    path = config.resolved_table_path()
    if path is None:
        return channel.NtnTables.default()
    return channel.NtnTables.from_file(path)


def build_drop(config: ScenarioConfig) -> tuple[list[Terminal], channel.NtnTables]:
    """The campaign drop implied by a configuration (seed included)."""
    config.validate()
    tables = _load_tables(config)
    rng = np.random.default_rng(config.seed)
    center = Point3(0.0, 0.0, config.altitude_m)
    terminals = drop_terminals(
        config.resolved_terminal_count(),
        config.resolved_cell_radius_m(),
        config.terminal_kind,
        tables,
        rng,
        center,
        config.resolved_target_los_count(),
    )
    return terminals, tables


# ----------------------------------------------------------------------
# Beams and attachment

@dataclass(frozen=True)
class Beam:
    """A panel bound to the ground cell it serves."""

    index: int
    panel: Panel
    cell_center: Point3


def build_beams(config: ScenarioConfig) -> list[Beam]:
    """Platform antenna set: one fixed antenna, or the hexagonal array."""
    centers = cell_centers(
        config.layout,
        config.resolved_cell_radius_m(),
        config.outer_cell_center_fraction,
        config.side_panel_azimuth_offset_deg,
    )
    if config.layout == "single":
        pattern = ElementPattern(
            peak_gain_dbi=config.single_antenna_gain_dbi,
            hpbw_az_deg=config.single_antenna_hpbw_deg,
            hpbw_el_deg=config.single_antenna_hpbw_deg,
            front_to_back_db=config.single_antenna_front_to_back_db,
        )
        panels = [antenna.single_element_panel(pattern)]
    else:
        element = ElementPattern(
            peak_gain_dbi=config.array_element_gain_dbi,
            hpbw_az_deg=config.array_element_hpbw_deg,
            hpbw_el_deg=config.array_element_hpbw_deg,
            front_to_back_db=config.array_element_front_to_back_db,
        )
        panels = antenna.hex_array(
            element,
            bottom_rows=config.bottom_panel_rows,
            bottom_cols=config.bottom_panel_cols,
            side_rows=config.side_panel_rows,
            side_cols=config.side_panel_cols,
            polarizations=config.panel_polarizations,
            spacing_wl=config.element_spacing_wl,
            side_tilt_deg=config.side_panel_tilt_deg,
            azimuth_offset_deg=config.side_panel_azimuth_offset_deg,
        )
    return [
        Beam(index=i, panel=panel, cell_center=Point3(centers[i, 0], centers[i, 1], 0.0))
        for i, panel in enumerate(panels)
    ]


def nominal_cells(terminals: Sequence[Terminal], beams: Sequence[Beam]) -> np.ndarray:
    """Fixed cell of each terminal: the nearest cell centre on the ground."""
    centers = np.array([[b.cell_center.x, b.cell_center.y] for b in beams])
    xy = np.array([[t.x, t.y] for t in terminals])
    d2 = ((xy[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def attach(terminal: Terminal, beams: Sequence[Beam], haps: Point3,
           mode: str, service_radius_m: float,
           tx_power_dbm: float = 0.0, access_loss_db: float = 0.0) -> int:
    """Serving beam of one terminal at one platform position.

    Beam steering serves the fixed cell containing the terminal; beam
    selection picks the broadside beam with the strongest reference power.
    A terminal outside the service disc is not served at all.
    """
    if math.hypot(terminal.x, terminal.y) > service_radius_m:
        raise OutOfCoverageError(
            f"terminal {terminal.terminal_id} lies outside the service area"
        )
    if mode == "beam_steering":
        return int(nominal_cells([terminal], beams)[0])
    if mode != "beam_selection":
        raise ConfigError(f"unknown attachment mode {mode!r}")
    direction = terminal.position.as_array() - haps.as_array()
    rsrp = [
        tx_power_dbm - access_loss_db
        + antenna.array_gain(b.panel, antenna.broadside_weights(b.panel), direction)
        for b in beams
    ]
    return int(np.argmax(rsrp))


def ul_slot_assignments(serving: np.ndarray, n_blocks: int,
                        offset: int = 0) -> list[tuple[int, int]]:
    """Round-robin uplink slots: rank within the cell, in terminal-id order.

    Returns one ``(tti, block)`` pair per terminal.  Terminals in
    different cells sharing a pair transmit simultaneously on the same
    block and interfere; within a cell ranks are unique, so intra-cell
    collisions cannot happen.

    ``offset`` is the round-robin pointer state: each cell's pointer
    advances at its own rate (cell index + 1 steps per scheduling
    interval), so equally loaded cells do not cycle in lockstep and no
    cross-cell collision pair persists across intervals.
    """
    if n_blocks <= 0:
        raise SchedulingError("uplink needs at least one block")
    slots: list[tuple[int, int]] = [(-1, -1)] * len(serving)
    for b in np.unique(serving):
        members = np.flatnonzero(serving == b)
        for rank, n in enumerate(members):
            slot = (rank + offset * (int(b) + 1)) % len(members)
            slots[n] = (slot // n_blocks, slot % n_blocks)
    return slots


# ----------------------------------------------------------------------
# Campaign

@dataclass(frozen=True)
class CampaignReport:
    """Aggregate statistics of one campaign."""

    dl: AggregateStats
    ul: AggregateStats
    n_terminals: int
    n_los: int


@dataclass
class CampaignResult:
    """Everything a campaign produces, per terminal and aggregated."""

    config: ScenarioConfig
    terminals: list[Terminal]
    dl_se: np.ndarray
    ul_se: np.ndarray
    serving_cell: np.ndarray  # modal serving beam over the flight circle
    report: CampaignReport

    def user_rows(self) -> list[dict]:
        """Per-user records in terminal-id order (the CSV payload)."""
        rows = []
        for t in self.terminals:
            dl = float(self.dl_se[t.terminal_id])
            ul = float(self.ul_se[t.terminal_id])
            rows.append({
                "terminal_id": t.terminal_id,
                "x": t.x,
                "y": t.y,
                "kind": t.kind,
                "los": t.los,
                "serving_cell": int(self.serving_cell[t.terminal_id]),
                "dl_se": dl,
                "ul_se": ul,
                "outage": dl == 0.0 or ul == 0.0,
            })
        return rows


@dataclass
class _PositionOutcome:
    serving: np.ndarray
    dl_bits: np.ndarray
    dl_tb: np.ndarray
    ul_bits: np.ndarray
    ul_tb: np.ndarray


def _position_outcome(k: int, cfg: ScenarioConfig, pattern: FlightPattern,
                      beams: Sequence[Beam], fixed_cells: np.ndarray,
                      xy: np.ndarray, los: np.ndarray, shadow: np.ndarray,
                      cpe: ElementPattern | None, tables: channel.NtnTables,
                      repeater: architecture.RepeaterModel,
                      gateway: Point3) -> _PositionOutcome:
    """Evaluate one platform position (pure: no RNG, no shared mutation)."""
    n = xy.shape[0]
    haps = haps_position(pattern, k)
    hpos = haps.as_array()

    dirs = np.column_stack([xy[:, 0] - hpos[0], xy[:, 1] - hpos[1], np.full(n, -hpos[2])])
    horiz = np.hypot(dirs[:, 0], dirs[:, 1])
    slant = np.sqrt(horiz ** 2 + hpos[2] ** 2)
    elev = np.degrees(np.arctan2(hpos[2], horiz))

    bins = np.argmin(np.abs(elev[:, None] - tables.elevation_deg[None, :]), axis=1)
    clutter = np.where(los, 0.0, tables.clutter_loss_nlos_db[bins])
    loss_dl = channel.fspl(cfg.dl_carrier_hz, slant) + shadow + clutter
    loss_ul = channel.fspl(cfg.ul_carrier_hz, slant) + shadow + clutter

    # Terminal antenna gain towards the platform (identical both directions:
    # omnis are flat, rooftop antennas are azimuth-aligned with the link).
    if cpe is None:
        term_gain = np.zeros(n)
    else:
        term_gain = antenna.element_gain(cpe, np.zeros(n), elev)

    # Per-beam weights and gains towards every terminal.
    gains = np.empty((len(beams), n))
    for b, beam in enumerate(beams):
        if cfg.attachment_mode == "beam_steering":
            target = beam.cell_center.as_array() - hpos
            weights = antenna.steering_weights(beam.panel, target)
        else:
            weights = antenna.broadside_weights(beam.panel)
        gains[b] = antenna.array_gain(beam.panel, weights, dirs)

    # Downlink transmit power at each panel input.
    if cfg.architecture == "bp" and cfg.bp_feeder_chain == "explicit":
        feeder_db = channel.feeder_loss(gateway, haps, cfg.feeder_carrier_hz)
        tx_dbm = architecture.bp_effective_dl_eirp(
            cfg.gateway_tx_power_dbm, cfg.gateway_antenna_gain_dbi,
            feeder_db, repeater, panel_gain_dbi=0.0,
        )
    else:
        tx_dbm = cfg.panel_tx_power_dbm

    if cfg.attachment_mode == "beam_steering":
        serving = fixed_cells
    else:
        rsrp = tx_dbm + gains - loss_dl[None, :]
        serving = np.argmax(rsrp, axis=0)

    counts = np.bincount(serving, minlength=len(beams))
    active = counts > 0
    idx = np.arange(n)

    # Downlink SINR: all active beams radiate from the same platform, so
    # every beam reaches a terminal through the same access loss.
    rx_dbm = tx_dbm + gains - loss_dl[None, :] + term_gain[None, :]
    rx_lin = 10.0 ** (rx_dbm / 10.0)
    total_lin = rx_lin[active].sum(axis=0)
    own_lin = rx_lin[serving, idx]
    interference_lin = np.maximum(total_lin - own_lin, 0.0)

    noise_dl_lin = np.full(
        n, 10.0 ** (architecture.thermal_noise_dbm(cfg.dl_bandwidth_hz, cfg.ue_noise_figure_db) / 10.0)
    )
    if cfg.architecture == "bp" and cfg.bp_repeater_noise_at_ue:
        rep_noise = architecture.repeater_noise_at_ue(repeater, cfg.dl_bandwidth_hz, loss_dl)
        noise_dl_lin = noise_dl_lin + 10.0 ** (np.asarray(rep_noise) / 10.0)

    sinr_dl = rx_dbm[serving, idx] - 10.0 * np.log10(noise_dl_lin + interference_lin)

    # Uplink SINR: received at the serving panel with the same weights.
    if cfg.architecture == "bp" and cfg.bp_ul_noise == "cascade":
        ul_nf = architecture.bp_uplink_noise_figure(repeater, cfg.gateway_noise_figure_db)
    else:
        ul_nf = cfg.bs_noise_figure_db
    noise_ul_lin = 10.0 ** (architecture.thermal_noise_dbm(cfg.ul_allocation_hz, ul_nf) / 10.0)

    ul_rx_dbm = cfg.ue_tx_power_dbm + term_gain - loss_ul  # before panel gain
    n_blocks = max(int(cfg.dl_bandwidth_hz // cfg.ul_allocation_hz), 1)

    # One platform position spans many TTIs; the round-robin pointer
    # advances each TTI, so a terminal meets a rotating set of co-block
    # interferers.  Average the achieved SE over one full rotation of
    # the largest cell rather than freezing a single collision draw.
    ul_abs = LinkAbstraction(cfg.ul_se_attenuation, cfg.ul_sinr_min_db, cfg.ul_se_max)
    n_sub = max(int(counts.max()), 1) if int(active.sum()) > 1 else 1
    own_ul = ul_rx_dbm + gains[serving, idx]
    se_ul = np.zeros(n)
    for sub in range(n_sub):
        slots = ul_slot_assignments(serving, n_blocks, offset=k * n_sub + sub)
        groups: dict[tuple[int, int], list[int]] = {}
        for t, key in enumerate(slots):
            groups.setdefault(key, []).append(t)
        ul_if_lin = np.zeros(n)
        for members in groups.values():
            if len(members) < 2:
                continue
            for t in members:
                panel_gain = gains[serving[t]]
                lin = sum(
                    10.0 ** ((ul_rx_dbm[m] + panel_gain[m]) / 10.0)
                    for m in members if m != t
                )
                ul_if_lin[t] = lin
        sinr_ul = own_ul - 10.0 * np.log10(noise_ul_lin + ul_if_lin)
        se_ul += sinr_to_se(sinr_ul, ul_abs)
    se_ul /= n_sub

    dl_abs = LinkAbstraction(cfg.dl_se_attenuation, cfg.dl_sinr_min_db, cfg.dl_se_max)
    se_dl = sinr_to_se(sinr_dl, dl_abs)

    duration_s = 1.0
    share = cfg.dl_bandwidth_hz / counts[serving]
    return _PositionOutcome(
        serving=serving,
        dl_bits=se_dl * duration_s * share,
        dl_tb=duration_s * share,
        ul_bits=se_ul * duration_s * cfg.ul_allocation_hz,
        ul_tb=np.full(n, duration_s * cfg.ul_allocation_hz),
    )


def run_campaign(config: ScenarioConfig,
                 position_order: Sequence[int] | None = None) -> CampaignResult:
    """Run one full campaign over the flight circle.

    ``position_order`` replays the platform positions in a custom order
    (a permutation); results are order-invariant up to floating-point
    rounding since per-user totals are plain sums.
    """
    cfg = config.validate()
    terminals, tables = build_drop(cfg)
    beams = build_beams(cfg)
    pattern = FlightPattern(
        center=Point3(0.0, 0.0, cfg.altitude_m),
        diameter_m=cfg.flight_circle_diameter_m,
        position_count=cfg.flight_position_count,
        angular_step_deg=cfg.flight_angular_step_deg,
        speed_kmh=cfg.platform_speed_kmh,
    )
    gateway = Point3(cfg.gateway_distance_m, 0.0, 0.0)
    repeater = architecture.RepeaterModel(
        gain_db=cfg.repeater_gain_db,
        noise_figure_db=cfg.repeater_noise_figure_db,
        max_output_dbm=cfg.repeater_max_output_dbm,
        output_limit_enabled=cfg.repeater_output_limit,
    )
    cpe = None
    if cfg.terminal_kind == "cpe_directional":
        cpe = ElementPattern(
            peak_gain_dbi=cfg.cpe_gain_dbi,
            hpbw_az_deg=cfg.cpe_hpbw_deg,
            hpbw_el_deg=cfg.cpe_hpbw_deg,
            front_to_back_db=cfg.cpe_front_to_back_db,
        )

    xy = np.array([[t.x, t.y] for t in terminals])
    los = np.array([t.los for t in terminals])
    shadow = np.array([t.shadow_db for t in terminals])
    fixed_cells = nominal_cells(terminals, beams)

    if position_order is None:
        order = list(range(cfg.flight_position_count))
    else:
        order = list(position_order)
        if sorted(order) != list(range(cfg.flight_position_count)):
            raise ConfigError("position_order must be a permutation of all positions")

    def evaluate(k: int) -> _PositionOutcome:
        return _position_outcome(
            k, cfg, pattern, beams, fixed_cells, xy, los, shadow,
            cpe, tables, repeater, gateway,
        )

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(evaluate, order))
    else:
        outcomes = [evaluate(k) for k in order]

    n = len(terminals)
    dl_bits = np.zeros(n)
    dl_tb = np.zeros(n)
    ul_bits = np.zeros(n)
    ul_tb = np.zeros(n)
    serving_history = np.empty((len(order), n), dtype=int)
    for i, outcome in enumerate(outcomes):
        dl_bits += outcome.dl_bits
        dl_tb += outcome.dl_tb
        ul_bits += outcome.ul_bits
        ul_tb += outcome.ul_tb
        serving_history[i] = outcome.serving

    dl_se = np.where(dl_tb > 0, dl_bits / np.where(dl_tb > 0, dl_tb, 1.0), 0.0)
    ul_se = np.where(ul_tb > 0, ul_bits / np.where(ul_tb > 0, ul_tb, 1.0), 0.0)

    modal = np.empty(n, dtype=int)
    for t in range(n):
        modal[t] = np.bincount(serving_history[:, t], minlength=len(beams)).argmax()

    report = CampaignReport(
        dl=aggregate_se(dl_se),
        ul=aggregate_se(ul_se),
        n_terminals=n,
        n_los=int(los.sum()),
    )
    return CampaignResult(
        config=cfg,
        terminals=terminals,
        dl_se=dl_se,
        ul_se=ul_se,
        serving_cell=modal,
        report=report,
    )
