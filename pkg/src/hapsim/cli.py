"""Command-line entry point.

Subcommands:

* ``run``          - simulate one campaign and write its artifacts
* ``consumption``  - relay-versus-direct power-efficiency assessment
* ``validate``     - check a scenario file and print its canonical form

A scenario comes from ``--preset`` or ``--config`` (an empty file is the
single-cell bent-pipe baseline); ``--seed``, ``--arch`` and ``--workers``
override individual fields without editing the file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import config as config_mod
from . import consumption as consumption_mod
from . import report as report_mod
from .config import ScenarioConfig, dump_config, load_config, preset_config, preset_names
from .consumption import EfficiencyStage
from .errors import HapsimError
from .geometry import Point3
from .simulation import build_drop, run_campaign

__all__ = ["main"]


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", metavar="PATH", help="scenario file")
    source.add_argument("--preset", metavar="NAME",
                        help=f"built-in scenario ({', '.join(preset_names())})")
    parser.add_argument("--seed", type=int, metavar="N", help="override the drop seed")
    parser.add_argument("--arch", choices=("bp", "rg"), help="override the architecture")


def _scenario_from_args(args) -> ScenarioConfig:
    if args.preset:
        cfg = preset_config(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        cfg = ScenarioConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.arch is not None:
        cfg.architecture = args.arch
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    return cfg.validate()


def _scenario_name(args) -> str:
    if args.preset:
        return args.preset
    if args.config:
        return Path(args.config).stem
    return "single-cell-bp"


def _cmd_run(args) -> int:
    cfg = _scenario_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_campaign(cfg)
    report_mod.write_users_csv(out / "users.csv", result.user_rows())
    report_mod.write_report(out / "report.txt", result, _scenario_name(args))
    report_mod.write_cdf(out / "cdf_dl.txt", result.dl_se)
    report_mod.write_cdf(out / "cdf_ul.txt", result.ul_se)
    print(report_mod.format_report(result, _scenario_name(args)), end="")
    print(f"artifacts written to {out}")
    return 0


def _cmd_consumption(args) -> int:
    cfg = _scenario_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    terminals, _ = build_drop(cfg)

    h_relay = consumption_mod.repeater_chain_efficiency(
        EfficiencyStage(10.0 ** (cfg.repeater_mixer_gain_db / 10.0), cfg.repeater_mixer_efficiency),
        EfficiencyStage(10.0 ** (cfg.repeater_amp_gain_db / 10.0), cfg.repeater_amp_efficiency),
    )
    h_source = consumption_mod.base_station_chain_efficiency(
        EfficiencyStage(10.0 ** (cfg.bs_baseband_gain_db / 10.0), cfg.bs_baseband_efficiency),
        EfficiencyStage(10.0 ** (cfg.bs_mixer_gain_db / 10.0), cfg.bs_mixer_efficiency),
        EfficiencyStage(10.0 ** (cfg.bs_amp_gain_db / 10.0), cfg.bs_amp_efficiency),
    )
    platform = Point3(0.0, 0.0, cfg.altitude_m)
    gateway = Point3(cfg.gateway_distance_m, 0.0, 0.0)
    rows = consumption_mod.haps_relay_assessment(
        [t.position for t in terminals], platform, gateway,
        cfg.relay_rx_gain_db, cfg.sink_rx_gain_db, h_relay, h_source,
    )
    report_mod.write_consumption_csv(out / "consumption.csv", rows)

    preferred = sum(r.relay_preferred for r in rows)
    worst_ratio = max(r.feeder_access_ratio_sq for r in rows)
    print(f"h_relay = {h_relay:.6f}")
    print(f"h_source = {h_source:.6f}")
    print(f"relay_preferred = {preferred}/{len(rows)} terminals")
    print(f"max_feeder_access_ratio_sq = {worst_ratio:.4f} (bound 6.25)")
    print(f"artifacts written to {out}")
    return 0


def _cmd_validate(args) -> int:
    cfg = _scenario_from_args(args)
    print(dump_config(cfg), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hapsim",
        description="HAPS network simulator: bent-pipe vs. regenerative payloads",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one campaign")
    _add_scenario_args(p_run)
    p_run.add_argument("--out", metavar="DIR", default="out", help="artifact directory")
    p_run.add_argument("--workers", type=int, metavar="N",
                       help="evaluate platform positions on N threads")
    p_run.set_defaults(func=_cmd_run)

    p_cons = sub.add_parser("consumption", help="relay power-efficiency assessment")
    _add_scenario_args(p_cons)
    p_cons.add_argument("--out", metavar="DIR", default="out", help="artifact directory")
    p_cons.set_defaults(func=_cmd_consumption)

    p_val = sub.add_parser("validate", help="validate a scenario and print it")
    _add_scenario_args(p_val)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HapsimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
