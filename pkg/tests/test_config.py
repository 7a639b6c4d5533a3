"""Scenario file parsing, validation, presets and canonical dumping."""

import dataclasses

import pytest

from hapsim.config import (
    TABLE_PATH_ENV_VAR,
    ScenarioConfig,
    dump_config,
    load_config,
    parse_config,
    preset_config,
    preset_names,
)
from hapsim.errors import ConfigSyntaxError, ValidationError


def test_empty_text_is_the_baseline():
    cfg = parse_config("")
    assert cfg == ScenarioConfig()
    assert cfg.architecture == "bp"
    assert cfg.layout == "single"


def test_comments_and_blank_lines_ignored():
    cfg = parse_config("# scenario\n\n  # indented comment\nseed = 9\n")
    assert cfg.seed == 9


def test_values_parse_by_field_type():
    cfg = parse_config(
        "architecture = rg\n"
        "altitude_m = 21e3\n"
        "flight_position_count = 6\n"
        "flight_angular_step_deg = 60\n"
        "repeater_output_limit = yes\n"
    )
    assert cfg.architecture == "rg"
    assert cfg.altitude_m == 21000.0
    assert cfg.flight_position_count == 6
    assert cfg.repeater_output_limit is True


def test_auto_fields_resolve_from_layout():
    single = parse_config("terminal_count = auto\ncell_radius_m = auto\ntarget_los_count = auto\n")
    assert single.terminal_count is None
    assert single.resolved_terminal_count() == 20
    assert single.resolved_cell_radius_m() == 60_000.0
    assert single.resolved_target_los_count() == 17

    seven = parse_config("layout = seven_cell\n")
    assert seven.resolved_terminal_count() == 210
    assert seven.resolved_cell_radius_m() == 100_000.0
    assert seven.resolved_target_los_count() == 175


def test_explicit_counts_override_auto():
    cfg = parse_config("terminal_count = 50\ntarget_los_count = 40\n")
    assert cfg.resolved_terminal_count() == 50
    assert cfg.resolved_target_los_count() == 40


def test_probabilistic_los_disables_target():
    cfg = parse_config("los_assignment = probabilistic\ntarget_los_count = 17\n")
    assert cfg.resolved_target_los_count() is None


def test_unknown_key_rejected():
    with pytest.raises(ValidationError, match="unknown configuration key"):
        parse_config("carrier = 2.1e9\n")


def test_duplicate_key_reports_line():
    with pytest.raises(ConfigSyntaxError, match="duplicate key") as err:
        parse_config("seed = 1\nseed = 2\n")
    assert "2" in str(err.value)


def test_malformed_line_reports_line():
    with pytest.raises(ConfigSyntaxError, match="key = value"):
        parse_config("seed = 1\njust some words\n")


def test_bad_value_types_rejected():
    with pytest.raises(ConfigSyntaxError, match="expected integer"):
        parse_config("seed = one\n")
    with pytest.raises(ConfigSyntaxError, match="expected number"):
        parse_config("altitude_m = high\n")
    with pytest.raises(ConfigSyntaxError, match="true/false"):
        parse_config("repeater_output_limit = maybe\n")
    with pytest.raises(ConfigSyntaxError, match="'auto'"):
        parse_config("terminal_count = many\n")


def test_enum_validation():
    with pytest.raises(ValidationError, match="architecture"):
        parse_config("architecture = mesh\n")
    with pytest.raises(ValidationError, match="attachment_mode"):
        ScenarioConfig(attachment_mode="nearest").validate()


def test_range_validation():
    with pytest.raises(ValidationError, match="must be positive"):
        ScenarioConfig(dl_bandwidth_hz=0.0).validate()
    with pytest.raises(ValidationError, match="seed"):
        ScenarioConfig(seed=-1).validate()
    with pytest.raises(ValidationError, match="outer_cell_center_fraction"):
        ScenarioConfig(outer_cell_center_fraction=1.5).validate()
    with pytest.raises(ValidationError, match="ul_allocation_hz"):
        ScenarioConfig(ul_allocation_hz=30e6).validate()
    with pytest.raises(ValidationError, match="target_los_count"):
        ScenarioConfig(target_los_count=21).validate()
    with pytest.raises(ValidationError, match="360"):
        ScenarioConfig(flight_position_count=10).validate()


def test_dump_lists_every_field_once():
    text = dump_config(ScenarioConfig())
    keys = [line.split(" = ")[0] for line in text.strip().splitlines()]
    assert keys == [f.name for f in dataclasses.fields(ScenarioConfig)]
    assert "terminal_count = auto" in text
    assert "repeater_output_limit = false" in text


def test_dump_parse_round_trip_is_identity():
    for name in preset_names():
        cfg = preset_config(name)
        assert parse_config(dump_config(cfg)) == cfg
    custom = ScenarioConfig(seed=7, altitude_m=19_500.0, terminal_count=33)
    assert parse_config(dump_config(custom)) == custom


def test_load_config_from_file(tmp_path):
    p = tmp_path / "scenario.cfg"
    p.write_text("layout = seven_cell\nseed = 4\n")
    cfg = load_config(p)
    assert cfg.layout == "seven_cell"
    assert cfg.seed == 4


def test_preset_catalogue():
    names = preset_names()
    assert "single-cell-bp" in names
    assert "single-cell-rg" in names
    assert len(names) == 10  # 2 single + 2 modes x 2 kinds x 2 architectures
    cpe = preset_config("multi-selection-cpe-rg")
    assert cpe.layout == "seven_cell"
    assert cpe.attachment_mode == "beam_selection"
    assert cpe.terminal_kind == "cpe_directional"
    assert cpe.architecture == "rg"
    with pytest.raises(ValidationError, match="unknown preset"):
        preset_config("multi-anything")


def test_table_path_resolution_precedence(monkeypatch):
    monkeypatch.delenv(TABLE_PATH_ENV_VAR, raising=False)
    assert ScenarioConfig().resolved_table_path() is None
    monkeypatch.setenv(TABLE_PATH_ENV_VAR, "/tmp/alt.csv")
    assert ScenarioConfig().resolved_table_path() == "/tmp/alt.csv"
    explicit = ScenarioConfig(ntn_table_path="/etc/custom.csv")
    assert explicit.resolved_table_path() == "/etc/custom.csv"
