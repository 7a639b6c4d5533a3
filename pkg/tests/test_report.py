"""Artifact writers: per-user CSV, report text, CDF data."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hapsim.config import ScenarioConfig
from hapsim.consumption import haps_relay_assessment
from hapsim.errors import ConfigError
from hapsim.geometry import Point3
from hapsim.report import (
    CONSUMPTION_CSV_COLUMNS,
    USER_CSV_COLUMNS,
    format_report,
    read_users_csv,
    write_cdf,
    write_consumption_csv,
    write_report,
    write_users_csv,
)
from hapsim.simulation import run_campaign


@pytest.fixture(scope="module")
def result():
    return run_campaign(ScenarioConfig())


def test_users_csv_round_trip(tmp_path, result):
    p = tmp_path / "users.csv"
    rows = result.user_rows()
    write_users_csv(p, rows)
    back = read_users_csv(p)
    assert len(back) == len(rows)
    for a, b in zip(rows, back):
        assert a["terminal_id"] == b["terminal_id"]
        assert a["kind"] == b["kind"]
        assert a["los"] == b["los"]
        assert a["outage"] == b["outage"]
        # repr round-trip keeps floats exact
        assert a["dl_se"] == b["dl_se"]
        assert a["x"] == b["x"]


def test_users_csv_header_and_order(tmp_path, result):
    p = tmp_path / "users.csv"
    write_users_csv(p, result.user_rows())
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(USER_CSV_COLUMNS)
    ids = [int(line.split(",")[0]) for line in lines[1:]]
    assert ids == list(range(20))


def test_users_csv_is_deterministic(tmp_path, result):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_users_csv(a, result.user_rows())
    write_users_csv(b, result.user_rows())
    assert a.read_bytes() == b.read_bytes()


def test_read_users_csv_rejects_foreign_files(tmp_path):
    p = tmp_path / "other.csv"
    p.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ConfigError, match="not a per-user results file"):
        read_users_csv(p)


def test_read_users_csv_rejects_malformed_rows(tmp_path):
    p = tmp_path / "broken.csv"
    p.write_text(",".join(USER_CSV_COLUMNS) + "\n1,2,3\n")
    with pytest.raises(ConfigError, match="malformed row"):
        read_users_csv(p)


def test_report_layout(result):
    text = format_report(result, scenario_name="single-cell-bp")
    lines = text.splitlines()
    assert lines[0] == "scenario = single-cell-bp"
    keys = [line.split(" = ")[0] for line in lines]
    assert keys == [
        "scenario", "architecture", "layout", "attachment_mode",
        "terminal_kind", "seed", "terminals", "los_terminals",
        "dl_mean_se", "dl_cell_edge_se", "dl_outage_count",
        "ul_mean_se", "ul_cell_edge_se", "ul_outage_count",
    ]
    values = dict(line.split(" = ") for line in lines)
    assert values["terminals"] == "20"
    assert values["los_terminals"] == "17"
    assert_allclose(float(values["dl_mean_se"]), result.report.dl.mean_se, atol=1e-6)


def test_write_report(tmp_path, result):
    p = tmp_path / "report.txt"
    write_report(p, result, "custom")
    assert p.read_text() == format_report(result, "custom")


def test_cdf_is_sorted_and_normalised(tmp_path):
    p = tmp_path / "cdf.txt"
    write_cdf(p, [2.0, 0.5, 1.0, 1.5])
    lines = p.read_text().splitlines()
    assert lines[0].startswith("#")
    data = np.array([[float(tok) for tok in line.split()] for line in lines[1:]])
    assert_allclose(data[:, 0], [0.5, 1.0, 1.5, 2.0])
    assert_allclose(data[:, 1], [0.25, 0.5, 0.75, 1.0])
    assert data[-1, 1] == 1.0


def test_consumption_csv(tmp_path):
    rows = haps_relay_assessment(
        [Point3(20_000.0, 0.0, 0.0), Point3(0.0, 0.0, 0.0)],
        Point3(0.0, 0.0, 20_000.0), Point3(45_000.0, 0.0, 0.0),
        relay_rx_gain_db=105.0, sink_rx_gain_db=0.0,
        relay_efficiency=0.5, source_efficiency=0.5,
    )
    p = tmp_path / "consumption.csv"
    write_consumption_csv(p, rows)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(CONSUMPTION_CSV_COLUMNS)
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "0"
    assert float(first[1]) == rows[0].d1_m
    assert first[5] in ("0", "1")
