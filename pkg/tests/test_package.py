"""Public facade and error hierarchy."""

import pytest

import hapsim
from hapsim.errors import (
    ConfigError,
    ConfigSyntaxError,
    DegenerateGeometryError,
    DomainError,
    HapsimError,
    OutOfCoverageError,
    SchedulingError,
    ValidationError,
)


def test_top_level_exports():
    for name in ("run_campaign", "ScenarioConfig", "fspl", "relay_advantage",
                 "power_efficiency_factor", "Point3", "NtnTables", "sinr_to_se"):
        assert hasattr(hapsim, name), name
    assert isinstance(hapsim.__version__, str)


def test_all_errors_share_one_base():
    for exc in (ConfigError, ConfigSyntaxError, ValidationError,
                DegenerateGeometryError, OutOfCoverageError,
                SchedulingError, DomainError):
        assert issubclass(exc, HapsimError)
    assert issubclass(ConfigSyntaxError, ConfigError)
    assert issubclass(ValidationError, ConfigError)


def test_syntax_error_carries_line_number():
    err = ConfigSyntaxError("bad token", line_no=7)
    assert err.line_no == 7
    assert "line 7" in str(err)


def test_validation_error_names_the_field():
    err = ValidationError("altitude_m", "must be positive")
    assert err.field == "altitude_m"
    assert str(err) == "altitude_m: must be positive"


def test_one_catch_clause_covers_everything():
    with pytest.raises(HapsimError):
        hapsim.fspl(-1.0, 100.0)
    with pytest.raises(HapsimError):
        hapsim.ScenarioConfig(layout="ring").validate()
