import json
import logging
import math
from os import cpu_count
from fractions import Fraction

import numpy as np
import pytest
import xarray as xr

from palindist.default_config import Settings, configure, get_settings
from palindist.utils.read_files import parse_big_int
from palindist.utils.check_arguments import check_base, check_modulus, check_positive, validate_directory, validate_file
from palindist.utils.type_check_decorator import type_check_decorator
from palindist.utils.custom_logging import INFO_DETAILED, log_info_detailed, setup_logging
from palindist.utils.parallel import parallel_map, resolve_workers
from palindist.utils.report import ReportEnvelope, to_scalar
from palindist.scripts.config import CountConfig, VerifyLemma31Config, VerifyProp41Config, VerifyProp42Config, SieveConfig


def _enumeration_cap(_):
    return get_settings().enumeration_cap


# ---------------- #
# --- Settings --- #
# ---------------- #

def test_default_settings():
    settings = get_settings()
    assert settings.bound_log_slack == 1e-6
    assert settings.enumeration_cap == 10 ** 7
    assert settings.census_cap == 10 ** 8
    assert settings.blowup_factor == 10


def test_settings_file_overrides(sample_settings_file):
    settings = configure(sample_settings_file)
    assert settings.bound_log_slack == 1e-5
    assert settings.enumeration_cap == 1000
    assert settings.census_cap == 1024
    assert settings.blowup_factor == 20
    # untouched options keep their defaults
    assert settings.divisor_cap == 10 ** 6
    assert get_settings() is settings


def test_settings_validation(temp_dir):
    with pytest.raises(ValueError):
        Settings(bound_log_slack=-1.0)
    with pytest.raises(ValueError):
        Settings(blowup_factor=0.5)
    with pytest.raises(ValueError):
        configure(temp_dir / "missing.ini")


@pytest.mark.parametrize("text, expected", [
    ("2^10", 1024), ("10**3-1", 999), ("1_000", 1000), ("2^40+1", 2 ** 40 + 1), ("-5", -5), (7, 7),
])
def test_parse_big_int(text, expected):
    assert parse_big_int(text) == expected


@pytest.mark.parametrize("text", ["abc", "2^x", "", "1.5"])
def test_parse_big_int_rejects(text):
    with pytest.raises(ValueError):
        parse_big_int(text)


# ------------------ #
# --- Validators --- #
# ------------------ #

def test_validate_file(temp_dir):
    existing = temp_dir / "settings.ini"
    existing.write_text("[caps]\n")
    assert validate_file(existing, ".ini", "settings file", new_file=False) == existing.resolve()
    assert validate_file(temp_dir / "out.nc", ".nc", "report", new_file=True).name == "out.nc"
    with pytest.raises(ValueError, match="suffix"):
        validate_file(existing, ".nc", "report", new_file=False)
    with pytest.raises(ValueError, match="does not exist"):
        validate_file(temp_dir / "missing.ini", ".ini", "settings file", new_file=False)
    with pytest.raises(ValueError, match="parent directory"):
        validate_file(temp_dir / "nowhere" / "out.nc", ".nc", "report", new_file=True)


def test_validate_directory(temp_dir):
    assert validate_directory(temp_dir, "log dir") == temp_dir.resolve()
    with pytest.raises(ValueError):
        validate_directory(temp_dir / "missing", "log dir")


def test_type_check_decorator():
    @type_check_decorator
    def scaled(n: int, label: str | None = None, items: list[int] | None = None) -> int:
        return n

    assert scaled(3) == 3
    assert scaled(True, "x", [1]) is True
    assert scaled(3, items=["not checked"]) == 3
    with pytest.raises(TypeError, match="label"):
        scaled(3, 4)
    with pytest.raises(TypeError, match="'n'"):
        scaled("3")


@pytest.mark.parametrize("check, value", [(check_base, 1), (check_modulus, 1), (check_positive, 0), (check_base, 2.0), (check_base, True)])
def test_integer_checks_reject(check, value):
    args = (value, "value") if check is check_positive else (value,)
    with pytest.raises(ValueError, match="^ERROR: "):
        check(*args)


# ---------------- #
# --- Parallel --- #
# ---------------- #

def test_resolve_workers():
    assert resolve_workers(0) == (cpu_count() or 1)
    assert resolve_workers(3) == 3
    with pytest.raises(ValueError):
        resolve_workers(-1)


def test_parallel_map_keeps_order_and_settings():
    assert parallel_map(abs, [-3, 1, -2], workers=2) == [3, 1, 2]
    configure(enumeration_cap=5)
    assert parallel_map(_enumeration_cap, range(4), workers=2) == [5, 5, 5, 5]


# -------------- #
# --- Report --- #
# -------------- #

def test_to_scalar():
    assert to_scalar(2 ** 60) == str(2 ** 60)
    assert to_scalar(12) == 12
    assert to_scalar(Fraction(1, 3)) == "1/3"
    assert to_scalar(math.nan) == "nan"
    assert to_scalar(-math.inf) == "-inf"
    assert to_scalar(np.int64(4)) == 4
    assert to_scalar(True) is True


@pytest.fixture
def envelope():
    return ReportEnvelope(
        "count",
        {"base": 10, "mod": 3, "total": 90},
        [{"residue": a, "count": 30, "satisfied": a != 2} for a in range(3)],
    )


def test_report_json(envelope):
    data = json.loads(envelope.to_json())
    assert data["command"] == "count"
    assert data["schema_version"] == 1
    assert data["params"]["total"] == 90
    assert [row["count"] for row in data["rows"]] == [30, 30, 30]


def test_report_csv(envelope):
    lines = envelope.to_csv().splitlines()
    assert lines[0] == "# command: count"
    assert "# total: 90" in lines
    header = lines.index("residue,count,satisfied")
    assert lines[header + 1:] == ["0,30,true", "1,30,true", "2,30,false"]


def test_report_netcdf(envelope, temp_dir):
    path = temp_dir / "report.nc"
    envelope.write("netcdf", path)
    with xr.open_dataset(path) as ds:
        assert ds.attrs["command"] == "count"
        assert int(ds.attrs["mod"]) == 3
        assert list(ds["count"].values) == [30, 30, 30]
        assert list(ds["satisfied"].values) == [1, 1, 0]


def test_report_netcdf_needs_file(envelope, temp_dir):
    with pytest.raises(ValueError):
        envelope.write("netcdf", None)
    with pytest.raises(ValueError):
        envelope.write("netcdf", temp_dir / "report.txt")


# -------------- #
# --- Config --- #
# -------------- #

def test_count_config_needs_exactly_one_scope():
    with pytest.raises(ValueError):
        CountConfig(base=10, mod=3)
    with pytest.raises(ValueError):
        CountConfig(base=10, mod=3, length=3, upto=100)
    assert CountConfig(base=10, mod=3, length=3).length == 3


def test_config_describe_lists_fields():
    text = CountConfig(base=10, mod=3, length=3).describe()
    assert text.splitlines()[0] == "CountConfig:"
    assert any(line.split("=")[0].strip() == "mod" and line.endswith("3") for line in text.splitlines())


def test_verify_configs_fill_threshold_defaults():
    prop41 = VerifyProp41Config(base=2, p=11)
    assert (prop41.length_min, prop41.length_max) == (105, 105)
    prop42 = VerifyProp42Config(base=2, mod=5)
    assert (prop42.length_min, prop42.length_max) == (91, 91)
    lemma31 = VerifyLemma31Config(base=2, mod=11, length_max=20)
    assert lemma31.c_list == list(range(1, 11))


def test_base_config_validation():
    with pytest.raises(ValueError):
        CountConfig(base=10, mod=3, length=3, format="netcdf")
    with pytest.raises(ValueError):
        CountConfig(base=1, mod=3, length=3)
    with pytest.raises(ValueError):
        SieveConfig(base=2, x=2 ** 20, y=11.0)


# --------------- #
# --- Logging --- #
# --------------- #

def test_setup_logging_levels_and_files(temp_dir):
    log_file = temp_dir / "run.log"
    logger = setup_logging(2, log_file, "w", "palindist_test_log")
    try:
        assert logger.level == INFO_DETAILED
        assert logging.getLogger().level == logging.INFO
        assert not logger.propagate
        log_info_detailed("palindist_test_log", "sweep progress")
        logger.debug("hidden")
        for handler in logger.handlers:
            handler.flush()
        text = log_file.read_text()
        assert "[INFO_DETAILED/Palindist_test_log] sweep progress" in text
        assert "hidden" not in text
        assert (temp_dir / "run.root.log").exists()
    finally:
        for name in ("palindist_test_log", None):
            target = logging.getLogger(name)
            for handler in target.handlers[:]:
                target.removeHandler(handler)
                handler.close()
