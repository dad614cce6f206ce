import logging
import math
import os

import pytest
from pydantic import ValidationError

from configs.logging_config import setup_logging
from configs.settings import BoundSettings, configure, get_settings
from utils.exceptions import (
    BoundaryException,
    DistortionException,
    DrmBoundsException,
    InputException,
    NotAttainableException,
    OracleViolationException,
    QuadratureException,
)
from utils.formatting import clean_number, clean_payload, format_number, to_csv, to_json


def test_defaults():
    settings = get_settings()
    assert settings.seed == 20240917
    assert settings.scan_points == 1024
    assert settings.log_dir is None


def test_configure_overrides_and_ignores_none():
    settings = configure(seed=5, quad_tol=None)
    assert settings.seed == 5
    assert settings.quad_tol == 1e-10
    assert get_settings() is settings


def test_environment_is_read(monkeypatch):
    monkeypatch.setenv("DRMB_SEED", "42")
    monkeypatch.setenv("DRMB_PRECISION", "4")
    settings = configure()
    assert settings.seed == 42
    assert settings.precision == 4
    assert configure(seed=7).seed == 7


def test_invalid_environment_is_rejected(monkeypatch):
    monkeypatch.setenv("DRMB_SCAN_POINTS", "2")
    with pytest.raises(ValidationError):
        BoundSettings()


def test_setup_logging_writes_a_dated_file(tmp_path):
    logger = setup_logging(BoundSettings(log_dir=str(tmp_path), log_level="debug"))
    assert logger.level == logging.DEBUG
    logging.getLogger("service.test").warning("hello")
    folders = os.listdir(tmp_path)
    assert len(folders) == 1
    assert os.path.exists(tmp_path / folders[0] / "app.log")


def test_unknown_log_level_falls_back_to_warning():
    logger = setup_logging(BoundSettings(log_level="chatty"))
    assert logger.level == logging.WARNING


def test_clean_number():
    assert clean_number(math.inf) == "inf"
    assert clean_number(-math.inf) == "-inf"
    assert clean_number(math.nan) == "nan"
    assert clean_number(1.23456789012, 3) == 1.235
    assert clean_number(-1e-12) == 0.0
    assert format_number(0.5, 3) == "0.500"
    assert format_number(-math.inf) == "-inf"


def test_clean_payload_walks_nested_values():
    payload = clean_payload({"a": [1.0 / 3.0, math.inf], "b": (True, None, "x")}, 4)
    assert payload == {"a": [0.3333, "inf"], "b": [True, None, "x"]}
    assert to_json({"v": math.inf}) == '{\n  "v": "inf"\n}\n'


def test_to_csv():
    text = to_csv(("p", "q", "note"), [(0.0, 1.0 / 3.0, None), (1.0, math.inf, "x")], 3)
    assert text == "p,q,note\n0.000,0.333,\n1.000,inf,x\n"


@pytest.mark.parametrize(
    "exc_type, code",
    [
        (DrmBoundsException, 500),
        (InputException, 400),
        (DistortionException, 400),
        (BoundaryException, 422),
        (NotAttainableException, 409),
        (OracleViolationException, 500),
        (QuadratureException, 500),
    ],
)
def test_exception_codes(exc_type, code):
    exc = exc_type("boom")
    assert exc.code == code
    assert exc.message == "boom"
    assert isinstance(exc, DrmBoundsException)


def test_quadrature_exception_keeps_the_estimate():
    exc = QuadratureException("slow", estimate=0.25)
    assert exc.estimate == 0.25
    assert not isinstance(exc, InputException)
