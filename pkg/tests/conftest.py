import os

import pytest
from hypothesis import strategies as st

from configs.settings import configure
from service.distortion import piecewise_linear


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings, whatever the shell exports."""
    for key in list(os.environ):
        if key.upper().startswith("DRMB_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.delenv("EXCLUDE_TOOLS_TAGS", raising=False)
    configure()
    yield


@st.composite
def pwl_distortions(draw, max_knots: int = 5):
    """Continuous piecewise-linear distortions on a 1/20 grid."""
    ps = sorted(
        set(draw(st.lists(st.integers(1, 19), min_size=1, max_size=max_knots)))
    )
    hs = sorted(
        draw(st.lists(st.integers(0, 20), min_size=len(ps), max_size=len(ps)))
    )
    points = [(0.0, 0.0)]
    points += [(p / 20.0, h / 20.0) for p, h in zip(ps, hs)]
    points.append((1.0, 1.0))
    return piecewise_linear(points)
