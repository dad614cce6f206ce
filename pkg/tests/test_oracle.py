import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from conftest import pwl_distortions
from dtos.quantile_dto import MomentSpec
from service.distortion import identity, rvar, tvar, var
from service.oracle import DEFAULT_SUITE, SuiteCase, moriguti_check, run_suite, search
from utils.const import CandidateFamily, ShapeClass, Side
from utils.exceptions import InputException

STANDARD = MomentSpec()


def test_search_reaches_the_general_tvar_bound():
    report = search(tvar(0.75), ShapeClass.GENERAL, Side.SUP, STANDARD, budget=10_000, seed=7)
    assert report.analytic_value == pytest.approx(math.sqrt(3.0))
    assert report.best_value == pytest.approx(math.sqrt(3.0), abs=1e-4)
    assert not report.violation
    assert report.attained is True
    assert report.best_candidate.family == CandidateFamily.TWO_POINT
    assert report.budget <= 10_000


def test_search_reaches_the_us_var_bound():
    report = search(var(0.9), ShapeClass.UNIMODAL_SYMMETRIC, Side.SUP, STANDARD, budget=4000, seed=1)
    assert report.best_value == pytest.approx(1.490712, abs=1e-4)
    assert report.attained is True
    assert report.families_searched == [CandidateFamily.CENTRED_UNIFORM]


def test_identity_is_the_mean_for_every_candidate():
    m = MomentSpec(mu=3.0, sigma=0.5)
    report = search(identity(), ShapeClass.UNIMODAL, Side.INF, m, budget=500, seed=3)
    assert report.analytic_value == pytest.approx(3.0)
    assert report.best_value == pytest.approx(3.0)
    assert not report.violation


def test_search_is_reproducible_for_a_seed():
    first = search(tvar(0.5), ShapeClass.SYMMETRIC, Side.SUP, STANDARD, budget=600, seed=11)
    second = search(tvar(0.5), ShapeClass.SYMMETRIC, Side.SUP, STANDARD, budget=600, seed=11)
    assert first == second


def test_report_serializes_the_class_under_its_alias():
    report = search(var(0.9), ShapeClass.GENERAL, Side.SUP, STANDARD, budget=300, seed=0)
    payload = report.model_dump(mode="json", by_alias=True)
    assert payload["class"] == "general"
    assert "shape" not in payload


def test_default_suite_has_no_violations():
    assert len(DEFAULT_SUITE) == 40
    reports = run_suite(budget=10_000, seed=1)
    assert len(reports) == len(DEFAULT_SUITE)
    assert not [r.distortion for r in reports if r.violation]
    missed = [(r.distortion, r.shape, r.side) for r in reports if r.attained is False]
    assert not missed


def test_symmetric_search_finds_the_three_point_law():
    report = search(
        rvar(0.9, 0.99), ShapeClass.SYMMETRIC, Side.SUP, STANDARD, budget=10_000, seed=1
    )
    assert report.best_value == pytest.approx(math.sqrt(5.0), abs=1e-4)
    assert report.best_candidate.family == CandidateFamily.THREE_POINT
    assert report.attained is True


def test_general_tvar_inf_is_not_undercut_by_edge_laws():
    report = search(tvar(0.75), ShapeClass.GENERAL, Side.INF, STANDARD, budget=10_000, seed=1)
    assert report.best_value >= -1e-12
    assert not report.violation


def test_run_suite_accepts_custom_cases():
    cases = [SuiteCase("tvar:0.9", ShapeClass.UNIMODAL, Side.SUP)]
    (report,) = run_suite(cases, budget=400, seed=2)
    assert report.distortion == "tvar:0.9"
    assert report.shape == ShapeClass.UNIMODAL


def test_moriguti_holds_with_equality_for_convex_weights():
    grid = np.linspace(0.0, 1.0, 101)
    result = moriguti_check(grid, grid**2, grid)
    assert result.lhs == pytest.approx(result.rhs)
    assert result.lhs == pytest.approx(2.0 / 3.0, abs=1e-3)
    assert result.holds


def test_moriguti_for_a_unit_step():
    grid = np.linspace(0.0, 1.0, 1001)
    result = moriguti_check(grid, (grid >= 0.5).astype(float), grid)
    assert result.lhs == pytest.approx(0.4995)
    assert result.rhs == pytest.approx(0.7495, abs=1e-4)
    assert result.holds


def test_moriguti_on_random_instances():
    rng = np.random.default_rng(2024)
    grid = np.linspace(0.0, 1.0, 64)
    for _ in range(1000):
        x = np.sort(rng.normal(size=grid.size))
        H = np.cumsum(rng.uniform(-1.0, 1.0, size=grid.size))
        assert moriguti_check(x, H, grid).holds


@pytest.mark.parametrize(
    "x, H, grid",
    [
        ([1.0, 0.0, 2.0], [0.0, 0.5, 1.0], [0.0, 0.5, 1.0]),
        ([0.0, 1.0], [0.0, 0.5, 1.0], [0.0, 0.5, 1.0]),
        ([0.0, 1.0, 2.0], [0.0, 0.5, 1.0], [0.0, 0.5, 0.5]),
        ([0.0, math.nan, 2.0], [0.0, 0.5, 1.0], [0.0, 0.5, 1.0]),
        ([0.0], [0.0], [0.0]),
    ],
)
def test_moriguti_rejects_bad_tabulations(x, H, grid):
    with pytest.raises(InputException):
        moriguti_check(x, H, grid)


@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(pwl_distortions())
def test_random_distortions_are_never_beaten(h):
    for shape in (ShapeClass.SYMMETRIC, ShapeClass.UNIMODAL, ShapeClass.UNIMODAL_SYMMETRIC):
        for side in Side:
            report = search(h, shape, side, STANDARD, budget=300, seed=4)
            assert not report.violation, report.model_dump()
