import math

import pytest
from hypothesis import HealthCheck, given, settings

from conftest import pwl_distortions
from dtos.quantile_dto import MomentSpec
from service.distortion import dual, identity, piecewise_constant, ph, rvar, tvar, var
from service.drm_bounds import (
    bound,
    inf_general,
    inf_symmetric,
    inf_unimodal,
    inf_us,
    sup_general,
    sup_symmetric,
    sup_unimodal,
    sup_us,
    tvar_sup_unimodal,
    tvar_sup_us,
    unimodal_kernel_integral,
    upsilon,
)
from service.quantile_model import rho, validate_shape
from utils.const import CandidateFamily, Method, ShapeClass, Side
from utils.exceptions import BoundaryException, InputException

STANDARD = MomentSpec()


def test_general_rvar_is_attained_by_a_two_point_law():
    sup = sup_general(rvar(0.9, 0.99), STANDARD)
    assert sup.value == pytest.approx(3.0)
    assert sup.attainable
    assert sup.extremal.family == CandidateFamily.TWO_POINT
    assert rho(rvar(0.9, 0.99), sup.extremal) == pytest.approx(3.0)

    inf = inf_general(rvar(0.9, 0.99), STANDARD)
    assert inf.value == pytest.approx(-math.sqrt(0.01 / 0.99))
    assert inf.attainable
    assert validate_shape(inf.extremal, ShapeClass.GENERAL, STANDARD)


def test_general_tvar():
    assert sup_general(tvar(0.75), STANDARD).value == pytest.approx(math.sqrt(3.0))
    inf = inf_general(tvar(0.75), STANDARD)
    assert inf.value == pytest.approx(0.0, abs=1e-12)
    assert not inf.attainable
    assert inf.extremal is None


def test_identity_gives_the_mean():
    m = MomentSpec(mu=2.5, sigma=3.0)
    sup = sup_general(identity(), m)
    assert sup.value == pytest.approx(2.5)
    assert sup.attainable
    assert sup.extremal.family == CandidateFamily.TWO_POINT
    assert inf_general(identity(), m).value == pytest.approx(2.5)


def test_location_scale_is_applied_after_standardizing():
    m = MomentSpec(mu=1.0, sigma=2.0)
    sup = sup_general(tvar(0.75), m)
    assert sup.value == pytest.approx(1.0 + 2.0 * math.sqrt(3.0))
    assert rho(tvar(0.75), sup.extremal) == pytest.approx(sup.value)
    assert validate_shape(sup.extremal, ShapeClass.GENERAL, m)


def test_symmetric_rvar():
    sup = sup_symmetric(rvar(0.9, 0.99), STANDARD)
    assert sup.value == pytest.approx(math.sqrt(5.0))
    assert sup.attainable
    assert validate_shape(sup.extremal, ShapeClass.SYMMETRIC, STANDARD)

    inf = inf_symmetric(rvar(0.9, 0.99), STANDARD)
    assert inf.value == pytest.approx(0.0, abs=1e-12)
    assert -0.071426 <= inf.value
    assert inf.attainable
    assert inf.extremal.family == CandidateFamily.THREE_POINT
    assert rho(rvar(0.9, 0.99), inf.extremal) == pytest.approx(0.0, abs=1e-9)


def test_symmetric_sup_below_the_median_is_the_mean():
    m = MomentSpec(mu=-1.0, sigma=4.0)
    assert sup_symmetric(rvar(0.2, 0.4), m).value == pytest.approx(-1.0)


def test_unimodal_var_uses_the_closed_form():
    sup = sup_unimodal(var(0.95), STANDARD)
    assert sup.value == pytest.approx(2.808717, abs=1e-6)
    assert sup.method == Method.CLOSED_FORM
    assert sup.extremal.family == CandidateFamily.LOWER_ATOM_UNIFORM
    assert validate_shape(sup.extremal, ShapeClass.UNIMODAL, STANDARD)
    assert inf_unimodal(var(0.95), STANDARD).value == pytest.approx(-0.197386, abs=1e-6)


def test_unimodal_tvar_uses_the_kernel_integral():
    sup = sup_unimodal(tvar(0.75), STANDARD)
    assert sup.value == pytest.approx(math.sqrt(23.0) / 3.0)
    assert sup.method == Method.ENVELOPE_INTEGRAL
    assert sup.attainable
    assert rho(tvar(0.75), sup.extremal) == pytest.approx(sup.value)


@pytest.mark.parametrize(
    "alpha, expected", [(0.5, 0.881917), (0.25, 0.532870), (0.75, math.sqrt(23.0) / 3.0)]
)
def test_tvar_sup_unimodal(alpha, expected):
    result = tvar_sup_unimodal(alpha, STANDARD)
    assert result.value == pytest.approx(expected, abs=1e-6)
    assert validate_shape(result.extremal, ShapeClass.UNIMODAL, STANDARD)
    assert rho(tvar(alpha), result.extremal) == pytest.approx(result.value)


@pytest.mark.parametrize(
    "alpha, expected", [(0.75, 4.0 / 3.0), (1.0 / 3.0, 0.57735), (2.0 / 3.0, 1.154701)]
)
def test_tvar_sup_us(alpha, expected):
    result = tvar_sup_us(alpha, STANDARD)
    assert result.value == pytest.approx(expected, abs=1e-6)
    assert validate_shape(result.extremal, ShapeClass.UNIMODAL_SYMMETRIC, STANDARD)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_tvar_closed_forms_reject_end_levels(alpha):
    with pytest.raises(InputException):
        tvar_sup_unimodal(alpha, STANDARD)
    with pytest.raises(InputException):
        tvar_sup_us(alpha, STANDARD)


def test_us_var_and_tvar():
    sup = sup_us(var(0.9), STANDARD)
    assert sup.value == pytest.approx(1.490712, abs=1e-6)
    assert sup.extremal.family == CandidateFamily.CENTRED_UNIFORM
    assert sup_us(tvar(0.5), STANDARD).value == pytest.approx(math.sqrt(3.0) / 2.0)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.75, 0.9])
def test_kernel_integrals_match_the_tvar_closed_forms(alpha):
    g = dual(tvar(alpha))
    assert unimodal_kernel_integral(g) == pytest.approx(
        tvar_sup_unimodal(alpha, STANDARD).value, abs=1e-10
    )
    assert upsilon(g) == pytest.approx(tvar_sup_us(alpha, STANDARD).value, abs=1e-10)


def test_upsilon_values():
    assert upsilon(dual(tvar(0.9))) == pytest.approx(2.108185, abs=1e-6)
    assert upsilon(dual(ph(0.9, 0.75))) == pytest.approx(math.sqrt(10.0), abs=1e-6)


def test_power_distortion_over_the_shaped_classes():
    h = ph(0.9, 0.75)
    general = sup_general(h, STANDARD)
    assert general.value == pytest.approx(3.201562, abs=1e-6)

    unimodal = sup_unimodal(h, STANDARD)
    assert unimodal.method == Method.BRACKET
    assert unimodal.value == pytest.approx(3.201562, abs=1e-6)
    assert unimodal.bracket.lower <= unimodal.bracket.upper

    us = sup_us(h, STANDARD)
    assert us.method == Method.BRACKET
    assert us.value == pytest.approx(2.371708, abs=1e-6)
    assert us.bracket.upper == pytest.approx(us.value)


def test_divergent_power_distortion():
    h = ph(0.9, 0.4)
    assert sup_general(h, STANDARD).value == math.inf
    unimodal = sup_unimodal(h, STANDARD)
    assert unimodal.value == math.inf
    assert "diverges" in unimodal.diagnostic


def test_weight_on_the_essential_supremum_is_unbounded():
    h = piecewise_constant([(0.0, 0.5, "l"), (1.0, 1.0)])
    result = sup_general(h, STANDARD)
    assert result.value == math.inf
    assert "h(0+)" in result.diagnostic


def test_weight_on_the_essential_infimum():
    h = piecewise_constant([(0.5, 0.5), (1.0, 1.0)])
    with pytest.raises(BoundaryException):
        sup_general(h, STANDARD)
    assert inf_general(h, STANDARD).value == -math.inf


@pytest.mark.parametrize(
    "h",
    [var(0.9), tvar(0.75), rvar(0.9, 0.99), ph(0.9, 0.75)],
    ids=["var", "tvar", "rvar", "ph"],
)
def test_classes_are_nested(h):
    tol = 1e-8
    sups = {shape: bound(h, shape, Side.SUP, STANDARD).value for shape in ShapeClass}
    infs = {shape: bound(h, shape, Side.INF, STANDARD).value for shape in ShapeClass}
    for narrow, wide in [
        (ShapeClass.UNIMODAL_SYMMETRIC, ShapeClass.UNIMODAL),
        (ShapeClass.UNIMODAL_SYMMETRIC, ShapeClass.SYMMETRIC),
        (ShapeClass.UNIMODAL, ShapeClass.GENERAL),
        (ShapeClass.SYMMETRIC, ShapeClass.GENERAL),
    ]:
        assert sups[narrow] <= sups[wide] + tol
        assert infs[narrow] >= infs[wide] - tol


def test_bound_dispatch_matches_the_named_functions():
    h = rvar(0.9, 0.99)
    m = MomentSpec(mu=0.5, sigma=1.5)
    assert bound(h, ShapeClass.SYMMETRIC, Side.SUP, m) == sup_symmetric(h, m)
    assert bound(h, ShapeClass.UNIMODAL_SYMMETRIC, Side.INF, m).value == pytest.approx(
        inf_us(h, m).value
    )


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(pwl_distortions())
def test_random_distortions_are_ordered(h):
    sup = sup_general(h, STANDARD)
    inf = inf_general(h, STANDARD)
    assert sup.value >= inf.value - 1e-9
    assert sup_symmetric(h, STANDARD).value <= sup.value + 1e-9
    if sup.attainable:
        assert validate_shape(sup.extremal, ShapeClass.GENERAL, STANDARD, tol=1e-7)
        assert rho(h, sup.extremal) == pytest.approx(sup.value, abs=1e-7)


RVAR_GRID = [
    (alpha, round(alpha + width, 10))
    for alpha in (0.05, 0.25, 0.45, 0.65, 0.85)
    for width in (0.02, 0.06, 0.11, 0.13, 0.14)
]


def _symmetric_rvar_sup(alpha, beta):
    if alpha >= 0.5:
        return math.sqrt(1.0 / (2.0 * (1.0 - alpha)))
    if alpha + beta <= 1.0:
        return 0.0
    return (alpha + beta - 1.0) / ((beta - alpha) * math.sqrt(2.0 * alpha))


@pytest.mark.parametrize("alpha, beta", RVAR_GRID)
def test_general_rvar_grid(alpha, beta):
    m = MomentSpec(mu=0.5, sigma=2.0)
    h = rvar(alpha, beta)
    assert sup_general(h, m).value == pytest.approx(
        0.5 + 2.0 * math.sqrt(alpha / (1.0 - alpha)), abs=1e-8
    )
    assert inf_general(h, m).value == pytest.approx(
        0.5 - 2.0 * math.sqrt((1.0 - beta) / beta), abs=1e-8
    )


@pytest.mark.parametrize("alpha, beta", RVAR_GRID)
def test_symmetric_rvar_grid(alpha, beta):
    m = MomentSpec(mu=0.5, sigma=2.0)
    h = rvar(alpha, beta)
    sup = sup_symmetric(h, m)
    inf = inf_symmetric(h, m)
    assert sup.value == pytest.approx(0.5 + 2.0 * _symmetric_rvar_sup(alpha, beta), abs=1e-8)
    assert inf.value == pytest.approx(
        0.5 - 2.0 * _symmetric_rvar_sup(1.0 - beta, 1.0 - alpha), abs=1e-8
    )
    assert inf.value <= sup.value


ALPHAS = [i / 20.0 for i in range(1, 20)]


def _tvar_sup_unimodal_closed_form(alpha):
    if alpha < 0.5:
        return math.sqrt(alpha * (8.0 / 9.0 - alpha)) / (1.0 - alpha)
    return math.sqrt(8.0 / (9.0 * (1.0 - alpha)) - 1.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_unimodal_tvar_closed_form_and_kernel_path_agree(alpha):
    result = tvar_sup_unimodal(alpha, STANDARD)
    assert result.value == pytest.approx(_tvar_sup_unimodal_closed_form(alpha), abs=1e-10)
    assert unimodal_kernel_integral(dual(tvar(alpha))) == pytest.approx(
        result.value, abs=1e-10
    )
    assert validate_shape(result.extremal, ShapeClass.UNIMODAL, STANDARD)
    assert rho(tvar(alpha), result.extremal) == pytest.approx(result.value, abs=1e-8)


@pytest.mark.parametrize("h", [tvar(0.75), ph(0.9, 0.75)], ids=["tvar", "ph"])
def test_unimodal_inf_bracket_with_an_edge_witness(h):
    inf = inf_unimodal(h, STANDARD)
    assert math.isfinite(inf.value)
    assert inf.value <= sup_unimodal(h, STANDARD).value
    assert inf.value >= inf_general(h, STANDARD).value - 1e-8
    if inf.bracket is not None and inf.bracket.witness is not None:
        witness = inf.bracket.witness
        assert validate_shape(witness, ShapeClass.UNIMODAL, STANDARD)
        assert rho(h, witness) == pytest.approx(inf.constructive_value, abs=1e-6)
