import math

import pytest

from dtos.distortion_dto import Atom, DensityPiece, DerivativeMeasure
from dtos.quadrature_dto import IntegralSpec, TabulatedKernel
from service.distortion import (
    derivative_measure,
    dual,
    identity,
    piecewise_constant,
    tvar,
    var,
)
from service.quadrature import (
    affine_power_integral,
    integrate,
    integrate_kernel,
    squared_norm,
)
from utils.const import Anchor, KernelName
from utils.exceptions import InputException, QuadratureException

CONSTANT_TWO = DerivativeMeasure(densities=(DensityPiece(lo=0.0, hi=1.0, coef=2.0),))


def test_total_mass_of_a_distortion_is_one():
    assert integrate_kernel(KernelName.ONE, derivative_measure(tvar(0.75))).value == (
        pytest.approx(1.0)
    )


def test_identity_kernel_on_lebesgue():
    assert integrate_kernel(KernelName.IDENTITY, derivative_measure(identity())).value == (
        pytest.approx(0.5)
    )


def test_atoms_count_on_half_open_intervals():
    measure = derivative_measure(var(0.9))
    assert integrate_kernel(KernelName.IDENTITY, measure).value == pytest.approx(0.1)
    assert integrate_kernel(KernelName.IDENTITY, measure, 0.2, 1.0).value == 0.0


def test_atom_at_one_counts_when_the_interval_ends_there():
    measure = derivative_measure(piecewise_constant([(1.0, 1.0)]))
    assert integrate_kernel(KernelName.IDENTITY, measure).value == 1.0


def test_unimodal_symmetric_kernels_against_constant_density():
    parts = [
        (2.0 / 3.0, KernelName.SQRT_P, 0.0, 1.0 / 3.0),
        (math.sqrt(3.0), KernelName.P_ONE_MINUS_P, 1.0 / 3.0, 2.0 / 3.0),
        (2.0 / 3.0, KernelName.SQRT_ONE_MINUS_P, 2.0 / 3.0, 1.0),
    ]
    total = sum(
        weight * integrate_kernel(kernel, CONSTANT_TWO, a, b).value
        for weight, kernel, a, b in parts
    )
    assert total == pytest.approx(29.0 * math.sqrt(3.0) / 81.0, abs=1e-10)


def test_unimodal_kernels_by_adaptive_quadrature():
    left = integrate_kernel(KernelName.UNIMODAL_LEFT, CONSTANT_TWO, 0.0, 0.5).value
    # sqrt(p (8 - 9p)) on [0, 1/2] has the antiderivative below
    def antiderivative(p):
        u = 9.0 * p - 4.0
        return (u * math.sqrt(16.0 - u * u) / 2.0 + 8.0 * math.asin(u / 4.0)) / 27.0

    expected = 2.0 * (antiderivative(0.5) - antiderivative(0.0))
    assert left == pytest.approx(expected, abs=1e-9)


def test_integrable_endpoint_singularity():
    measure = DerivativeMeasure(
        densities=(DensityPiece(lo=0.0, hi=1.0, coef=1.0, exponent=-1.2),)
    )
    value = integrate_kernel(KernelName.SQRT_P, measure)
    assert not value.divergent
    assert value.value == pytest.approx(1.0 / 0.3, rel=1e-8)


def test_divergent_density_reports_infinity():
    measure = DerivativeMeasure(
        densities=(DensityPiece(lo=0.0, hi=1.0, coef=1.0, exponent=-1.5),)
    )
    plain = integrate_kernel(KernelName.ONE, measure)
    assert plain.divergent and plain.value == math.inf
    assert "p = 0" in plain.diagnostic
    weighted = integrate_kernel(KernelName.SQRT_P, measure)
    assert weighted.divergent and weighted.value == math.inf


def test_divergence_keeps_the_sign_of_the_density():
    measure = DerivativeMeasure(
        densities=(
            DensityPiece(lo=0.5, hi=1.0, coef=-1.0, exponent=-2.0, anchor=Anchor.HI),
        )
    )
    value = integrate_kernel(KernelName.ONE, measure)
    assert value.divergent and value.value == -math.inf


def test_tabulated_kernel():
    table = TabulatedKernel(grid=(0.0, 1.0), values=(0.0, 1.0))
    measure = DerivativeMeasure(
        atoms=(Atom(location=0.25, mass=2.0),),
        densities=(DensityPiece(lo=0.0, hi=1.0, coef=1.0),),
    )
    value = integrate(IntegralSpec(table=table, measure=measure))
    assert value.value == pytest.approx(0.5 + 0.5)


def test_kernel_domain_is_enforced():
    with pytest.raises(InputException):
        integrate_kernel(KernelName.UNIMODAL_LEFT, CONSTANT_TWO, 0.0, 1.0)


def test_affine_power_integral_closed_form():
    # int_0^1 (1 + 2p) * 3 * p^0.5 dp = 3 * (2/3 + 4/5)
    value = affine_power_integral(1.0, 2.0, 3.0, 0.0, 0.5, 0.0, 1.0)
    assert value.value == pytest.approx(3.0 * (2.0 / 3.0 + 4.0 / 5.0))
    with pytest.raises(InputException):
        affine_power_integral(1.0, 0.0, 1.0, 0.5, -0.5, 0.0, 1.0)


def test_squared_norm_of_tvar_dual_derivative():
    measure = derivative_measure(dual(tvar(0.75)))
    norm = squared_norm(measure.densities, shift=1.0)
    assert norm.value == pytest.approx(3.0)


def test_squared_norm_diverges_for_steep_power():
    pieces = [DensityPiece(lo=0.0, hi=1.0, coef=1.0, exponent=-0.5)]
    assert squared_norm(pieces).divergent


def test_steep_short_segment_keeps_its_precision():
    lo = 0.999999999
    width = 1.0 - lo
    value = affine_power_integral(1.0, 5e13, 4.0, 0.0, 0.0, lo, 1.0, origin=lo)
    expected = 4.0 * (width + 5e13 * width * width / 2.0)
    assert value.value == pytest.approx(expected, rel=1e-9)


def test_short_interval_far_from_the_anchor():
    u, v = 0.5, 0.5 + 1e-6
    value = affine_power_integral(0.0, 1.0, 1.0, 0.0, -0.5, u, v, origin=u)
    assert value.value == pytest.approx(math.sqrt(2.0) * (v - u) ** 2 / 2.0, rel=1e-5)


def test_divergent_terms_of_both_signs_raise():
    measure = DerivativeMeasure(
        densities=(
            DensityPiece(lo=0.0, hi=0.5, coef=1.0, exponent=-1.5),
            DensityPiece(lo=0.5, hi=1.0, coef=-1.0, exponent=-2.0, anchor=Anchor.HI),
        )
    )
    with pytest.raises(QuadratureException) as excinfo:
        integrate_kernel(KernelName.ONE, measure)
    assert math.isnan(excinfo.value.estimate)
