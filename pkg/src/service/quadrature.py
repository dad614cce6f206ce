from __future__ import annotations

import logging
import math
import warnings
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from configs.settings import get_settings
from dtos.distortion_dto import DensityPiece, DerivativeMeasure
from dtos.quadrature_dto import IntegralSpec, IntegralValue, TabulatedKernel
from utils.const import KernelName
from utils.exceptions import InputException, QuadratureException

logger = logging.getLogger(__name__)

_EPSREL = 1e-12
_ERROR_SLACK = 1e3


class Kernel(NamedTuple):
    """K(p) = core(p) * p^order_zero * (1 - p)^order_one on ``domain``."""

    order_zero: float
    order_one: float
    core: Callable[[float], float]
    domain: tuple[float, float] = (0.0, 1.0)


def _unit(_: float) -> float:
    return 1.0


KERNELS: dict[KernelName, Kernel] = {
    KernelName.ONE: Kernel(0.0, 0.0, _unit),
    KernelName.IDENTITY: Kernel(1.0, 0.0, _unit),
    KernelName.SQRT_P: Kernel(0.5, 0.0, _unit),
    KernelName.SQRT_ONE_MINUS_P: Kernel(0.0, 0.5, _unit),
    KernelName.UNIMODAL_LEFT: Kernel(
        0.5, 0.0, lambda p: math.sqrt(max(8.0 - 9.0 * p, 0.0)), (0.0, 8.0 / 9.0)
    ),
    KernelName.UNIMODAL_RIGHT: Kernel(
        0.0, 0.5, lambda p: math.sqrt(max(9.0 * p - 1.0, 0.0)), (1.0 / 9.0, 1.0)
    ),
    KernelName.P_ONE_MINUS_P: Kernel(1.0, 1.0, _unit),
}


def _table_kernel(table: TabulatedKernel) -> Kernel:
    grid, values = np.asarray(table.grid), np.asarray(table.values)
    return Kernel(
        0.0,
        0.0,
        lambda p: float(np.interp(p, grid, values)),
        (float(grid[0]), float(grid[-1])),
    )


def kernel_value(kernel: Kernel, p: float) -> float:
    return kernel.core(p) * p**kernel.order_zero * (1.0 - p) ** kernel.order_one


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _power_antiderivative(k: float, t0: float, t1: float) -> Optional[float]:
    """int_{t0}^{t1} t^k dt, or None when it diverges at t0 = 0."""
    if t0 == 0.0:
        if k <= -1.0:
            return None
        return t1 ** (k + 1.0) / (k + 1.0)
    ratio = (t1 - t0) / t0
    if k == -1.0:
        return math.log1p(ratio)
    return t0 ** (k + 1.0) * math.expm1((k + 1.0) * math.log1p(ratio)) / (k + 1.0)


def _offset_moment(k: float, t0: float, t1: float) -> Optional[float]:
    """int_{t0}^{t1} (t - t0) * t^k dt, or None when it diverges at t0 = 0."""
    d = t1 - t0
    if k == 0.0:
        return 0.5 * d * d
    if t0 == 0.0:
        if k <= -2.0:
            return None
        return t1 ** (k + 2.0) / (k + 2.0)
    if d < t0:
        # short interval far from the anchor: the closed form cancels
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            value, _ = quad(
                lambda x: x * (1.0 + x) ** k, 0.0, d / t0, epsabs=0.0, epsrel=_EPSREL
            )
        return t0 ** (k + 2.0) * value
    if k == -1.0:
        return d - t0 * math.log(t1 / t0)
    if k == -2.0:
        return math.log(t1 / t0) - d / t1
    return (t1 ** (k + 2.0) - t0 ** (k + 2.0)) / (k + 2.0) - t0 * (
        t1 ** (k + 1.0) - t0 ** (k + 1.0)
    ) / (k + 1.0)


def affine_power_integral(
    intercept: float,
    slope: float,
    coef: float,
    anchor: float,
    exponent: float,
    u: float,
    v: float,
    origin: float = 0.0,
) -> IntegralValue:
    """int_u^v (intercept + slope * (p - origin)) * coef * |p - anchor|^exponent dp.

    ``anchor`` must lie outside (u, v). The affine factor is re-expanded about
    the end of [u, v] nearest the anchor, so steep factors on short intervals
    keep their precision when ``origin`` sits inside the interval.
    """
    if v <= u or coef == 0.0:
        return IntegralValue(value=0.0)
    if anchor <= u:
        t0, t1, near, linear = u - anchor, v - anchor, u, slope
    elif anchor >= v:
        t0, t1, near, linear = anchor - v, anchor - u, v, -slope
    else:
        raise InputException(f"anchor {anchor} lies inside ({u}, {v})")
    at_near = intercept + slope * (near - origin)

    terms = (
        (linear, _offset_moment),
        (at_near, _power_antiderivative),
    )
    total = 0.0
    for factor, antiderivative in terms:
        if factor == 0.0:
            continue
        part = antiderivative(exponent, t0, t1)
        if part is None:
            sign = math.copysign(1.0, coef * factor)
            return IntegralValue(
                value=sign * math.inf,
                divergent=True,
                diagnostic=(
                    f"power density |p - {anchor:g}|^{exponent:g} is not "
                    f"integrable at p = {anchor:g}"
                ),
            )
        total += coef * factor * part
    return IntegralValue(value=total)


def _closed_constant(name: KernelName, c: float, u: float, v: float) -> Optional[float]:
    if name == KernelName.ONE:
        return c * (v - u)
    if name == KernelName.IDENTITY:
        return c * (v * v - u * u) / 2.0
    if name == KernelName.SQRT_P:
        return c * 2.0 / 3.0 * (v**1.5 - u**1.5)
    if name == KernelName.SQRT_ONE_MINUS_P:
        return c * 2.0 / 3.0 * ((1.0 - u) ** 1.5 - (1.0 - v) ** 1.5)
    if name == KernelName.P_ONE_MINUS_P:
        return c * ((v * v - u * u) / 2.0 - (v**3 - u**3) / 3.0)
    return None


# ---------------------------------------------------------------------------
# adaptive pieces
# ---------------------------------------------------------------------------


def _adaptive(
    f: Callable[[float], float],
    u: float,
    v: float,
    left_power: float,
    right_power: float,
    tol: float,
    limit: int,
) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if left_power != 0.0 or right_power != 0.0:
            value, error = quad(
                f,
                u,
                v,
                weight="alg",
                wvar=(left_power, right_power),
                epsabs=tol,
                epsrel=_EPSREL,
                limit=limit,
            )
        else:
            value, error = quad(f, u, v, epsabs=tol, epsrel=_EPSREL, limit=limit)
    if error > _ERROR_SLACK * tol + _EPSREL * abs(value) * _ERROR_SLACK:
        raise QuadratureException(
            f"Quadrature on [{u:g}, {v:g}] stopped at error {error:.3e} "
            f"(tolerance {tol:.1e})",
            estimate=value,
        )
    return value


def _piece_integral(
    name: Optional[KernelName],
    kernel: Kernel,
    piece: DensityPiece,
    u: float,
    v: float,
    tol: float,
    limit: int,
) -> IntegralValue:
    c, e, x0 = piece.coef, piece.exponent, piece.anchor_point
    if c == 0.0:
        return IntegralValue(value=0.0)
    if e == 0.0 and name is not None:
        closed = _closed_constant(name, c, u, v)
        if closed is not None:
            return IntegralValue(value=closed)
    if name == KernelName.ONE:
        return affine_power_integral(1.0, 0.0, c, x0, e, u, v)
    if name == KernelName.IDENTITY:
        return affine_power_integral(0.0, 1.0, c, x0, e, u, v)

    singular = e != 0.0
    left_power = (e if singular and x0 == u else 0.0) + (
        kernel.order_zero if u == 0.0 else 0.0
    )
    right_power = (e if singular and x0 == v else 0.0) + (
        kernel.order_one if v == 1.0 else 0.0
    )
    if left_power <= -1.0 or right_power <= -1.0:
        at = u if left_power <= -1.0 else v
        return IntegralValue(
            value=math.copysign(math.inf, c),
            divergent=True,
            diagnostic=(
                f"density {c:g}*|p-{x0:g}|^{e:g} against the kernel is not "
                f"integrable at p = {at:g}"
            ),
        )

    def integrand(p: float) -> float:
        value = c * kernel.core(p)
        if u != 0.0:
            value *= p**kernel.order_zero
        if v != 1.0:
            value *= (1.0 - p) ** kernel.order_one
        if singular and x0 not in (u, v):
            value *= abs(p - x0) ** e
        return value

    return IntegralValue(
        value=_adaptive(integrand, u, v, left_power, right_power, tol, limit)
    )


def integrate(spec: IntegralSpec) -> IntegralValue:
    """Stieltjes integral of a kernel against a derivative measure on [a, b].

    Atoms count on a <= p < b, plus p = 1 when b = 1. A power density whose
    exponent plus the kernel's vanishing order at the anchor is <= -1 makes
    the result infinite with the sign of its coefficient. Divergent terms of
    both signs leave the integral undefined and raise QuadratureException.
    """
    settings = get_settings()
    name = spec.kernel
    kernel = KERNELS[name] if name is not None else _table_kernel(spec.table)
    a, b = spec.a, spec.b
    lo, hi = kernel.domain
    if a < lo - 1e-15 or b > hi + 1e-15:
        raise InputException(
            f"Kernel domain [{lo:g}, {hi:g}] does not contain [{a:g}, {b:g}]"
        )

    total = 0.0
    for atom in spec.measure.atoms:
        p = atom.location
        if a <= p < b or (b == 1.0 and p == 1.0):
            total += atom.mass * kernel_value(kernel, p)

    divergent: list[IntegralValue] = []
    for piece in spec.measure.densities:
        u, v = max(a, piece.lo), min(b, piece.hi)
        if v <= u:
            continue
        part = _piece_integral(name, kernel, piece, u, v, spec.tol, settings.quad_limit)
        if part.divergent:
            divergent.append(part)
        else:
            total += part.value

    if divergent:
        signs = {math.copysign(1.0, part.value) for part in divergent}
        if len(signs) > 1:
            raise QuadratureException(
                "Divergent terms of both signs: "
                + "; ".join(part.diagnostic for part in divergent),
                estimate=math.nan,
            )
        first = divergent[0]
        logger.warning(f"Divergent integral: {first.diagnostic}")
        return first
    return IntegralValue(value=total)


def integrate_kernel(
    kernel: KernelName,
    measure: DerivativeMeasure,
    a: float = 0.0,
    b: float = 1.0,
    tol: Optional[float] = None,
) -> IntegralValue:
    tol = tol if tol is not None else get_settings().quad_tol
    return integrate(IntegralSpec(kernel=kernel, measure=measure, a=a, b=b, tol=tol))


# ---------------------------------------------------------------------------
# L2 norms of derivative pieces
# ---------------------------------------------------------------------------


def _product_integral(
    factors: Sequence[DensityPiece], u: float, v: float, tol: float, limit: int
) -> IntegralValue:
    """int_u^v prod(coef * |p - anchor|^exponent) dp over pieces covering [u, v]."""
    coef = math.prod(piece.coef for piece in factors)
    if coef == 0.0:
        return IntegralValue(value=0.0)
    left_power = sum(
        piece.exponent for piece in factors if piece.exponent and piece.anchor_point == u
    )
    right_power = sum(
        piece.exponent for piece in factors if piece.exponent and piece.anchor_point == v
    )
    if left_power <= -1.0 or right_power <= -1.0:
        return IntegralValue(
            value=math.copysign(math.inf, coef),
            divergent=True,
            diagnostic=f"squared derivative is not integrable on [{u:g}, {v:g}]",
        )
    free = [
        piece
        for piece in factors
        if piece.exponent and piece.anchor_point not in (u, v)
    ]
    if not free:
        if left_power == 0.0 and right_power == 0.0:
            return IntegralValue(value=coef * (v - u))
        if left_power == 0.0 or right_power == 0.0:
            anchor = u if left_power != 0.0 else v
            power = left_power or right_power
            return affine_power_integral(1.0, 0.0, coef, anchor, power, u, v)

    def integrand(p: float) -> float:
        value = coef
        for piece in free:
            value *= abs(p - piece.anchor_point) ** piece.exponent
        return value

    return IntegralValue(
        value=_adaptive(integrand, u, v, left_power, right_power, tol, limit)
    )


def squared_norm(
    pieces: Sequence[DensityPiece],
    shift: float = 0.0,
    a: float = 0.0,
    b: float = 1.0,
    tol: Optional[float] = None,
) -> IntegralValue:
    """int_a^b (sum of pieces - shift)^2 dp; pieces may overlap."""
    settings = get_settings()
    tol = tol if tol is not None else settings.quad_tol
    clipped = []
    for piece in pieces:
        u, v = max(a, piece.lo), min(b, piece.hi)
        if v > u and piece.coef != 0.0:
            clipped.append((piece, u, v))

    total = shift * shift * (b - a)
    for i, (piece, u, v) in enumerate(clipped):
        square = _product_integral([piece, piece], u, v, tol, settings.quad_limit)
        if square.divergent:
            return IntegralValue(
                value=math.inf, divergent=True, diagnostic=square.diagnostic
            )
        total += square.value
        if shift:
            linear = affine_power_integral(
                1.0, 0.0, piece.coef, piece.anchor_point, piece.exponent, u, v
            )
            if linear.divergent:
                return IntegralValue(
                    value=math.inf, divergent=True, diagnostic=linear.diagnostic
                )
            total -= 2.0 * shift * linear.value
        for other, s, t in clipped[i + 1:]:
            lo, hi = max(u, s), min(v, t)
            if hi <= lo:
                continue
            cross = _product_integral([piece, other], lo, hi, tol, settings.quad_limit)
            if cross.divergent:
                return IntegralValue(
                    value=math.copysign(math.inf, cross.value),
                    divergent=True,
                    diagnostic=cross.diagnostic,
                )
            total += 2.0 * cross.value
    return IntegralValue(value=max(total, 0.0))
