from __future__ import annotations

import logging
import math
from typing import Optional

from dtos.bound_dto import BoundResult
from dtos.quantile_dto import MomentSpec, QuantileFunction
from service.families import (
    centred_uniform,
    lower_atom_uniform,
    three_point,
    two_point,
    upper_atom_uniform,
)
from service.quantile_model import SQRT3, affine, reflect
from utils.const import Method, ShapeClass, Side, VaRKind
from utils.exceptions import InputException, NotAttainableException

logger = logging.getLogger(__name__)

UNIMODAL_BRANCH = 5.0 / 6.0


def _check_level(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InputException(f"alpha must lie in (0, 1), got {alpha}")


def var_sup_value(shape: ShapeClass, alpha: float) -> float:
    """Standardized sup of the alpha-quantile over the class."""
    _check_level(alpha)
    a = alpha
    if shape == ShapeClass.GENERAL:
        return math.sqrt(a / (1.0 - a))
    if shape == ShapeClass.SYMMETRIC:
        return math.sqrt(1.0 / (2.0 * (1.0 - a))) if a >= 0.5 else 0.0
    if shape == ShapeClass.UNIMODAL:
        if a < UNIMODAL_BRANCH:
            return math.sqrt(3.0 * a / (4.0 - 3.0 * a))
        return math.sqrt(4.0 / (9.0 * (1.0 - a)) - 1.0)
    if a < 0.5:
        return 0.0
    if a < UNIMODAL_BRANCH:
        return SQRT3 * (2.0 * a - 1.0)
    return math.sqrt(2.0 / (9.0 * (1.0 - a)))


def var_sup_attainable(shape: ShapeClass, kind: VaRKind, alpha: float) -> bool:
    if shape == ShapeClass.GENERAL:
        return kind == VaRKind.RIGHT
    if shape == ShapeClass.SYMMETRIC and alpha >= 0.5:
        return kind == VaRKind.RIGHT
    return True


def _sup_extremal(shape: ShapeClass, alpha: float) -> QuantileFunction:
    a = alpha
    if shape == ShapeClass.GENERAL:
        return two_point(a)
    if shape == ShapeClass.SYMMETRIC:
        return three_point(1.0 - a) if a >= 0.5 else three_point(a / 2.0)
    if shape == ShapeClass.UNIMODAL:
        if a < UNIMODAL_BRANCH:
            return upper_atom_uniform(a)
        return lower_atom_uniform(3.0 * a - 2.0)
    if a < 0.5:
        return centred_uniform(1.0 - a)
    if a < UNIMODAL_BRANCH:
        return centred_uniform(0.5)
    return centred_uniform(3.0 * a - 2.0)


def _flip(kind: VaRKind) -> VaRKind:
    return VaRKind.RIGHT if kind == VaRKind.LEFT else VaRKind.LEFT


def var_bound(
    shape: ShapeClass,
    side: Side,
    kind: VaRKind,
    alpha: float,
    moments: MomentSpec,
) -> BoundResult:
    """Sup or inf of VaR- / VaR+ at alpha over the class.

    Both kinds share the value; only attainability differs. The inf is the
    reflected sup of the opposite kind at 1 - alpha.
    """
    _check_level(alpha)
    if side == Side.SUP:
        standard = var_sup_value(shape, alpha)
        attainable = var_sup_attainable(shape, kind, alpha)
    else:
        standard = -var_sup_value(shape, 1.0 - alpha)
        attainable = var_sup_attainable(shape, _flip(kind), 1.0 - alpha)
    extremal = None
    diagnostic = None
    if attainable:
        extremal = extremal_var_distribution(shape, side, alpha, moments, kind)
    else:
        diagnostic = (
            f"{kind.value} bound over {shape.value} is approached but not attained"
        )
        logger.warning(diagnostic)
    return BoundResult(
        side=side,
        value=moments.mu + moments.sigma * standard,
        method=Method.CLOSED_FORM,
        attainable=attainable,
        extremal=extremal,
        diagnostic=diagnostic,
    )


def extremal_var_distribution(
    shape: ShapeClass,
    side: Side,
    alpha: float,
    moments: MomentSpec,
    kind: Optional[VaRKind] = None,
) -> QuantileFunction:
    """The law attaining the VaR bound; VaR+ for sup and VaR- for inf by default."""
    _check_level(alpha)
    if kind is None:
        kind = VaRKind.RIGHT if side == Side.SUP else VaRKind.LEFT
    if side == Side.SUP:
        if not var_sup_attainable(shape, kind, alpha):
            raise NotAttainableException(
                f"sup of {kind.value} at {alpha} over {shape.value} is not attained; "
                f"use {VaRKind.RIGHT.value}"
            )
        return affine(_sup_extremal(shape, alpha), moments.mu, moments.sigma)
    if not var_sup_attainable(shape, _flip(kind), 1.0 - alpha):
        raise NotAttainableException(
            f"inf of {kind.value} at {alpha} over {shape.value} is not attained; "
            f"use {VaRKind.LEFT.value}"
        )
    law = reflect(_sup_extremal(shape, 1.0 - alpha))
    return affine(law, moments.mu, moments.sigma)
