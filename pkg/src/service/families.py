"""Standardized (mean 0, variance 1) laws that attain the class bounds.

Every constructor returns a QuantileFunction labelled with its family so the
oracle can tell which parametric search is able to reproduce it.
"""

from __future__ import annotations

import math

from dtos.quantile_dto import QuantileFunction
from service.quantile_model import (
    SQRT3,
    UNIMODAL_TAIL_BRANCH,
    US_TAIL_BRANCH,
    build_quantile,
)
from utils.const import CandidateFamily, ShapeClass
from utils.exceptions import InputException, NotAttainableException


def two_point(q: float) -> QuantileFunction:
    """Mass q at -sqrt((1-q)/q) and 1-q at sqrt(q/(1-q))."""
    if not 0.0 < q < 1.0:
        raise InputException(f"two-point mass must lie in (0, 1), got {q}")
    low, high = -math.sqrt((1.0 - q) / q), math.sqrt(q / (1.0 - q))
    return build_quantile(
        [(0.0, q, low, 0.0), (q, 1.0, high, 0.0)], family=CandidateFamily.TWO_POINT
    )


def three_point(q: float) -> QuantileFunction:
    """Masses q at +-1/sqrt(2q) and 1-2q at the centre."""
    if not 0.0 < q <= 0.5:
        raise InputException(f"three-point mass must lie in (0, 1/2], got {q}")
    x = 1.0 / math.sqrt(2.0 * q)
    return build_quantile(
        [(0.0, q, -x, 0.0), (q, 1.0 - q, 0.0, 0.0), (1.0 - q, 1.0, x, 0.0)],
        family=CandidateFamily.THREE_POINT,
    )


def lower_atom_uniform(b: float) -> QuantileFunction:
    """Atom of mass b at the bottom of the support, uniform above it."""
    if not 0.0 <= b < 1.0:
        raise InputException(f"atom mass must lie in [0, 1), got {b}")
    scale = math.sqrt((1.0 - b) ** 3 * (1.0 / 3.0 + b))
    atom = -math.sqrt((1.0 - b) / (1.0 / 3.0 + b))
    return build_quantile(
        [(0.0, b, atom, 0.0), (b, 1.0, atom, 2.0 / scale)],
        family=CandidateFamily.LOWER_ATOM_UNIFORM,
    )


def upper_atom_uniform(b: float) -> QuantileFunction:
    """Uniform on the lower part, atom of mass 1-b at the top of the support."""
    if not 0.0 < b <= 1.0:
        raise InputException(f"uniform mass must lie in (0, 1], got {b}")
    scale = math.sqrt(b**3 * (4.0 - 3.0 * b))
    start, slope = SQRT3 * (b * b - 2.0 * b) / scale, 2.0 * SQRT3 / scale
    # the atom sits exactly where the uniform part ends
    atom = start + slope * b
    return build_quantile(
        [(0.0, b, start, slope), (b, 1.0, atom, 0.0)],
        family=CandidateFamily.UPPER_ATOM_UNIFORM,
    )


def centred_uniform(b: float) -> QuantileFunction:
    """Atom of mass 2b-1 at 0 flanked by two equal uniform pieces."""
    if not 0.5 <= b < 1.0:
        raise InputException(f"kink must lie in [1/2, 1), got {b}")
    slope = math.sqrt(3.0 / (2.0 * (1.0 - b) ** 3))
    return build_quantile(
        [
            (0.0, 1.0 - b, -slope * (1.0 - b), slope),
            (1.0 - b, b, 0.0, 0.0),
            (b, 1.0, 0.0, slope),
        ],
        family=CandidateFamily.CENTRED_UNIFORM,
    )


def uniform() -> QuantileFunction:
    return centred_uniform(0.5)


FAMILY_BUILDERS = {
    CandidateFamily.TWO_POINT: two_point,
    CandidateFamily.THREE_POINT: three_point,
    CandidateFamily.LOWER_ATOM_UNIFORM: lower_atom_uniform,
    CandidateFamily.UPPER_ATOM_UNIFORM: upper_atom_uniform,
    CandidateFamily.CENTRED_UNIFORM: centred_uniform,
}

FAMILY_DOMAINS = {
    CandidateFamily.TWO_POINT: (0.0, 1.0),
    CandidateFamily.THREE_POINT: (0.0, 0.5),
    CandidateFamily.LOWER_ATOM_UNIFORM: (0.0, 1.0),
    CandidateFamily.UPPER_ATOM_UNIFORM: (0.0, 1.0),
    CandidateFamily.CENTRED_UNIFORM: (0.5, 1.0),
}


def tail_extremal(shape: ShapeClass, v: float) -> QuantileFunction:
    """Standardized law with P(X >= v) equal to tail_bound(shape, v)."""
    if v < 0.0:
        raise InputException(f"threshold must be nonnegative, got {v}")
    if shape == ShapeClass.GENERAL:
        if v == 0.0:
            raise NotAttainableException("P(X >= 0) = 1 needs X = 0, which has no variance")
        return two_point(v * v / (1.0 + v * v))
    if shape == ShapeClass.SYMMETRIC:
        return three_point(0.5 / max(1.0, v) ** 2)
    if shape == ShapeClass.UNIMODAL:
        if v == 0.0:
            raise NotAttainableException("P(X >= 0) = 1 needs X = 0, which has no variance")
        if v < UNIMODAL_TAIL_BRANCH:
            return upper_atom_uniform(4.0 * v * v / (3.0 * (1.0 + v * v)))
        return lower_atom_uniform((3.0 * v * v - 1.0) / (3.0 * (1.0 + v * v)))
    if v < US_TAIL_BRANCH:
        return uniform()
    return centred_uniform(1.0 - 2.0 / (3.0 * v * v))
