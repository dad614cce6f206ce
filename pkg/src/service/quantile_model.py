from __future__ import annotations

import bisect
import logging
import math
from typing import Iterable, Optional

import numpy as np

from dtos.distortion_dto import DerivativeMeasure, DistortionFunction
from dtos.quantile_dto import MomentSpec, QuantileFunction, QuantileSegment
from service.distortion import derivative_measure, dual
from service.quadrature import affine_power_integral
from utils.const import JumpSide, ShapeClass
from utils.exceptions import InputException

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
UNIMODAL_TAIL_BRANCH = math.sqrt(5.0 / 3.0)
US_TAIL_BRANCH = 2.0 / SQRT3

_MERGE_TOL = 1e-12
_ULP_SLACK = 1e-15


def build_quantile(
    pieces: Iterable[tuple[float, float, float, float]], family=None
) -> QuantileFunction:
    """QuantileFunction from (lo, hi, start, slope) tuples; empty pieces are dropped."""
    segments = [
        QuantileSegment(lo=lo, hi=hi, start=start, slope=slope)
        for lo, hi, start, slope in pieces
        if hi > lo
    ]
    return QuantileFunction(segments=tuple(segments), family=family)


def constant(value: float) -> QuantileFunction:
    return build_quantile([(0.0, 1.0, value, 0.0)])


def _locate(Q: QuantileFunction, p: float, side: JumpSide) -> QuantileSegment:
    segments = Q.segments
    los = [segment.lo for segment in segments]
    if side == JumpSide.RIGHT and p < 1.0:
        return segments[bisect.bisect_right(los, p) - 1]
    if p <= 0.0:
        return segments[0]
    return segments[bisect.bisect_left(los, p) - 1]


def evaluate_quantile(
    Q: QuantileFunction, p: float, side: JumpSide = JumpSide.RIGHT
) -> float:
    """F^{-1+}(p) for side 'r', F^{-1}(p) for side 'l'.

    The one-sided value is taken from the segment on that side of p; at the
    ends of (0,1) the only available side is used.
    """
    if not 0.0 <= p <= 1.0:
        raise InputException(f"p must lie in [0, 1], got {p}")
    segment = _locate(Q, p, side)
    return segment.start + segment.slope * (p - segment.lo)


def mean(Q: QuantileFunction) -> float:
    return sum(
        (s.hi - s.lo) * (s.start + 0.5 * s.slope * (s.hi - s.lo)) for s in Q.segments
    )


def second_moment(Q: QuantileFunction) -> float:
    total = 0.0
    for s in Q.segments:
        w = s.hi - s.lo
        total += s.start**2 * w + s.start * s.slope * w**2 + s.slope**2 * w**3 / 3.0
    return total


def variance(Q: QuantileFunction) -> float:
    m = mean(Q)
    return second_moment(Q) - m * m


def affine(Q: QuantileFunction, mu: float, sigma: float) -> QuantileFunction:
    """The law of mu + sigma * X."""
    if sigma <= 0.0:
        raise InputException(f"sigma must be positive, got {sigma}")
    return build_quantile(
        [(s.lo, s.hi, mu + sigma * s.start, sigma * s.slope) for s in Q.segments],
        family=Q.family,
    )


def reflect(Q: QuantileFunction, center: float = 0.0) -> QuantileFunction:
    """The law of 2 * center - X, i.e. p -> 2 * center - Q(1 - p)."""
    return build_quantile(
        [
            (1.0 - s.hi, 1.0 - s.lo, 2.0 * center - s.end, s.slope)
            for s in reversed(Q.segments)
        ],
        family=Q.family,
    )


# ---------------------------------------------------------------------------
# distortion risk measure
# ---------------------------------------------------------------------------


def stieltjes(Q: QuantileFunction, measure: DerivativeMeasure) -> float:
    """int Q dg for g with derivative ``measure``.

    An atom where g takes its right value reads Q from the left and vice
    versa, which picks F^{-1} or F^{-1+} as the distortion's continuity
    requires.
    """
    total = 0.0
    for atom in measure.atoms:
        side = JumpSide.LEFT if atom.closed == JumpSide.RIGHT else JumpSide.RIGHT
        total += atom.mass * evaluate_quantile(Q, atom.location, side)
    for piece in measure.densities:
        for s in Q.segments:
            u, v = max(piece.lo, s.lo), min(piece.hi, s.hi)
            if v <= u:
                continue
            part = affine_power_integral(
                s.start,
                s.slope,
                piece.coef,
                piece.anchor_point,
                piece.exponent,
                u,
                v,
                origin=s.lo,
            )
            if part.divergent:
                logger.warning(f"rho diverges: {part.diagnostic}")
                return part.value
            total += part.value
    return total


def rho(h: DistortionFunction, Q: QuantileFunction) -> float:
    """rho_h of the law with quantile Q, as int Q d(dual h)."""
    return stieltjes(Q, derivative_measure(dual(h), 1))


# ---------------------------------------------------------------------------
# shape classes
# ---------------------------------------------------------------------------


def _merged_breakpoints(Q: QuantileFunction) -> list[float]:
    """Breakpoints of Q and of its mirror, with near-duplicates merged."""
    points = sorted(set(Q.breakpoints) | {1.0 - p for p in Q.breakpoints})
    merged = [points[0]]
    for p in points[1:]:
        if p - merged[-1] > _MERGE_TOL:
            merged.append(p)
    merged[-1] = 1.0
    return merged


def _is_symmetric(Q: QuantileFunction, mu: float, tol: float) -> bool:
    """Q(p) + Q(1-p) = 2 mu on the interior of every merged piece.

    Two interior points per piece pin down both affine pieces, and agreement
    off the breakpoints fixes the one-sided values at them too. Slack grows
    with the slopes, since p and 1 - p are only known to a few ulps.
    """
    points = _merged_breakpoints(Q)
    for a, b in zip(points, points[1:]):
        for p in (a + 0.25 * (b - a), a + 0.75 * (b - a)):
            low = _locate(Q, p, JumpSide.RIGHT)
            high = _locate(Q, 1.0 - p, JumpSide.LEFT)
            paired = low.start + low.slope * (p - low.lo)
            paired += high.start + high.slope * (1.0 - p - high.lo)
            slack = tol + _ULP_SLACK * (low.slope + high.slope)
            if abs(paired - 2.0 * mu) > slack:
                return False
    return True


def _is_unimodal(Q: QuantileFunction, tol: float) -> bool:
    segments = Q.segments
    for left, right in zip(segments, segments[1:]):
        if abs(right.start - left.end) > tol:
            return False
    slopes = [s.slope for s in segments]
    turn = slopes.index(min(slopes))
    falling = all(b <= a + tol for a, b in zip(slopes[:turn], slopes[1 : turn + 1]))
    rising = all(b >= a - tol for a, b in zip(slopes[turn:], slopes[turn + 1 :]))
    return falling and rising


def validate_shape(
    Q: QuantileFunction,
    shape: ShapeClass,
    moments: MomentSpec,
    tol: float = 1e-9,
) -> bool:
    """Moment match plus structural symmetry and unimodality checks.

    Unimodality is read off the quantile: no gaps in the support and a slope
    profile that falls then rises (flat runs are atoms at the mode).
    """
    scale = max(1.0, moments.sigma)
    if abs(mean(Q) - moments.mu) > tol * scale:
        return False
    if abs(variance(Q) - moments.sigma**2) > tol * scale * scale:
        return False
    if shape in (ShapeClass.SYMMETRIC, ShapeClass.UNIMODAL_SYMMETRIC):
        if not _is_symmetric(Q, moments.mu, tol * scale):
            return False
    if shape in (ShapeClass.UNIMODAL, ShapeClass.UNIMODAL_SYMMETRIC):
        if not _is_unimodal(Q, tol * scale):
            return False
    return True


def tail_bound(shape: ShapeClass, v: float) -> float:
    """Sharp upper bound on P((X - mu) / sigma >= v) over the class."""
    if v < 0.0:
        raise InputException(f"threshold must be nonnegative, got {v}")
    if shape == ShapeClass.GENERAL:
        return 1.0 / (1.0 + v * v)
    if shape == ShapeClass.SYMMETRIC:
        return 1.0 / (2.0 * max(1.0, v) ** 2)
    if shape == ShapeClass.UNIMODAL:
        if v < UNIMODAL_TAIL_BRANCH:
            return (3.0 - v * v) / (3.0 * (1.0 + v * v))
        return 4.0 / (9.0 * (1.0 + v * v))
    if v < US_TAIL_BRANCH:
        return 0.5 * (1.0 - v / SQRT3)
    return 2.0 / (9.0 * v * v)


def upper_tail_probability(Q: QuantileFunction, x: float, tol: float = 1e-12) -> float:
    """P(X >= x), counting values within tol of x as reaching it."""
    threshold = x - tol
    total = 0.0
    for s in Q.segments:
        if s.slope == 0.0:
            if s.start >= threshold:
                total += s.hi - s.lo
            continue
        crossing = s.lo + (threshold - s.start) / s.slope
        total += s.hi - min(max(crossing, s.lo), s.hi)
    return total


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def quantile_rows(
    Q: QuantileFunction, grid_size: Optional[int] = None
) -> list[tuple[float, float]]:
    """(p, q) rows at every segment end plus a uniform grid.

    Atoms show up as the same q at both ends of their mass interval.
    """
    rows = set()
    for s in Q.segments:
        rows.add((s.lo, s.start))
        rows.add((s.hi, s.end))
    if grid_size:
        for p in np.linspace(0.0, 1.0, grid_size):
            p = float(p)
            side = JumpSide.LEFT if p == 1.0 else JumpSide.RIGHT
            rows.add((p, evaluate_quantile(Q, p, side)))
    return sorted(rows)
