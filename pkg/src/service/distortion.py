from __future__ import annotations

import bisect
import logging
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from configs.settings import get_settings
from dtos.distortion_dto import (
    Atom,
    DensityPiece,
    DerivativeMeasure,
    DistortionClassification,
    DistortionFunction,
    StepPoint,
)
from utils.const import Anchor, DistortionKind, JumpSide
from utils.exceptions import DistortionException, InputException

logger = logging.getLogger(__name__)

_P_TOL = 1e-14
_SLOPE_TOL = 1e-12


class Knot(NamedTuple):
    """Left limit, value and right limit of h at p. h is affine between knots."""

    p: float
    left: float
    value: float
    right: float


def _build(**fields) -> DistortionFunction:
    try:
        return DistortionFunction(**fields)
    except ValidationError as exc:
        detail = exc.errors()[0]["msg"]
        raise DistortionException(f"Invalid distortion: {detail}") from exc


def identity() -> DistortionFunction:
    return _build(kind=DistortionKind.IDENTITY)


def var(alpha: float) -> DistortionFunction:
    """h(p) = 1{p > 1 - alpha}, the distortion of the left quantile at alpha."""
    return _build(kind=DistortionKind.VAR, alpha=alpha)


def var_plus(alpha: float) -> DistortionFunction:
    """h(p) = 1{p >= 1 - alpha}, the distortion of the right quantile at alpha."""
    return _build(kind=DistortionKind.VAR_PLUS, alpha=alpha)


def tvar(alpha: float) -> DistortionFunction:
    return _build(kind=DistortionKind.TVAR, alpha=alpha)


def rvar(alpha: float, beta: float) -> DistortionFunction:
    return _build(kind=DistortionKind.RVAR, alpha=alpha, beta=beta)


def ph(alpha: float, r: float, dual: bool = False) -> DistortionFunction:
    """Capped power transform h(p) = min{(p / (1 - alpha))^r, 1}."""
    return _build(kind=DistortionKind.PH, alpha=alpha, r=r, dual=dual)


def piecewise_linear(
    points: Iterable[Sequence[float]], jump_side: JumpSide = JumpSide.RIGHT
) -> DistortionFunction:
    breakpoints = tuple((float(p), float(v)) for p, v in points)
    return _build(
        kind=DistortionKind.PIECEWISE_LINEAR,
        breakpoints=breakpoints,
        jump_side=jump_side,
    )


def piecewise_constant(
    steps: Iterable[Union[StepPoint, Sequence]],
) -> DistortionFunction:
    points = []
    for step in steps:
        if isinstance(step, StepPoint):
            points.append(step)
            continue
        t, level, *rest = step
        side = JumpSide(rest[0]) if rest else JumpSide.RIGHT
        points.append(StepPoint(t=float(t), level=float(level), side=side))
    return _build(kind=DistortionKind.PIECEWISE_CONSTANT, steps=tuple(points))


# ---------------------------------------------------------------------------
# knot representation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1024)
def knots(h: DistortionFunction) -> tuple[Knot, ...]:
    kind = h.kind
    start, end = Knot(0.0, 0.0, 0.0, 0.0), Knot(1.0, 1.0, 1.0, 1.0)
    if kind == DistortionKind.PH:
        raise DistortionException("ph has no finite knot representation")
    if kind == DistortionKind.IDENTITY:
        return (start, end)
    if kind == DistortionKind.VAR:
        return (start, Knot(1.0 - h.alpha, 0.0, 0.0, 1.0), end)
    if kind == DistortionKind.VAR_PLUS:
        return (start, Knot(1.0 - h.alpha, 0.0, 1.0, 1.0), end)
    if kind == DistortionKind.TVAR:
        return (start, Knot(1.0 - h.alpha, 1.0, 1.0, 1.0), end)
    if kind == DistortionKind.RVAR:
        return (
            start,
            Knot(1.0 - h.beta, 0.0, 0.0, 0.0),
            Knot(1.0 - h.alpha, 1.0, 1.0, 1.0),
            end,
        )
    if kind == DistortionKind.PIECEWISE_LINEAR:
        return _pwl_knots(h)
    return _step_knots(h)


def _pwl_knots(h: DistortionFunction) -> tuple[Knot, ...]:
    points = h.breakpoints
    result = []
    i = 0
    while i < len(points):
        p, v = points[i]
        if i + 1 < len(points) and points[i + 1][0] == p:
            lower, upper = v, points[i + 1][1]
            if p == 0.0:
                value = lower
            elif p == 1.0:
                value = upper
            else:
                value = upper if h.jump_side == JumpSide.RIGHT else lower
            result.append(Knot(p, lower, value, upper))
            i += 2
        else:
            result.append(Knot(p, v, v, v))
            i += 1
    return tuple(result)


def _step_knots(h: DistortionFunction) -> tuple[Knot, ...]:
    result = []
    if h.steps[0].t > 0.0:
        result.append(Knot(0.0, 0.0, 0.0, 0.0))
    level = 0.0
    for step in h.steps:
        if step.t == 0.0:
            value = level
        elif step.t == 1.0:
            value = step.level
        else:
            value = step.level if step.side == JumpSide.RIGHT else level
        result.append(Knot(step.t, level, value, step.level))
        level = step.level
    if h.steps[-1].t < 1.0:
        result.append(Knot(1.0, 1.0, 1.0, 1.0))
    return tuple(result)


def _slopes(ks: Sequence[Knot]) -> list[float]:
    return [(b.left - a.right) / (b.p - a.p) for a, b in zip(ks, ks[1:])]


def _from_knots(ks: Sequence[Knot], as_steps: bool = False) -> DistortionFunction:
    if as_steps:
        steps = [
            StepPoint(
                t=k.p,
                level=k.right,
                side=JumpSide.RIGHT if k.value == k.right else JumpSide.LEFT,
            )
            for k in ks
            if k.right != k.left
        ]
        return _build(kind=DistortionKind.PIECEWISE_CONSTANT, steps=tuple(steps))

    breakpoints: list[tuple[float, float]] = []
    sides = set()
    for k in ks:
        if k.left != k.right:
            breakpoints.extend([(k.p, k.left), (k.p, k.right)])
            if 0.0 < k.p < 1.0:
                sides.add(JumpSide.RIGHT if k.value == k.right else JumpSide.LEFT)
        else:
            breakpoints.append((k.p, k.value))
    if len(sides) > 1:
        raise DistortionException(
            "Jumps with mixed continuity sides need the steps form"
        )
    jump_side = sides.pop() if sides else JumpSide.RIGHT
    return _build(
        kind=DistortionKind.PIECEWISE_LINEAR,
        breakpoints=tuple(breakpoints),
        jump_side=jump_side,
    )


def _knot_eval(ks: Sequence[Knot], p: float, field: str) -> float:
    ps = [k.p for k in ks]
    i = bisect.bisect_left(ps, p - _P_TOL)
    if i < len(ks) and abs(ks[i].p - p) <= _P_TOL:
        return getattr(ks[i], field)
    lo, hi = ks[i - 1], ks[i]
    weight = (p - lo.p) / (hi.p - lo.p)
    return lo.right + weight * (hi.left - lo.right)


def _ph_value(h: DistortionFunction, p: float) -> float:
    alpha, r = h.alpha, h.r
    if h.dual:
        if p <= alpha:
            return 0.0
        return 1.0 - ((1.0 - p) / (1.0 - alpha)) ** r
    if p >= 1.0 - alpha:
        return 1.0
    return (p / (1.0 - alpha)) ** r


def _check_level(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InputException(f"p must lie in [0, 1], got {p}")


def evaluate(h: DistortionFunction, p: float) -> float:
    """h(p), honouring the declared side at jumps."""
    _check_level(p)
    if h.kind == DistortionKind.PH:
        return _ph_value(h, p)
    return _knot_eval(knots(h), p, "value")


def left_limit(h: DistortionFunction, p: float) -> float:
    _check_level(p)
    if h.kind == DistortionKind.PH:
        return _ph_value(h, p)
    return _knot_eval(knots(h), p, "left")


def right_limit(h: DistortionFunction, p: float) -> float:
    _check_level(p)
    if h.kind == DistortionKind.PH:
        return _ph_value(h, p)
    return _knot_eval(knots(h), p, "right")


# ---------------------------------------------------------------------------
# dual, classification, envelopes
# ---------------------------------------------------------------------------


def dual(h: DistortionFunction) -> DistortionFunction:
    """p -> 1 - h(1 - p). Left and right continuity swap."""
    kind = h.kind
    if kind == DistortionKind.IDENTITY:
        return h
    if kind == DistortionKind.VAR:
        return var_plus(1.0 - h.alpha)
    if kind == DistortionKind.VAR_PLUS:
        return var(1.0 - h.alpha)
    if kind == DistortionKind.PH:
        return h.model_copy(update={"dual": not h.dual})
    mirrored = [
        Knot(1.0 - k.p, 1.0 - k.right, 1.0 - k.value, 1.0 - k.left)
        for k in reversed(knots(h))
    ]
    return _from_knots(mirrored, as_steps=kind == DistortionKind.PIECEWISE_CONSTANT)


def classify(h: DistortionFunction) -> DistortionClassification:
    if h.kind == DistortionKind.PH:
        return DistortionClassification(
            is_simple=False,
            is_concave=not h.dual,
            is_convex=h.dual,
            left_continuous=True,
            right_continuous=True,
            continuous=True,
            h_zero_plus=0.0,
            h_one_minus=1.0,
            boundary_ok=True,
        )
    ks = knots(h)
    slopes = _slopes(ks)
    interior = ks[1:-1]
    interior_jump = any(k.left != k.right for k in interior)
    jump_at_zero = ks[0].right != ks[0].value
    jump_at_one = ks[-1].left != ks[-1].value
    nonincreasing = all(b <= a + _SLOPE_TOL for a, b in zip(slopes, slopes[1:]))
    nondecreasing = all(b >= a - _SLOPE_TOL for a, b in zip(slopes, slopes[1:]))
    left_continuous = all(k.value == k.left for k in interior) and not jump_at_one
    right_continuous = all(k.value == k.right for k in interior) and not jump_at_zero
    h_zero_plus, h_one_minus = ks[0].right, ks[-1].left
    return DistortionClassification(
        is_simple=all(abs(s) <= _SLOPE_TOL for s in slopes),
        is_concave=not interior_jump and not jump_at_one and nonincreasing,
        is_convex=not interior_jump and not jump_at_zero and nondecreasing,
        left_continuous=left_continuous,
        right_continuous=right_continuous,
        continuous=left_continuous and right_continuous,
        h_zero_plus=h_zero_plus,
        h_one_minus=h_one_minus,
        boundary_ok=h_zero_plus == 0.0 and h_one_minus == 1.0,
    )


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    hull: list[tuple[float, float]] = []
    for point in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0.0:
            hull.pop()
        hull.append(point)
    return hull


def _upper_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    hull: list[tuple[float, float]] = []
    for point in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) >= 0.0:
            hull.pop()
        hull.append(point)
    return hull


def _grid_envelope(
    h: DistortionFunction, resolution: Optional[int], lower: bool
) -> DistortionFunction:
    resolution = resolution or get_settings().envelope_resolution
    grid = np.linspace(0.0, 1.0, resolution)
    points = [(float(p), evaluate(h, float(p))) for p in grid]
    hull = lower_hull(points) if lower else _upper_hull(points)
    logger.debug(f"Grid envelope of {h.kind.value} on {resolution} points")
    return _from_knots([Knot(x, y, y, y) for x, y in hull])


def convex_envelope(
    h: DistortionFunction, resolution: Optional[int] = None, sample: bool = False
) -> DistortionFunction:
    """Greatest convex minorant h_*.

    Exact for knot forms: a jump contributes its lower side to the hull so the
    envelope bridges it with a chord. ``sample`` or an explicit ``resolution``
    switches ph to a hull of grid samples (``envelope_resolution`` points by
    default) whose slopes are accurate to O(1/resolution).
    """
    if h.kind == DistortionKind.PH and (sample or resolution is not None):
        return _grid_envelope(h, resolution, lower=True)
    cls = classify(h)
    if cls.is_convex:
        return h
    if cls.is_concave:
        return identity()
    ks = knots(h)
    points = [(0.0, ks[0].value)]
    points += [(k.p, min(k.left, k.value, k.right)) for k in ks[1:-1]]
    points.append((1.0, ks[-1].left))
    hull = lower_hull(points)
    out = [Knot(x, y, y, y) for x, y in hull[:-1]]
    out.append(Knot(1.0, hull[-1][1], 1.0, 1.0))
    return _from_knots(out)


def concave_envelope(
    h: DistortionFunction, resolution: Optional[int] = None, sample: bool = False
) -> DistortionFunction:
    """Least concave majorant h^*; mirror image of convex_envelope."""
    if h.kind == DistortionKind.PH and (sample or resolution is not None):
        return _grid_envelope(h, resolution, lower=False)
    cls = classify(h)
    if cls.is_concave:
        return h
    if cls.is_convex:
        return identity()
    ks = knots(h)
    points = [(0.0, ks[0].right)]
    points += [(k.p, max(k.left, k.value, k.right)) for k in ks[1:-1]]
    points.append((1.0, ks[-1].value))
    hull = _upper_hull(points)
    out = [Knot(0.0, 0.0, 0.0, hull[0][1])]
    out += [Knot(x, y, y, y) for x, y in hull[1:]]
    return _from_knots(out)


# ---------------------------------------------------------------------------
# derivative measures
# ---------------------------------------------------------------------------


def _ph_constant(h: DistortionFunction) -> float:
    return h.r / (1.0 - h.alpha) ** h.r


def derivative_pieces(h: DistortionFunction) -> list[DensityPiece]:
    """The right derivative of h as pieces tiling [0, 1], zero pieces included."""
    if h.kind == DistortionKind.PH:
        c, alpha, exponent = _ph_constant(h), h.alpha, h.r - 1.0
        if h.dual:
            return [
                DensityPiece(lo=0.0, hi=alpha, coef=0.0),
                DensityPiece(
                    lo=alpha, hi=1.0, coef=c, exponent=exponent, anchor=Anchor.HI
                ),
            ]
        return [
            DensityPiece(lo=0.0, hi=1.0 - alpha, coef=c, exponent=exponent),
            DensityPiece(lo=1.0 - alpha, hi=1.0, coef=0.0),
        ]
    ks = knots(h)
    return [
        DensityPiece(lo=a.p, hi=b.p, coef=slope)
        for a, b, slope in zip(ks, ks[1:], _slopes(ks))
    ]


def _knot_side(k: Knot) -> JumpSide:
    if k.p == 0.0:
        return JumpSide.LEFT
    if k.p == 1.0:
        return JumpSide.RIGHT
    return JumpSide.RIGHT if k.value == k.right else JumpSide.LEFT


def derivative_measure(
    h: DistortionFunction, order: int = 1, side: JumpSide = JumpSide.RIGHT
) -> DerivativeMeasure:
    """dh (order 1) or d(h') (order 2) as atoms plus densities.

    Order-1 atoms carry the side h takes at the jump. Order-2 atoms sit at
    interior kinks and carry ``side``, the one-sided derivative described.
    """
    if order not in (1, 2):
        raise DistortionException(f"Unsupported derivative order {order}")
    if order == 1:
        return _first_measure(h, side)
    return _second_measure(h, side)


def _first_measure(h: DistortionFunction, side: JumpSide) -> DerivativeMeasure:
    if h.kind == DistortionKind.PH:
        pieces = [p for p in derivative_pieces(h) if p.coef != 0.0]
        return DerivativeMeasure(densities=tuple(pieces), order=1, side=side)
    ks = knots(h)
    atoms = [
        Atom(location=k.p, mass=k.right - k.left, closed=_knot_side(k))
        for k in ks
        if k.right != k.left
    ]
    densities = [p for p in derivative_pieces(h) if abs(p.coef) > 0.0]
    return DerivativeMeasure(
        atoms=tuple(atoms), densities=tuple(densities), order=1, side=side
    )


def _second_measure(h: DistortionFunction, side: JumpSide) -> DerivativeMeasure:
    if h.kind == DistortionKind.PH:
        c, alpha, r = _ph_constant(h), h.alpha, h.r
        densities = []
        if h.dual:
            if r < 1.0:
                densities.append(
                    DensityPiece(
                        lo=alpha,
                        hi=1.0,
                        coef=c * (1.0 - r),
                        exponent=r - 2.0,
                        anchor=Anchor.HI,
                    )
                )
            atom = Atom(location=alpha, mass=r / (1.0 - alpha), closed=side)
        else:
            if r < 1.0:
                densities.append(
                    DensityPiece(
                        lo=0.0, hi=1.0 - alpha, coef=c * (r - 1.0), exponent=r - 2.0
                    )
                )
            atom = Atom(location=1.0 - alpha, mass=-r / (1.0 - alpha), closed=side)
        return DerivativeMeasure(
            atoms=(atom,), densities=tuple(densities), order=2, side=side
        )

    ks = knots(h)
    if any(k.left != k.right for k in ks[1:-1]):
        raise DistortionException(
            f"{h.kind.value} has interior jumps; its derivative has no measure"
        )
    slopes = _slopes(ks)
    atoms = []
    for k, before, after in zip(ks[1:-1], slopes, slopes[1:]):
        mass = after - before
        if abs(mass) > _SLOPE_TOL:
            atoms.append(Atom(location=k.p, mass=mass, closed=side))
    return DerivativeMeasure(atoms=tuple(atoms), order=2, side=side)


def mirror_piece(piece: DensityPiece) -> DensityPiece:
    """The piece p -> f(1 - p)."""
    anchor = Anchor.HI if piece.anchor == Anchor.LO else Anchor.LO
    return DensityPiece(
        lo=1.0 - piece.hi,
        hi=1.0 - piece.lo,
        coef=piece.coef,
        exponent=piece.exponent,
        anchor=anchor,
    )


# ---------------------------------------------------------------------------
# spec grammar
# ---------------------------------------------------------------------------


def _floats(text: str, count: int) -> list[float]:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != count or not all(parts):
        raise InputException(f"Expected {count} comma-separated numbers, got '{text}'")
    try:
        return [float(part) for part in parts]
    except ValueError as exc:
        raise InputException(f"Not a number in '{text}'") from exc


def parse_distortion(spec: str) -> DistortionFunction:
    """Parse identity, var:a, var+:a, tvar:a, rvar:a,b, ph:a,r, dph:a,r,
    pwl:p,h;... (pwl-l: for left-continuous jumps) or steps:t,c[,l|r];...
    """
    name, _, args = spec.strip().lower().partition(":")
    name = name.strip()
    if name == "identity":
        if args.strip():
            raise InputException("identity takes no parameters")
        return identity()
    if name in ("var", "var+", "tvar"):
        (alpha,) = _floats(args, 1)
        return {"var": var, "var+": var_plus, "tvar": tvar}[name](alpha)
    if name == "rvar":
        return rvar(*_floats(args, 2))
    if name in ("ph", "dph"):
        alpha, r = _floats(args, 2)
        return ph(alpha, r, dual=name == "dph")
    if name in ("pwl", "pwl-l"):
        chunks = [chunk for chunk in args.split(";") if chunk.strip()]
        side = JumpSide.LEFT if name == "pwl-l" else JumpSide.RIGHT
        return piecewise_linear([_floats(chunk, 2) for chunk in chunks], side)
    if name == "steps":
        steps = []
        for chunk in (c for c in args.split(";") if c.strip()):
            parts = [part.strip() for part in chunk.split(",")]
            if len(parts) == 3 and parts[2] in ("l", "r"):
                t, level = _floats(",".join(parts[:2]), 2)
                steps.append((t, level, parts[2]))
            else:
                steps.append(tuple(_floats(chunk, 2)))
        return piecewise_constant(steps)
    raise InputException(f"Unknown distortion '{spec}'")


def _num(x: float) -> str:
    return f"{x:.12g}"


def to_spec(h: DistortionFunction) -> str:
    kind = h.kind
    if kind == DistortionKind.IDENTITY:
        return "identity"
    if kind in (DistortionKind.VAR, DistortionKind.VAR_PLUS, DistortionKind.TVAR):
        return f"{kind.value}:{_num(h.alpha)}"
    if kind == DistortionKind.RVAR:
        return f"rvar:{_num(h.alpha)},{_num(h.beta)}"
    if kind == DistortionKind.PH:
        prefix = "dph" if h.dual else "ph"
        return f"{prefix}:{_num(h.alpha)},{_num(h.r)}"
    if kind == DistortionKind.PIECEWISE_LINEAR:
        body = ";".join(f"{_num(p)},{_num(v)}" for p, v in h.breakpoints)
        prefix = "pwl-l" if h.jump_side == JumpSide.LEFT else "pwl"
        return f"{prefix}:{body}"
    body = ";".join(
        f"{_num(s.t)},{_num(s.level)},{s.side.value}" for s in h.steps
    )
    return f"steps:{body}"


def from_template(template: str, alpha: float) -> DistortionFunction:
    """Instantiate a sweep template (var, var+, tvar, rvar:beta, ph:r) at alpha."""
    name, _, args = template.strip().lower().partition(":")
    if name in ("var", "var+", "tvar") and not args.strip():
        return {"var": var, "var+": var_plus, "tvar": tvar}[name](alpha)
    if name == "rvar":
        (beta,) = _floats(args, 1)
        return rvar(alpha, beta)
    if name == "ph":
        (r,) = _floats(args, 1)
        return ph(alpha, r)
    raise InputException(f"'{template}' is not a sweep template")
