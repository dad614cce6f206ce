"""Worst- and best-case distortion risk measures over moment classes.

Every sup is computed for the standardized class (mean 0, variance 1) and then
mapped to (mu, sigma). Every inf goes through the dual distortion:
inf rho_h = mu - sigma * sup rho_{dual h}, with the attaining law reflected.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, NamedTuple, Optional

from pydantic import ValidationError

from configs.settings import get_settings
from dtos.bound_dto import BoundResult, BracketDetail
from dtos.distortion_dto import DerivativeMeasure, DistortionFunction
from dtos.quadrature_dto import IntegralValue
from dtos.quantile_dto import MomentSpec, QuantileFunction
from service.distortion import (
    classify,
    convex_envelope,
    derivative_measure,
    derivative_pieces,
    dual,
    knots,
    left_limit,
    lower_hull,
    mirror_piece,
    right_limit,
)
from service.families import (
    centred_uniform,
    lower_atom_uniform,
    three_point,
    two_point,
    uniform,
    upper_atom_uniform,
)
from service.optimizer import maximize
from service.quadrature import integrate_kernel, squared_norm
from service.quantile_model import affine, build_quantile, reflect, rho, stieltjes
from service.var_bounds import (
    extremal_var_distribution,
    var_sup_attainable,
    var_sup_value,
)
from utils.const import (
    BracketBranch,
    CandidateFamily,
    DistortionKind,
    JumpSide,
    KernelName,
    Method,
    ShapeClass,
    Side,
    VaRKind,
)
from utils.exceptions import BoundaryException, DrmBoundsException, InputException

logger = logging.getLogger(__name__)

B_EDGE = 1e-9
_ZERO = 1e-14
_ATTAIN_TOL = 1e-8
_STANDARD = MomentSpec()


class _Standard(NamedTuple):
    """A sup over the standardized class, before the location-scale map."""

    value: float
    method: Method
    attainable: bool = False
    extremal: Optional[QuantileFunction] = None
    bracket: Optional[BracketDetail] = None
    diagnostic: Optional[str] = None


# ---------------------------------------------------------------------------
# location-scale and duality
# ---------------------------------------------------------------------------


def _scale_bracket(
    bracket: Optional[BracketDetail], side: Side, m: MomentSpec
) -> Optional[BracketDetail]:
    if bracket is None:
        return None
    witness = bracket.witness
    if side == Side.SUP:
        lower = m.mu + m.sigma * bracket.lower
        upper = m.mu + m.sigma * bracket.upper
        if witness is not None:
            witness = affine(witness, m.mu, m.sigma)
    else:
        lower = m.mu - m.sigma * bracket.upper
        upper = m.mu - m.sigma * bracket.lower
        if witness is not None:
            witness = affine(reflect(witness), m.mu, m.sigma)
    return bracket.model_copy(
        update={"lower": lower, "upper": upper, "witness": witness}
    )


def _finish(side: Side, standard: _Standard, m: MomentSpec) -> BoundResult:
    extremal = standard.extremal
    if side == Side.SUP:
        value = m.mu + m.sigma * standard.value
        if extremal is not None:
            extremal = affine(extremal, m.mu, m.sigma)
    else:
        value = m.mu - m.sigma * standard.value
        if extremal is not None:
            extremal = affine(reflect(extremal), m.mu, m.sigma)
    return BoundResult(
        side=side,
        value=value,
        method=standard.method,
        attainable=standard.attainable,
        extremal=extremal,
        bracket=_scale_bracket(standard.bracket, side, m),
        diagnostic=standard.diagnostic,
    )


def _boundary(h: DistortionFunction) -> Optional[_Standard]:
    """+inf when h charges the essential supremum; an error when h(1-) < 1."""
    cls = classify(h)
    if cls.h_zero_plus > 0.0:
        diagnostic = (
            f"h(0+) = {cls.h_zero_plus:g} > 0 weights the essential supremum, "
            "which is unbounded over the class"
        )
        logger.warning(diagnostic)
        return _Standard(value=math.inf, method=Method.CLOSED_FORM, diagnostic=diagnostic)
    if cls.h_one_minus < 1.0:
        raise BoundaryException(
            f"h(1-) = {cls.h_one_minus:g} < 1 weights the essential infimum; "
            "the sup is not computed for such distortions"
        )
    return None


def _attains(h: DistortionFunction, Q: QuantileFunction, value: float) -> bool:
    return abs(rho(h, Q) - value) <= _ATTAIN_TOL * max(1.0, abs(value))


def _divergent(method: Method, part: IntegralValue) -> _Standard:
    logger.warning(f"Bound diverges: {part.diagnostic}")
    return _Standard(value=math.inf, method=method, diagnostic=part.diagnostic)


# ---------------------------------------------------------------------------
# general class
# ---------------------------------------------------------------------------


def _general(h: DistortionFunction) -> _Standard:
    edge = _boundary(h)
    if edge is not None:
        return edge
    g = convex_envelope(dual(h))
    pieces = derivative_pieces(g)
    norm = squared_norm(pieces, shift=1.0)
    if norm.divergent:
        return _divergent(Method.ENVELOPE_INTEGRAL, norm)
    integral = norm.value
    logger.debug(f"general: int (g' - 1)^2 = {integral:.12g}")

    if integral <= _ZERO:
        witness = two_point(0.5)
        attained = _attains(h, witness, 0.0)
        return _Standard(
            value=0.0,
            method=Method.ENVELOPE_INTEGRAL,
            attainable=attained,
            extremal=witness if attained else None,
            diagnostic=None if attained else "bound mu is approached but not attained",
        )

    value = math.sqrt(integral)
    if g.kind == DistortionKind.PH:
        return _Standard(
            value=value,
            method=Method.ENVELOPE_INTEGRAL,
            attainable=True,
            diagnostic="the attaining quantile is a power law and is not tabulated",
        )
    levels = [(piece.coef - 1.0) / value for piece in pieces]
    family = CandidateFamily.TWO_POINT if len(set(levels)) == 2 else None
    extremal = build_quantile(
        [(piece.lo, piece.hi, level, 0.0) for piece, level in zip(pieces, levels)],
        family=family,
    )
    if _attains(h, extremal, value):
        return _Standard(value, Method.ENVELOPE_INTEGRAL, True, extremal)
    diagnostic = "h is not right-continuous; the bound is approached but not attained"
    logger.warning(diagnostic)
    return _Standard(value, Method.ENVELOPE_INTEGRAL, diagnostic=diagnostic)


def sup_general(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    """mu + sigma * ||(dual h)_*' - 1||_2 over all laws with mean mu and sd sigma."""
    return _finish(Side.SUP, _general(h), m)


def inf_general(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    return _finish(Side.INF, _general(dual(h)), m)


# ---------------------------------------------------------------------------
# symmetric class
# ---------------------------------------------------------------------------


def _symmetric_ph(g: DistortionFunction) -> _Standard:
    if not g.dual:
        return _Standard(
            value=0.0,
            method=Method.ENVELOPE_INTEGRAL,
            diagnostic="bound mu is approached but not attained",
        )
    pieces = derivative_pieces(g)
    folded = list(pieces)
    for piece in pieces:
        mirrored = mirror_piece(piece)
        folded.append(mirrored.model_copy(update={"coef": -mirrored.coef}))
    norm = squared_norm(folded, a=0.5, b=1.0)
    if norm.divergent:
        return _divergent(Method.ENVELOPE_INTEGRAL, norm)
    return _Standard(
        value=math.sqrt(norm.value / 2.0),
        method=Method.ENVELOPE_INTEGRAL,
        attainable=True,
        diagnostic="the attaining quantile is a power law and is not tabulated",
    )


class _FoldRow(NamedTuple):
    p: float
    lowest: float
    before: float
    after: float


def _fold(g: DistortionFunction) -> list[_FoldRow]:
    """K(p) = g(p) + g(1 - p) - 2 g(1/2-) on [1/2, 1] at every knot of K.

    ``lowest`` drops both jumps at p and 1 - p; K is affine between rows.
    """
    centre = left_limit(g, 0.5)
    ps = {0.5, 1.0}
    for k in knots(g):
        ps.add(k.p if k.p > 0.5 else 1.0 - k.p)
    rows = []
    for p in sorted(ps):
        q = 1.0 - p
        rows.append(
            _FoldRow(
                p=p,
                lowest=left_limit(g, p) + left_limit(g, q) - 2.0 * centre,
                before=left_limit(g, p) + right_limit(g, q) - 2.0 * centre,
                after=right_limit(g, p) + left_limit(g, q) - 2.0 * centre,
            )
        )
    return rows


def _flat_from(rows: list[_FoldRow]) -> float:
    """Start of the final interval on which K is constant."""
    end = rows[-1].before
    start = 1.0
    for row in reversed(rows[:-1]):
        if abs(row.after - end) > _ZERO:
            break
        start = row.p
        if abs(row.before - end) > _ZERO:
            break
    return start


def _symmetric(h: DistortionFunction) -> _Standard:
    edge = _boundary(h)
    if edge is not None:
        return edge
    g = dual(h)
    if g.kind == DistortionKind.PH:
        return _symmetric_ph(g)

    rows = _fold(g)
    hull = lower_hull([(row.p, row.lowest) for row in rows])
    slopes = [
        max((b[1] - a[1]) / (b[0] - a[0]), 0.0) for a, b in zip(hull, hull[1:])
    ]
    integral = sum(s * s * (b[0] - a[0]) for s, a, b in zip(slopes, hull, hull[1:]))
    logger.debug(f"symmetric: folded integral {integral:.12g} over {len(hull)} vertices")

    if integral <= _ZERO:
        q = (1.0 - _flat_from(rows)) / 2.0
        if q > 0.0:
            witness = three_point(q)
            if _attains(h, witness, 0.0):
                return _Standard(0.0, Method.ENVELOPE_INTEGRAL, True, witness)
        return _Standard(
            value=0.0,
            method=Method.ENVELOPE_INTEGRAL,
            diagnostic="bound mu is approached but not attained",
        )

    value = math.sqrt(integral / 2.0)
    scale = math.sqrt(2.0 * integral)
    upper = [
        (a[0], b[0], s / scale, 0.0) for s, a, b in zip(slopes, hull, hull[1:])
    ]
    lower = [(1.0 - hi, 1.0 - lo, -level, 0.0) for lo, hi, level, _ in reversed(upper)]
    levels = {round(level, 12) for _, _, level, _ in upper}
    family = CandidateFamily.THREE_POINT if len(levels - {0.0}) == 1 else None
    extremal = build_quantile(lower + upper, family=family)
    if _attains(h, extremal, value):
        return _Standard(value, Method.ENVELOPE_INTEGRAL, True, extremal)
    diagnostic = "h is not right-continuous; the bound is approached but not attained"
    logger.warning(diagnostic)
    return _Standard(value, Method.ENVELOPE_INTEGRAL, diagnostic=diagnostic)


def sup_symmetric(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    """Sup over laws symmetric about mu.

    The dual's measure is folded onto [1/2, 1] and the greatest convex
    minorant of the fold gives the attaining quantile on the upper half.
    """
    return _finish(Side.SUP, _symmetric(h), m)


def inf_symmetric(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    return _finish(Side.INF, _symmetric(dual(h)), m)


# ---------------------------------------------------------------------------
# TVaR closed forms
# ---------------------------------------------------------------------------


def _check_level(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InputException(f"alpha must lie in (0, 1), got {alpha}")


def _tvar_unimodal(alpha: float) -> tuple[float, QuantileFunction]:
    a = alpha
    if a < 0.5:
        return math.sqrt(a * (8.0 / 9.0 - a)) / (1.0 - a), upper_atom_uniform(1.5 * a)
    return (
        math.sqrt(8.0 / (9.0 * (1.0 - a)) - 1.0),
        lower_atom_uniform((3.0 * a - 1.0) / 2.0),
    )


def _tvar_us(alpha: float) -> tuple[float, QuantileFunction]:
    a = alpha
    if a < 1.0 / 3.0:
        return 2.0 * math.sqrt(a) / (3.0 * (1.0 - a)), centred_uniform(1.0 - 1.5 * a)
    if a <= 2.0 / 3.0:
        return math.sqrt(3.0) * a, uniform()
    return (2.0 / 3.0) / math.sqrt(1.0 - a), centred_uniform(1.5 * a - 0.5)


def tvar_sup_unimodal(alpha: float, m: MomentSpec) -> BoundResult:
    _check_level(alpha)
    value, extremal = _tvar_unimodal(alpha)
    return _finish(Side.SUP, _Standard(value, Method.CLOSED_FORM, True, extremal), m)


def tvar_sup_us(alpha: float, m: MomentSpec) -> BoundResult:
    _check_level(alpha)
    value, extremal = _tvar_us(alpha)
    return _finish(Side.SUP, _Standard(value, Method.CLOSED_FORM, True, extremal), m)


# ---------------------------------------------------------------------------
# bracket functionals
# ---------------------------------------------------------------------------


def delta_r(g: DistortionFunction, b: float) -> float:
    """int Q dg for the law with an atom of mass b below a uniform part."""
    return stieltjes(lower_atom_uniform(b), derivative_measure(g, 1))


def delta_l(g: DistortionFunction, b: float) -> float:
    """int Q dg for the law uniform on [0, b) with an atom of mass 1 - b on top."""
    if b <= 0.0:
        raise InputException("delta_l needs b > 0")
    return stieltjes(upper_atom_uniform(b), derivative_measure(g, 1))


def theta(g: DistortionFunction, b: float) -> float:
    """int Q dg for the centred atom of mass 2b - 1 between two uniform pieces."""
    return stieltjes(centred_uniform(b), derivative_measure(g, 1))


def _unimodal_integral(measure: DerivativeMeasure) -> IntegralValue:
    left = integrate_kernel(KernelName.UNIMODAL_LEFT, measure, 0.0, 0.5)
    right = integrate_kernel(KernelName.UNIMODAL_RIGHT, measure, 0.5, 1.0)
    for part in (left, right):
        if part.divergent:
            return part
    return IntegralValue(value=(left.value + right.value) / 3.0)


def _upsilon_integral(measure: DerivativeMeasure) -> IntegralValue:
    parts = [
        (2.0 / 3.0, integrate_kernel(KernelName.SQRT_P, measure, 0.0, 1.0 / 3.0)),
        (
            math.sqrt(3.0),
            integrate_kernel(KernelName.P_ONE_MINUS_P, measure, 1.0 / 3.0, 2.0 / 3.0),
        ),
        (
            2.0 / 3.0,
            integrate_kernel(KernelName.SQRT_ONE_MINUS_P, measure, 2.0 / 3.0, 1.0),
        ),
    ]
    for _, part in parts:
        if part.divergent:
            return part
    return IntegralValue(value=sum(weight * part.value for weight, part in parts))


def upsilon(g: DistortionFunction) -> float:
    """Kernel integral of the unimodal-symmetric bound against d(g')."""
    part = _upsilon_integral(derivative_measure(g, 2))
    if part.divergent:
        logger.warning(f"upsilon diverges: {part.diagnostic}")
    return part.value


def unimodal_kernel_integral(g: DistortionFunction) -> float:
    """Kernel integral of the unimodal bound against d(g')."""
    part = _unimodal_integral(derivative_measure(g, 2))
    if part.divergent:
        logger.warning(f"unimodal kernel integral diverges: {part.diagnostic}")
    return part.value


def _scan(
    builder: Callable[[float], QuantileFunction],
    measure: DerivativeMeasure,
    lo: float,
    hi: float,
):
    settings = get_settings()

    def objective(b: float) -> float:
        try:
            return stieltjes(builder(b), measure)
        except (InputException, ValidationError):
            return -math.inf

    return maximize(
        objective, lo, hi, grid_size=settings.scan_points, tol=settings.golden_tol
    )


def _bracket(
    lower: float,
    ceiling: float,
    argmax: float,
    branch: BracketBranch,
    grid_size: int,
    iterations: int,
    witness: QuantileFunction,
) -> BracketDetail:
    top = ceiling
    slack = get_settings().feasibility_tol * max(1.0, abs(top))
    if lower > top:
        if lower > top + slack:
            raise DrmBoundsException(
                f"bracket inverted: constructive {lower:.12g} above certified {top:.12g}"
            )
        top = lower
    return BracketDetail(
        lower=lower,
        upper=top,
        argmax_b=argmax,
        branch=branch,
        grid_size=grid_size,
        iterations=iterations,
        witness=witness,
    )


def _ceiling(h: DistortionFunction, shape: ShapeClass, formula: float) -> float:
    """Smallest certified upper bound: the formula, the envelope kernel
    integral and the sharp sups of the classes containing ``shape``."""
    g = convex_envelope(dual(h))
    measure = derivative_measure(g, 2)
    if shape == ShapeClass.UNIMODAL:
        envelope = _unimodal_integral(measure)
    else:
        envelope = _upsilon_integral(measure)
    ceiling = min(formula, envelope.value, _general(h).value)
    if shape == ShapeClass.UNIMODAL_SYMMETRIC:
        ceiling = min(ceiling, _symmetric(h).value)
    return ceiling


def _standard_bracket_unimodal(h: DistortionFunction, ceiling: float) -> BracketDetail:
    measure = derivative_measure(dual(h), 1)
    right = _scan(lower_atom_uniform, measure, 0.0, 1.0 - B_EDGE)
    left = _scan(upper_atom_uniform, measure, B_EDGE, 1.0 - B_EDGE)
    if right.value >= left.value:
        best, branch, witness = right, BracketBranch.RIGHT, lower_atom_uniform(right.argmax)
    else:
        best, branch, witness = left, BracketBranch.LEFT, upper_atom_uniform(left.argmax)
    logger.debug(
        f"unimodal bracket: {branch.value} at b={best.argmax:.9g}, "
        f"lower {best.value:.12g}, upper {ceiling:.12g}"
    )
    return _bracket(
        best.value,
        ceiling,
        best.argmax,
        branch,
        best.grid_size,
        right.iterations + left.iterations,
        witness,
    )


def _standard_bracket_us(h: DistortionFunction, ceiling: float) -> BracketDetail:
    measure = derivative_measure(dual(h), 1)
    best = _scan(centred_uniform, measure, 0.5, 1.0 - B_EDGE)
    logger.debug(
        f"us bracket: theta at b={best.argmax:.9g}, "
        f"lower {best.value:.12g}, upper {ceiling:.12g}"
    )
    return _bracket(
        best.value,
        ceiling,
        best.argmax,
        BracketBranch.THETA,
        best.grid_size,
        best.iterations,
        centred_uniform(best.argmax),
    )


_BRACKETS = {
    ShapeClass.UNIMODAL: _standard_bracket_unimodal,
    ShapeClass.UNIMODAL_SYMMETRIC: _standard_bracket_us,
}


def bracket_unimodal(h: DistortionFunction, m: MomentSpec = _STANDARD) -> BracketDetail:
    """[constructive, certified] enclosure of the unimodal sup for any h."""
    if _boundary(h) is not None:
        raise BoundaryException("h(0+) > 0: the unimodal sup is +inf")
    ceiling = _ceiling(h, ShapeClass.UNIMODAL, math.inf)
    return _scale_bracket(_standard_bracket_unimodal(h, ceiling), Side.SUP, m)


def bracket_us(h: DistortionFunction, m: MomentSpec = _STANDARD) -> BracketDetail:
    """[constructive, certified] enclosure of the unimodal-symmetric sup for any h."""
    if _boundary(h) is not None:
        raise BoundaryException("h(0+) > 0: the unimodal-symmetric sup is +inf")
    ceiling = _ceiling(h, ShapeClass.UNIMODAL_SYMMETRIC, math.inf)
    return _scale_bracket(_standard_bracket_us(h, ceiling), Side.SUP, m)


# ---------------------------------------------------------------------------
# unimodal and unimodal-symmetric classes
# ---------------------------------------------------------------------------


class _Formula(NamedTuple):
    """A closed-form sup, or an upper bound when ``exact`` is None."""

    value: float
    exact: Optional[_Standard] = None
    diagnostic: Optional[str] = None


def _simple(h: DistortionFunction, shape: ShapeClass) -> _Formula:
    atoms = derivative_measure(dual(h), 1).atoms
    value = sum(atom.mass * var_sup_value(shape, atom.location) for atom in atoms)
    if len(atoms) != 1:
        return _Formula(value)
    atom = atoms[0]
    kind = VaRKind.LEFT if atom.closed == JumpSide.RIGHT else VaRKind.RIGHT
    if var_sup_attainable(shape, kind, atom.location):
        extremal = extremal_var_distribution(
            shape, Side.SUP, atom.location, _STANDARD, kind
        )
        return _Formula(value, _Standard(value, Method.CLOSED_FORM, True, extremal))
    diagnostic = f"{kind.value} bound is approached but not attained"
    return _Formula(value, _Standard(value, Method.CLOSED_FORM, diagnostic=diagnostic))


def _concave(h: DistortionFunction, shape: ShapeClass) -> _Formula:
    measure = derivative_measure(dual(h), 2)
    if shape == ShapeClass.UNIMODAL:
        part, tvar_form = _unimodal_integral(measure), _tvar_unimodal
    else:
        part, tvar_form = _upsilon_integral(measure), _tvar_us
    if part.divergent:
        return _Formula(math.inf, diagnostic=part.diagnostic)
    if measure.densities or len(measure.atoms) > 1:
        return _Formula(part.value)
    if not measure.atoms:
        exact = _Standard(part.value, Method.ENVELOPE_INTEGRAL, True, uniform())
        return _Formula(part.value, exact)
    # one kink: a mixture of the mean and a single TVaR
    _, extremal = tvar_form(measure.atoms[0].location)
    exact = _Standard(part.value, Method.ENVELOPE_INTEGRAL, True, extremal)
    return _Formula(part.value, exact)


def _shaped(h: DistortionFunction, shape: ShapeClass) -> _Standard:
    edge = _boundary(h)
    if edge is not None:
        return edge
    cls = classify(h)
    if cls.is_simple:
        logger.debug(f"{shape.value}: simple distortion, VaR curve integral")
        formula = _simple(h, shape)
    elif cls.is_concave:
        logger.debug(f"{shape.value}: concave distortion, kernel integral")
        formula = _concave(h, shape)
    else:
        logger.debug(f"{shape.value}: general distortion, bracket")
        formula = _Formula(math.inf)
    if formula.exact is not None:
        return formula.exact

    bracket = _BRACKETS[shape](h, _ceiling(h, shape, formula.value))
    diagnostic = (
        f"bracket [{bracket.lower:.9g}, {bracket.upper:.9g}]; the lower end is "
        "attained by the witness"
    )
    if math.isinf(bracket.upper) and formula.diagnostic:
        diagnostic = f"{diagnostic}; upper bound diverges: {formula.diagnostic}"
        logger.warning(diagnostic)
    return _Standard(
        value=bracket.upper,
        method=Method.BRACKET,
        bracket=bracket,
        diagnostic=diagnostic,
    )


def sup_unimodal(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    return _finish(Side.SUP, _shaped(h, ShapeClass.UNIMODAL), m)


def inf_unimodal(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    return _finish(Side.INF, _shaped(dual(h), ShapeClass.UNIMODAL), m)


def sup_us(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    return _finish(Side.SUP, _shaped(h, ShapeClass.UNIMODAL_SYMMETRIC), m)


def inf_us(h: DistortionFunction, m: MomentSpec) -> BoundResult:
    return _finish(Side.INF, _shaped(dual(h), ShapeClass.UNIMODAL_SYMMETRIC), m)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_STANDARD_SUP: dict[ShapeClass, Callable[[DistortionFunction], _Standard]] = {
    ShapeClass.GENERAL: _general,
    ShapeClass.SYMMETRIC: _symmetric,
    ShapeClass.UNIMODAL: lambda h: _shaped(h, ShapeClass.UNIMODAL),
    ShapeClass.UNIMODAL_SYMMETRIC: lambda h: _shaped(h, ShapeClass.UNIMODAL_SYMMETRIC),
}


def bound(
    h: DistortionFunction, shape: ShapeClass, side: Side, m: MomentSpec
) -> BoundResult:
    """sup or inf of rho_h over the class with moments m."""
    target = h if side == Side.SUP else dual(h)
    logger.debug(f"bound: {h.kind.value} over {shape.value}, {side.value}")
    return _finish(side, _STANDARD_SUP[shape](target), m)
