"""Brute-force check of the analytic bounds.

Each class is searched over the parametric families it contains: a scan plus
golden-section polish of the family parameter, then seeded random draws. The
report compares the best feasible value against the analytic bound.
"""

from __future__ import annotations

import logging
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from configs.settings import get_settings
from dtos.bound_dto import BoundResult
from dtos.distortion_dto import DerivativeMeasure, DistortionFunction
from dtos.oracle_dto import CandidateDescriptor, MorigutiResult, OracleReport
from dtos.quantile_dto import MomentSpec, QuantileFunction
from service.distortion import derivative_measure, dual, lower_hull, parse_distortion, to_spec
from service.drm_bounds import bound
from service.families import FAMILY_BUILDERS
from service.optimizer import maximize
from service.quantile_model import affine, reflect, stieltjes, validate_shape
from utils.const import CandidateFamily, ShapeClass, Side
from utils.exceptions import InputException

logger = logging.getLogger(__name__)

_EDGE = 1e-9
_SHRINK = 0.7
_ROUND = 16
_GOLDEN_EVALS = 60


class _Search(NamedTuple):
    family: CandidateFamily
    lo: float
    hi: float
    mirrored: bool = False


_TWO_POINT = _Search(CandidateFamily.TWO_POINT, _EDGE, 1.0 - _EDGE)
_THREE_POINT = _Search(CandidateFamily.THREE_POINT, _EDGE, 0.5)
_LOWER_ATOM = _Search(CandidateFamily.LOWER_ATOM_UNIFORM, 0.0, 1.0 - _EDGE)
_UPPER_ATOM = _Search(CandidateFamily.UPPER_ATOM_UNIFORM, _EDGE, 1.0)
_CENTRED = _Search(CandidateFamily.CENTRED_UNIFORM, 0.5, 1.0 - _EDGE)


def _mirror(search: _Search) -> _Search:
    return search._replace(mirrored=True)


CLASS_CATALOG: dict[ShapeClass, tuple[_Search, ...]] = {
    ShapeClass.GENERAL: (
        _TWO_POINT,
        _THREE_POINT,
        _LOWER_ATOM,
        _mirror(_LOWER_ATOM),
        _UPPER_ATOM,
        _mirror(_UPPER_ATOM),
        _CENTRED,
    ),
    ShapeClass.SYMMETRIC: (_THREE_POINT, _CENTRED),
    ShapeClass.UNIMODAL: (
        _LOWER_ATOM,
        _mirror(_LOWER_ATOM),
        _UPPER_ATOM,
        _mirror(_UPPER_ATOM),
        _CENTRED,
    ),
    ShapeClass.UNIMODAL_SYMMETRIC: (_CENTRED,),
}


class _Best(NamedTuple):
    score: float
    parameter: float


class _Scorer:
    """Counts evaluations and keeps the best feasible candidate of one family."""

    def __init__(
        self,
        search: _Search,
        measure: DerivativeMeasure,
        shape: ShapeClass,
        side: Side,
        moments: MomentSpec,
        tol: float,
    ):
        self.search = search
        self.measure = measure
        self.shape = shape
        self.sign = 1.0 if side == Side.SUP else -1.0
        self.moments = moments
        self.tol = tol
        self.evaluations = 0
        self.best: Optional[_Best] = None

    def candidate(self, parameter: float) -> QuantileFunction:
        law = FAMILY_BUILDERS[self.search.family](parameter)
        if self.search.mirrored:
            law = reflect(law)
        return affine(law, self.moments.mu, self.moments.sigma)

    def __call__(self, parameter: float) -> float:
        self.evaluations += 1
        parameter = min(max(parameter, self.search.lo), self.search.hi)
        try:
            law = self.candidate(parameter)
        except (InputException, ValidationError):
            return -math.inf
        if not validate_shape(law, self.shape, self.moments, self.tol):
            return -math.inf
        score = self.sign * stieltjes(law, self.measure)
        if math.isnan(score):
            return -math.inf
        if self.best is None or score > self.best.score:
            self.best = _Best(score, parameter)
        return score


def _search_family(scorer: _Scorer, share: int, seed: np.random.SeedSequence) -> None:
    search = scorer.search
    scan = max(8, share // 2 - _GOLDEN_EVALS)
    maximize(scorer, search.lo, search.hi, grid_size=scan, tol=get_settings().golden_tol)
    rng = np.random.default_rng(seed)
    width = search.hi - search.lo
    scale = width / scan
    while scorer.evaluations < share:
        draws = min(_ROUND, share - scorer.evaluations)
        centre = scorer.best.parameter if scorer.best else search.lo + width / 2.0
        for i in range(draws):
            if i % 2 == 0 or scorer.best is None:
                parameter = rng.uniform(search.lo, search.hi)
            else:
                parameter = centre + rng.normal(0.0, scale)
            scorer(float(parameter))
        scale *= _SHRINK


def _attained(
    analytic: BoundResult, families: set[CandidateFamily], best: float, tol: float
) -> Optional[bool]:
    if analytic.bracket is not None:
        reference = analytic.bracket.witness
    elif analytic.attainable:
        reference = analytic.extremal
    else:
        return None
    if reference is None or reference.family not in families:
        return None
    return abs(best - analytic.constructive_value) <= tol


def search(
    h: DistortionFunction,
    shape: ShapeClass,
    side: Side,
    m: MomentSpec,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> OracleReport:
    """Best rho over the class's candidate families, against the analytic bound."""
    settings = get_settings()
    budget = budget if budget is not None else settings.oracle_budget
    seed = seed if seed is not None else settings.seed
    catalog = CLASS_CATALOG[shape]
    share = budget // len(catalog)
    measure = derivative_measure(dual(h), 1)

    best_score, best_candidate = -math.inf, None
    skipped, spent = [], 0
    children = np.random.SeedSequence(seed).spawn(len(catalog))
    for family_search, child in zip(catalog, children):
        scorer = _Scorer(family_search, measure, shape, side, m, settings.feasibility_tol)
        _search_family(scorer, share, child)
        spent += scorer.evaluations
        label = family_search.family.value + (" (mirrored)" if family_search.mirrored else "")
        if scorer.best is None:
            skipped.append(f"{label}: no feasible member")
            continue
        logger.debug(f"{label}: best {scorer.best.score:.12g} at {scorer.best.parameter:.9g}")
        if scorer.best.score > best_score:
            best_score = scorer.best.score
            best_candidate = CandidateDescriptor(
                family=family_search.family,
                parameter=scorer.best.parameter,
                mirrored=family_search.mirrored,
            )

    best_value = best_score if side == Side.SUP else -best_score
    analytic = bound(h, shape, side, m)
    if side == Side.SUP:
        gap = analytic.value - best_value
    else:
        gap = best_value - analytic.value
    violation = math.isfinite(gap) and gap < -settings.violation_tol
    families = {s.family for s in catalog}
    attained = _attained(
        analytic, families, best_value, settings.attainment_tol * max(1.0, m.sigma)
    )
    report = OracleReport(
        distortion=to_spec(h),
        shape=shape,
        side=side,
        mu=m.mu,
        sigma=m.sigma,
        best_value=best_value,
        best_candidate=best_candidate,
        analytic_value=analytic.value,
        method=analytic.method,
        constructive_value=analytic.constructive_value,
        gap=gap,
        violation=violation,
        attained=attained,
        families_searched=sorted(families, key=lambda f: f.value),
        skipped=skipped,
        budget=spent,
        seed=seed,
    )
    if violation:
        logger.error(
            f"{report.distortion} {shape.value} {side.value}: candidate "
            f"{best_value:.12g} beats analytic {analytic.value:.12g}"
        )
    else:
        logger.info(
            f"{report.distortion} {shape.value} {side.value}: gap {gap:.3e}, "
            f"attained {attained}"
        )
    return report


class SuiteCase(NamedTuple):
    distortion: str
    shape: ShapeClass
    side: Side


_SUITE_DISTORTIONS = ("var:0.9", "var+:0.2", "tvar:0.75", "rvar:0.9,0.99", "ph:0.9,0.75")

DEFAULT_SUITE: tuple[SuiteCase, ...] = tuple(
    SuiteCase(spec, shape, side)
    for spec in _SUITE_DISTORTIONS
    for shape in ShapeClass
    for side in Side
)


def run_suite(
    cases: Sequence[SuiteCase] = DEFAULT_SUITE,
    m: MomentSpec = MomentSpec(),
    budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[OracleReport]:
    reports = [
        search(parse_distortion(case.distortion), case.shape, case.side, m, budget, seed)
        for case in cases
    ]
    failures = sum(report.violation for report in reports)
    logger.info(f"Oracle suite: {len(reports)} cases, {failures} violations")
    return reports


# ---------------------------------------------------------------------------
# Moriguti inequality
# ---------------------------------------------------------------------------


def _as_array(name: str, values: Sequence[float], size: Optional[int] = None) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1 or array.size < 2:
        raise InputException(f"{name} must be a 1-d tabulation with at least 2 points")
    if size is not None and array.size != size:
        raise InputException(f"{name} has {array.size} points, the grid has {size}")
    if not np.all(np.isfinite(array)):
        raise InputException(f"{name} contains non-finite values")
    return array


def moriguti_check(
    x: Sequence[float],
    H: Sequence[float],
    grid: Sequence[float],
    tol: float = 1e-12,
) -> MorigutiResult:
    """int x dH against int x dH_* for H_* the greatest convex minorant of H.

    Both sides use trapezoidal weights on the grid, for which the inequality
    holds exactly whenever x is nondecreasing.
    """
    t = _as_array("grid", grid)
    xs = _as_array("x", x, t.size)
    hs = _as_array("H", H, t.size)
    if np.any(np.diff(t) <= 0.0):
        raise InputException("grid must be strictly increasing")
    if np.any(np.diff(xs) < -tol):
        raise InputException("x must be nondecreasing")

    hull = lower_hull(list(zip(t.tolist(), hs.tolist())))
    minorant = np.interp(t, [p for p, _ in hull], [v for _, v in hull])
    weights = 0.5 * (xs[1:] + xs[:-1])
    lhs = float(np.dot(weights, np.diff(hs)))
    rhs = float(np.dot(weights, np.diff(minorant)))
    scale = max(1.0, abs(lhs), abs(rhs))
    return MorigutiResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol * scale)
