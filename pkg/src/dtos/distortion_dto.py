from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.const import Anchor, DistortionKind, JumpSide


class StepPoint(BaseModel):
    """One jump of a piecewise-constant distortion."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(ge=0.0, le=1.0, description="Jump location.")
    level: float = Field(ge=0.0, le=1.0, description="Level reached at the jump.")
    side: JumpSide = Field(
        default=JumpSide.RIGHT,
        description="'r' if h(t) takes the new level, 'l' if it keeps the old one.",
    )


class DistortionFunction(BaseModel):
    """A nondecreasing map h: [0,1] -> [0,1] with h(0)=0 and h(1)=1.

    Parametric kinds carry their levels (``alpha``, ``beta``, ``r``);
    ``pwl`` carries ``breakpoints`` (a repeated p encodes a vertical jump,
    resolved by ``jump_side`` when it is interior); ``steps`` carries
    ``steps``. ``dual`` is only
    meaningful for ``ph`` and marks the function p -> 1 - h(1 - p).
    """

    model_config = ConfigDict(frozen=True)

    kind: DistortionKind
    alpha: Optional[float] = Field(default=None, description="Probability level.")
    beta: Optional[float] = Field(default=None, description="Upper level (rvar).")
    r: Optional[float] = Field(default=None, description="Exponent (ph).")
    breakpoints: Optional[tuple[tuple[float, float], ...]] = None
    steps: Optional[tuple[StepPoint, ...]] = None
    jump_side: JumpSide = JumpSide.RIGHT
    dual: bool = False

    @model_validator(mode="after")
    def validate_parameters(self) -> "DistortionFunction":
        kind = self.kind
        needs_alpha = {
            DistortionKind.VAR,
            DistortionKind.VAR_PLUS,
            DistortionKind.TVAR,
            DistortionKind.RVAR,
            DistortionKind.PH,
        }
        if kind in needs_alpha:
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise ValueError(f"{kind.value} requires 0 < alpha < 1")
        if kind == DistortionKind.RVAR:
            if self.beta is None or not self.alpha < self.beta < 1.0:
                raise ValueError("rvar requires 0 < alpha < beta < 1")
        if kind == DistortionKind.PH:
            if self.r is None or not 0.0 < self.r <= 1.0:
                raise ValueError("ph requires 0 < r <= 1")
        if self.dual and kind != DistortionKind.PH:
            raise ValueError("the dual flag is only used by the ph family")
        if kind == DistortionKind.PIECEWISE_LINEAR:
            self._check_breakpoints()
        if kind == DistortionKind.PIECEWISE_CONSTANT:
            self._check_steps()
        return self

    def _check_breakpoints(self) -> None:
        points = self.breakpoints
        if not points or len(points) < 2:
            raise ValueError("pwl requires at least two breakpoints")
        if points[0][0] != 0.0 or points[-1][0] != 1.0:
            raise ValueError("pwl breakpoints must start at p=0 and end at p=1")
        for (p0, h0), (p1, h1) in zip(points, points[1:]):
            if p1 < p0:
                raise ValueError("pwl breakpoints must be ordered in p")
            if h1 < h0:
                raise ValueError("pwl values must be nondecreasing")
        for i in range(len(points) - 2):
            if points[i][0] == points[i + 1][0] == points[i + 2][0]:
                raise ValueError("pwl allows at most two values per location")
        for _, h in points:
            if not 0.0 <= h <= 1.0:
                raise ValueError("pwl values must lie in [0, 1]")
        # jump_side only resolves interior jumps; h(0) and h(1) are the
        # first and last listed values
        if points[0][1] != 0.0:
            raise ValueError("pwl must satisfy h(0) = 0")
        if points[-1][1] != 1.0:
            raise ValueError("pwl must satisfy h(1) = 1")

    def _check_steps(self) -> None:
        steps = self.steps
        if not steps:
            raise ValueError("steps requires at least one jump")
        previous_t, previous_level = -1.0, 0.0
        for step in steps:
            if step.t <= previous_t:
                raise ValueError("step locations must be strictly increasing")
            if step.level < previous_level:
                raise ValueError("step levels must be nondecreasing")
            previous_t, previous_level = step.t, step.level
        if steps[-1].level != 1.0:
            raise ValueError("the last step level must be 1")
        first, last = steps[0], steps[-1]
        if first.t == 0.0 and first.side == JumpSide.RIGHT and first.level > 0.0:
            raise ValueError("steps must satisfy h(0) = 0")
        if last.t == 1.0 and last.side == JumpSide.LEFT:
            raise ValueError("steps must satisfy h(1) = 1")


class Atom(BaseModel):
    model_config = ConfigDict(frozen=True)

    location: float = Field(ge=0.0, le=1.0)
    mass: float
    closed: Optional[JumpSide] = Field(
        default=None,
        description="Side the parent function takes at this jump, if it is one.",
    )


class DensityPiece(BaseModel):
    """coef * (p - lo)^exponent (anchor lo) or coef * (hi - p)^exponent (anchor hi)."""

    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float
    coef: float
    exponent: float = 0.0
    anchor: Anchor = Anchor.LO

    @model_validator(mode="after")
    def validate_interval(self) -> "DensityPiece":
        if not self.lo < self.hi:
            raise ValueError("density piece requires lo < hi")
        return self

    @property
    def anchor_point(self) -> float:
        return self.lo if self.anchor == Anchor.LO else self.hi


class DerivativeMeasure(BaseModel):
    """A signed Stieltjes measure on [0,1]: atoms plus piecewise densities."""

    model_config = ConfigDict(frozen=True)

    atoms: tuple[Atom, ...] = ()
    densities: tuple[DensityPiece, ...] = ()
    order: int = Field(default=1, ge=1, le=2)
    side: JumpSide = JumpSide.RIGHT

    @model_validator(mode="after")
    def validate_layout(self) -> "DerivativeMeasure":
        for left, right in zip(self.densities, self.densities[1:]):
            if right.lo < left.hi:
                raise ValueError("density intervals must be disjoint and ordered")
        for piece in self.densities:
            if piece.lo < 0.0 or piece.hi > 1.0:
                raise ValueError("density intervals must lie in [0, 1]")
        return self


class DistortionClassification(BaseModel):
    model_config = ConfigDict(frozen=True)

    is_simple: bool
    is_concave: bool
    is_convex: bool
    left_continuous: bool
    right_continuous: bool
    continuous: bool
    h_zero_plus: float = Field(description="Right limit of h at 0.")
    h_one_minus: float = Field(description="Left limit of h at 1.")
    boundary_ok: bool
    certified: str = Field(
        default="exact", description="'exact' or 'grid:<N>' for sampled checks."
    )
