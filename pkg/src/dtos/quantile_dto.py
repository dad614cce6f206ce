from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.const import CandidateFamily

_JOIN_TOL = 1e-12


class MomentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: float = Field(default=0.0, description="Mean of the class.")
    sigma: float = Field(default=1.0, gt=0.0, description="Standard deviation.")


class QuantileSegment(BaseModel):
    """Q(p) = start + slope * (p - lo) on [lo, hi). A zero slope is an atom."""

    model_config = ConfigDict(frozen=True)

    lo: float = Field(ge=0.0, le=1.0)
    hi: float = Field(ge=0.0, le=1.0)
    start: float
    slope: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def validate_interval(self) -> "QuantileSegment":
        if not self.lo < self.hi:
            raise ValueError("quantile segment requires lo < hi")
        return self

    @property
    def end(self) -> float:
        return self.start + self.slope * (self.hi - self.lo)

    @property
    def is_atom(self) -> bool:
        return self.slope == 0.0


class QuantileFunction(BaseModel):
    """Piecewise affine generalized inverse on (0,1).

    Segments tile [0,1] in order; values never decrease across a boundary.
    ``family`` labels laws built by a named constructor so callers can tell
    which parametric family produced them.
    """

    model_config = ConfigDict(frozen=True)

    segments: tuple[QuantileSegment, ...]
    family: Optional[CandidateFamily] = None

    @model_validator(mode="after")
    def validate_cover(self) -> "QuantileFunction":
        segments = self.segments
        if not segments:
            raise ValueError("a quantile function needs at least one segment")
        if segments[0].lo != 0.0 or segments[-1].hi != 1.0:
            raise ValueError("segments must cover [0, 1]")
        for left, right in zip(segments, segments[1:]):
            if abs(left.hi - right.lo) > _JOIN_TOL:
                raise ValueError("segments must be contiguous")
            scale = max(1.0, abs(left.start), left.slope * (left.hi - left.lo))
            if right.start < left.end - _JOIN_TOL * scale:
                raise ValueError("quantile values must be nondecreasing")
        return self

    @property
    def breakpoints(self) -> list[float]:
        return [segment.lo for segment in self.segments] + [1.0]
