from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dtos.quantile_dto import QuantileFunction
from utils.const import BracketBranch, Method, Side

_ORDER_SLACK = 1e-12


class OptimizerTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    argmax: float
    value: float
    grid_size: int
    iterations: int


class BracketDetail(BaseModel):
    """Certified [lower, upper] enclosure for general h on unimodal classes.

    ``lower`` is realised by ``witness``; ``upper`` comes from the convex
    envelope of the dual.
    """

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    argmax_b: float = Field(ge=0.0, le=1.0)
    branch: BracketBranch
    grid_size: int = 0
    iterations: int = 0
    witness: Optional[QuantileFunction] = None

    @model_validator(mode="after")
    def validate_order(self) -> "BracketDetail":
        if self.lower > self.upper + _ORDER_SLACK * max(1.0, abs(self.upper)):
            raise ValueError(
                f"bracket lower {self.lower} exceeds upper {self.upper}"
            )
        return self


class BoundResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    side: Side
    value: float = Field(description="Bound value, possibly +inf or -inf.")
    method: Method
    attainable: bool = False
    extremal: Optional[QuantileFunction] = None
    bracket: Optional[BracketDetail] = None
    diagnostic: Optional[str] = None

    @property
    def constructive_value(self) -> float:
        """The end of the enclosure realised by a feasible law."""
        if self.bracket is None:
            return self.value
        if self.side == Side.SUP:
            return self.bracket.lower
        return self.bracket.upper
