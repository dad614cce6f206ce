from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from utils.const import CandidateFamily, Method, ShapeClass, Side


class CandidateDescriptor(BaseModel):
    """Identifies one member of a parametric family of feasible laws."""

    family: CandidateFamily = Field(description="Parametric family searched.")
    parameter: float = Field(description="Free family parameter (q or b).")
    mirrored: bool = Field(
        default=False, description="True when the law is reflected about the mean."
    )


class OracleReport(BaseModel):
    distortion: str = Field(description="Distortion in spec grammar.")
    shape: ShapeClass = Field(serialization_alias="class")
    side: Side
    mu: float
    sigma: float
    best_value: float = Field(description="Best rho found over feasible candidates.")
    best_candidate: Optional[CandidateDescriptor] = None
    analytic_value: float
    method: Method
    constructive_value: float = Field(
        description="Bound end realised by a feasible law (bracket end for brackets)."
    )
    gap: float = Field(
        description="analytic - best for sup, best - analytic for inf."
    )
    violation: bool = False
    attained: Optional[bool] = Field(
        default=None,
        description="Whether the search reached the constructive value; "
        "None when no catalogued family realises it.",
    )
    families_searched: list[CandidateFamily] = Field(default_factory=list)
    skipped: list[str] = Field(
        default_factory=list, description="Families skipped, with the reason."
    )
    budget: int = Field(description="Candidate evaluations spent.")
    seed: int

    model_config = {"populate_by_name": True}


class MorigutiResult(BaseModel):
    lhs: float
    rhs: float
    holds: bool
