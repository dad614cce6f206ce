from __future__ import annotations

import math
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from utils.const import Command, OutputFormat, ShapeClass, SideSelection

SWEEP_TEMPLATES = ("var", "var+", "tvar", "rvar", "ph")


class RunConfig(BaseModel):
    """One CLI invocation. Mirrors the flags and the JSON config file."""

    command: Command
    distortion: Optional[str] = Field(
        default=None,
        description="Distortion spec, or a sweep template such as 'tvar' or 'rvar:0.99'.",
    )
    shape: ShapeClass = Field(default=ShapeClass.GENERAL, alias="class")
    side: SideSelection = Field(default=SideSelection.BOTH)
    mu: float = 0.0
    sigma: float = Field(default=1.0, gt=0.0)
    alpha: Optional[str] = Field(
        default=None, description="Sweep range 'start:stop:step'."
    )
    output: Optional[str] = Field(default=None, description="Path, or stdout.")
    format: Optional[OutputFormat] = Field(
        default=None,
        description="Defaults to json for bound/verify and csv for extremal/sweep.",
    )
    seed: Optional[int] = None
    budget: Optional[int] = Field(default=None, ge=100)
    quad_tol: Optional[float] = Field(default=None, gt=0.0)
    violation_tol: Optional[float] = Field(default=None, gt=0.0)
    attainment_tol: Optional[float] = Field(default=None, gt=0.0)

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def validate_command(self) -> "RunConfig":
        if self.command in (Command.BOUND, Command.EXTREMAL, Command.SWEEP):
            if not self.distortion:
                raise ValueError(f"{self.command.value} requires --distortion")
        if self.command == Command.SWEEP:
            if self.alpha is None:
                raise ValueError("sweep requires --alpha start:stop:step")
            head = self.distortion.split(":", 1)[0].strip().lower()
            if head not in SWEEP_TEMPLATES:
                raise ValueError(
                    f"sweep needs a template with a free alpha, one of {SWEEP_TEMPLATES}"
                )
            self.alpha_values()
        return self

    @property
    def output_format(self) -> OutputFormat:
        if self.format is not None:
            return self.format
        if self.command in (Command.EXTREMAL, Command.SWEEP):
            return OutputFormat.CSV
        return OutputFormat.JSON

    def alpha_values(self) -> list[float]:
        try:
            start, stop, step = (float(part) for part in self.alpha.split(":"))
        except (AttributeError, ValueError) as exc:
            raise ValueError(f"alpha range must be start:stop:step, got {self.alpha!r}") from exc
        if step <= 0 or not 0.0 < start <= stop < 1.0:
            raise ValueError("alpha range requires 0 < start <= stop < 1 and step > 0")
        count = math.floor((stop - start) / step + 1e-9) + 1
        return [round(start + i * step, 12) for i in range(count)]
