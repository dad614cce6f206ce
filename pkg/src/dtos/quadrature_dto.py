from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dtos.distortion_dto import DerivativeMeasure
from utils.const import KernelName


class TabulatedKernel(BaseModel):
    """Kernel given by samples, linearly interpolated."""

    model_config = ConfigDict(frozen=True)

    grid: tuple[float, ...]
    values: tuple[float, ...]

    @model_validator(mode="after")
    def validate_table(self) -> "TabulatedKernel":
        if len(self.grid) != len(self.values) or len(self.grid) < 2:
            raise ValueError("kernel table needs matching grid and values")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("kernel grid must be strictly increasing")
        return self


class IntegralSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kernel: Optional[KernelName] = None
    table: Optional[TabulatedKernel] = None
    measure: DerivativeMeasure
    a: float = Field(default=0.0, ge=0.0, le=1.0)
    b: float = Field(default=1.0, ge=0.0, le=1.0)
    tol: float = Field(default=1e-10, gt=0.0)

    @model_validator(mode="after")
    def validate_spec(self) -> "IntegralSpec":
        if (self.kernel is None) == (self.table is None):
            raise ValueError("give exactly one of kernel or table")
        if self.a > self.b:
            raise ValueError("integration interval requires a <= b")
        return self


class IntegralValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    divergent: bool = False
    diagnostic: Optional[str] = None
