"""Payloads and tables emitted by the command line and the MCP tools."""

from __future__ import annotations

import sys
from typing import Any, Optional

from dtos.bound_dto import BoundResult, BracketDetail
from dtos.oracle_dto import OracleReport
from dtos.quantile_dto import QuantileFunction
from service.quantile_model import quantile_rows

BOUND_HEADER = (
    "side",
    "value",
    "method",
    "attainable",
    "bracket_lower",
    "bracket_upper",
    "diagnostic",
)
QUANTILE_HEADER = ("p", "q")
REPORT_HEADER = (
    "distortion",
    "class",
    "side",
    "analytic",
    "constructive",
    "best",
    "gap",
    "violation",
    "attained",
)
SWEEP_HEADER = ("alpha", "sup", "inf", "method")


def bracket_payload(bracket: BracketDetail) -> dict[str, Any]:
    return {
        "lower": bracket.lower,
        "upper": bracket.upper,
        "argmax_b": bracket.argmax_b,
        "branch": bracket.branch.value,
        "grid_size": bracket.grid_size,
        "iterations": bracket.iterations,
    }


def bound_payload(result: BoundResult) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "side": result.side.value,
        "value": result.value,
        "method": result.method.value,
        "attainable": result.attainable,
    }
    if result.bracket is not None:
        payload["bracket"] = bracket_payload(result.bracket)
    if result.diagnostic:
        payload["diagnostic"] = result.diagnostic
    return payload


def bound_row(result: BoundResult) -> tuple:
    bracket = result.bracket
    return (
        result.side.value,
        result.value,
        result.method.value,
        str(result.attainable).lower(),
        bracket.lower if bracket else None,
        bracket.upper if bracket else None,
        result.diagnostic,
    )


def quantile_payload(Q: QuantileFunction, grid_size: Optional[int]) -> dict[str, Any]:
    return {
        "family": Q.family.value if Q.family else None,
        "rows": [[p, q] for p, q in quantile_rows(Q, grid_size)],
    }


def report_payload(report: OracleReport) -> dict[str, Any]:
    return report.model_dump(by_alias=True)


def report_row(report: OracleReport) -> tuple:
    attained = "" if report.attained is None else str(report.attained).lower()
    return (
        report.distortion,
        report.shape.value,
        report.side.value,
        report.analytic_value,
        report.constructive_value,
        report.best_value,
        report.gap,
        str(report.violation).lower(),
        attained,
    )


def write(text: str, output: Optional[str]) -> None:
    if output in (None, "", "-", "stdout"):
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
