from __future__ import annotations

from typing import Any, Optional

from fastmcp import FastMCP

from cli.output import report_payload
from configs.settings import get_settings
from dtos.quantile_dto import MomentSpec
from mcp_src.tools.bound_tools import JSONValue, expand_sides, run_tool
from service.distortion import parse_distortion
from service.oracle import search
from utils.const import MCPToolsTags, ShapeClass, SideSelection
from utils.formatting import clean_payload


def verify_bound_payload(
    distortion: str,
    shape: str = ShapeClass.GENERAL.value,
    side: str = SideSelection.BOTH.value,
    mu: float = 0.0,
    sigma: float = 1.0,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[dict[str, Any]]:
    h = parse_distortion(distortion)
    m = MomentSpec(mu=mu, sigma=sigma)
    reports = [
        report_payload(search(h, ShapeClass(shape), s, m, budget, seed))
        for s in expand_sides(side)
    ]
    return clean_payload(reports, get_settings().precision)


def register_oracle_tools(mcp: FastMCP) -> None:
    @mcp.tool(
        name="verify_bound",
        description=(
            "Search the class's parametric families of feasible laws and report "
            "whether any beats the analytic bound."
        ),
        tags=[MCPToolsTags.ORACLE.value],
    )
    def verify_bound_tool(
        distortion: str,
        shape: str = ShapeClass.GENERAL.value,
        side: str = SideSelection.BOTH.value,
        mu: float = 0.0,
        sigma: float = 1.0,
        budget: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> JSONValue:
        return run_tool(
            verify_bound_payload, distortion, shape, side, mu, sigma, budget, seed
        )
