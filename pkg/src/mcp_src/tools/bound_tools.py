from __future__ import annotations

from typing import Any, Dict, List, Optional, Union

from fastmcp import FastMCP
from fastmcp.exceptions import ToolError
from pydantic import ValidationError

from cli.output import bound_payload, quantile_payload
from configs.settings import get_settings
from dtos.quantile_dto import MomentSpec
from service.distortion import parse_distortion, to_spec
from service.drm_bounds import bound
from service.families import tail_extremal
from service.quantile_model import tail_bound
from service.var_bounds import var_bound
from utils.const import MCPToolsTags, ShapeClass, Side, SideSelection, VaRKind
from utils.exceptions import DrmBoundsException, NotAttainableException
from utils.formatting import clean_payload

# JSON-like return type without recursive self-references (pydantic-friendly)
JSONValue = Union[None, bool, int, float, str, List[Any], Dict[str, Any]]


def expand_sides(side: str) -> list[Side]:
    selection = SideSelection(side)
    if selection == SideSelection.BOTH:
        return [Side.SUP, Side.INF]
    return [Side(selection.value)]


def distortion_bound_payload(
    distortion: str,
    shape: str = ShapeClass.GENERAL.value,
    side: str = SideSelection.BOTH.value,
    mu: float = 0.0,
    sigma: float = 1.0,
) -> dict[str, Any]:
    h = parse_distortion(distortion)
    m = MomentSpec(mu=mu, sigma=sigma)
    shape_class = ShapeClass(shape)
    payload: dict[str, Any] = {
        "distortion": to_spec(h),
        "class": shape_class.value,
        "mu": mu,
        "sigma": sigma,
    }
    for s in expand_sides(side):
        payload[s.value] = bound_payload(bound(h, shape_class, s, m))
    return clean_payload(payload, get_settings().precision)


def var_bound_payload(
    alpha: float,
    shape: str = ShapeClass.GENERAL.value,
    side: str = SideSelection.BOTH.value,
    kind: str = VaRKind.RIGHT.value,
    mu: float = 0.0,
    sigma: float = 1.0,
) -> dict[str, Any]:
    m = MomentSpec(mu=mu, sigma=sigma)
    shape_class = ShapeClass(shape)
    payload: dict[str, Any] = {
        "alpha": alpha,
        "kind": VaRKind(kind).value,
        "class": shape_class.value,
    }
    for s in expand_sides(side):
        payload[s.value] = bound_payload(var_bound(shape_class, s, VaRKind(kind), alpha, m))
    return clean_payload(payload, get_settings().precision)


def extremal_quantile_payload(
    distortion: str,
    shape: str = ShapeClass.GENERAL.value,
    side: str = Side.SUP.value,
    mu: float = 0.0,
    sigma: float = 1.0,
    grid_size: Optional[int] = None,
) -> dict[str, Any]:
    h = parse_distortion(distortion)
    result = bound(h, ShapeClass(shape), Side(side), MomentSpec(mu=mu, sigma=sigma))
    if result.extremal is None:
        raise NotAttainableException(
            result.diagnostic or f"{side} of {to_spec(h)} over {shape} is not attained"
        )
    settings = get_settings()
    payload = {"distortion": to_spec(h), "class": shape, "side": side, "value": result.value}
    payload.update(quantile_payload(result.extremal, grid_size or settings.export_grid))
    return clean_payload(payload, settings.precision)


def tail_bound_payload(shape: str, v: float) -> dict[str, Any]:
    shape_class = ShapeClass(shape)
    payload: dict[str, Any] = {
        "class": shape_class.value,
        "v": v,
        "bound": tail_bound(shape_class, v),
    }
    try:
        payload["extremal"] = quantile_payload(tail_extremal(shape_class, v), None)
    except NotAttainableException as exc:
        payload["diagnostic"] = exc.message
    return clean_payload(payload, get_settings().precision)


def run_tool(fn, *args, **kwargs) -> JSONValue:
    try:
        return fn(*args, **kwargs)
    except (DrmBoundsException, ValidationError, ValueError) as exc:
        raise ToolError(str(getattr(exc, "message", exc)))


def register_bound_tools(mcp: FastMCP) -> None:
    """Register bound tools.

    Tools:
      - distortion_bound: sup / inf of a distortion risk measure over a class.
      - var_bound: closed-form VaR bounds.
      - extremal_quantile: quantile rows of the attaining law.
      - tail_bound: one-sided tail probability bound.
    """

    @mcp.tool(
        name="distortion_bound",
        description=(
            "Worst-case (sup) and best-case (inf) value of a distortion risk measure "
            "over laws with given mean and standard deviation. Distortions use the "
            "grammar identity, var:a, var+:a, tvar:a, rvar:a,b, ph:a,r, dph:a,r, "
            "pwl:p,h;..., steps:t,c[,l|r];... Classes: general, symmetric, "
            "unimodal, us."
        ),
        tags=[MCPToolsTags.BOUNDS.value],
    )
    def distortion_bound_tool(
        distortion: str,
        shape: str = ShapeClass.GENERAL.value,
        side: str = SideSelection.BOTH.value,
        mu: float = 0.0,
        sigma: float = 1.0,
    ) -> JSONValue:
        return run_tool(distortion_bound_payload, distortion, shape, side, mu, sigma)

    @mcp.tool(
        name="var_bound",
        description="Closed-form bounds on VaR- / VaR+ at level alpha over a class.",
        tags=[MCPToolsTags.BOUNDS.value],
    )
    def var_bound_tool(
        alpha: float,
        shape: str = ShapeClass.GENERAL.value,
        side: str = SideSelection.BOTH.value,
        kind: str = VaRKind.RIGHT.value,
        mu: float = 0.0,
        sigma: float = 1.0,
    ) -> JSONValue:
        return run_tool(var_bound_payload, alpha, shape, side, kind, mu, sigma)

    @mcp.tool(
        name="extremal_quantile",
        description="Quantile function (p, q) rows of the law attaining a bound.",
        tags=[MCPToolsTags.EXTREMAL.value],
    )
    def extremal_quantile_tool(
        distortion: str,
        shape: str = ShapeClass.GENERAL.value,
        side: str = Side.SUP.value,
        mu: float = 0.0,
        sigma: float = 1.0,
        grid_size: Optional[int] = None,
    ) -> JSONValue:
        return run_tool(
            extremal_quantile_payload, distortion, shape, side, mu, sigma, grid_size
        )

    @mcp.tool(
        name="tail_bound",
        description=(
            "Sharp bound on P((X - mu) / sigma >= v) over a class, with the law "
            "attaining it when one exists."
        ),
        tags=[MCPToolsTags.BOUNDS.value],
    )
    def tail_bound_tool(shape: str, v: float) -> JSONValue:
        return run_tool(tail_bound_payload, shape, v)
