import asyncio
import math
import time

import pytest
from fastmcp import Client
from fastmcp.exceptions import ToolError

from mcp_src.server import build_mcp, excluded_tags
from mcp_src.tools.bound_tools import (
    distortion_bound_payload,
    expand_sides,
    extremal_quantile_payload,
    run_tool,
    tail_bound_payload,
    var_bound_payload,
)
from mcp_src.tools.oracle_tools import verify_bound_payload
from utils.const import Side

ALL_TOOLS = {
    "distortion_bound",
    "var_bound",
    "extremal_quantile",
    "tail_bound",
    "verify_bound",
    "tool_health",
}


def test_expand_sides():
    assert expand_sides("both") == [Side.SUP, Side.INF]
    assert expand_sides("inf") == [Side.INF]


def test_distortion_bound_payload():
    payload = distortion_bound_payload("tvar:0.75")
    assert payload["class"] == "general"
    assert payload["sup"]["value"] == pytest.approx(math.sqrt(3.0), abs=1e-8)
    assert payload["sup"]["method"] == "envelope-integral"
    assert payload["inf"]["value"] == 0.0
    assert payload["inf"]["attainable"] is False
    assert "diagnostic" in payload["inf"]


def test_distortion_bound_payload_is_scaled():
    payload = distortion_bound_payload("var:0.9", shape="us", side="sup", mu=1.0, sigma=2.0)
    assert "inf" not in payload
    assert payload["sup"]["value"] == pytest.approx(1.0 + 2.0 * 1.490712, abs=1e-6)


def test_var_bound_payload():
    payload = var_bound_payload(0.9, shape="us", side="sup")
    assert payload["kind"] == "var+"
    assert payload["sup"]["value"] == pytest.approx(1.490712, abs=1e-6)
    assert payload["sup"]["attainable"] is True

    left = var_bound_payload(0.9, side="sup", kind="var-")
    assert left["sup"]["value"] == pytest.approx(3.0)
    assert left["sup"]["attainable"] is False


def test_extremal_quantile_payload():
    payload = extremal_quantile_payload("var:0.9", shape="unimodal", grid_size=11)
    assert payload["family"] == "lower-atom-uniform"
    ps = [p for p, _ in payload["rows"]]
    assert ps[0] == 0.0 and ps[-1] == 1.0
    for i in range(11):
        assert any(p == pytest.approx(i / 10.0) for p in ps)


def test_tail_bound_payload():
    payload = tail_bound_payload("us", 2.0)
    assert payload["bound"] == pytest.approx(1.0 / 18.0)
    assert payload["extremal"]["family"] == "centred-uniform"

    general = tail_bound_payload("general", 0.0)
    assert general["bound"] == 1.0
    assert "extremal" not in general
    assert "variance" in general["diagnostic"]


def test_verify_bound_payload():
    reports = verify_bound_payload("var:0.9", shape="us", side="sup", budget=500, seed=1)
    assert len(reports) == 1
    report = reports[0]
    assert report["class"] == "us"
    assert report["side"] == "sup"
    assert report["violation"] is False
    assert report["seed"] == 1


@pytest.mark.parametrize(
    "fn, args",
    [
        (distortion_bound_payload, ("nonsense",)),
        (distortion_bound_payload, ("tvar:0.5", "bimodal")),
        (var_bound_payload, (1.5,)),
        (distortion_bound_payload, ("tvar:0.5", "general", "both", 0.0, -1.0)),
        (extremal_quantile_payload, ("tvar:0.75", "general", "inf")),
        (tail_bound_payload, ("general", -1.0)),
    ],
)
def test_run_tool_turns_failures_into_tool_errors(fn, args):
    with pytest.raises(ToolError):
        run_tool(fn, *args)


def test_run_tool_passes_results_through():
    assert run_tool(tail_bound_payload, "symmetric", 2.0)["bound"] == pytest.approx(0.125)


def test_excluded_tags(monkeypatch):
    assert excluded_tags() == set()
    monkeypatch.setenv("EXCLUDE_TOOLS_TAGS", " BOUNDS, ORACLE ,")
    assert excluded_tags() == {"BOUNDS", "ORACLE"}


async def _tool_names() -> set[str]:
    async with Client(build_mcp(time.time())) as client:
        tools = await client.list_tools()
    return {tool.name for tool in tools}


def test_server_lists_every_tool():
    assert asyncio.run(_tool_names()) == ALL_TOOLS


def test_server_hides_excluded_groups(monkeypatch):
    monkeypatch.setenv("EXCLUDE_TOOLS_TAGS", "ORACLE,EXTREMAL")
    assert asyncio.run(_tool_names()) == ALL_TOOLS - {"verify_bound", "extremal_quantile"}
