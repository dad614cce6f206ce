from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from cli.output import (
    BOUND_HEADER,
    QUANTILE_HEADER,
    REPORT_HEADER,
    SWEEP_HEADER,
    bound_payload,
    bound_row,
    quantile_payload,
    report_payload,
    report_row,
    write,
)
from configs.logging_config import setup_logging
from configs.settings import BoundSettings, configure
from dtos.quantile_dto import MomentSpec
from dtos.run_config_dto import RunConfig
from service.distortion import from_template, parse_distortion, to_spec
from service.drm_bounds import bound
from service.oracle import DEFAULT_SUITE, run_suite, search
from service.quantile_model import quantile_rows
from utils.const import Command, OutputFormat, ShapeClass, Side, SideSelection
from utils.exceptions import (
    DrmBoundsException,
    InputException,
    NotAttainableException,
    OracleViolationException,
)
from utils.formatting import to_csv, to_json

load_dotenv()

logger = logging.getLogger(__name__)

_FLAG_FIELDS = (
    "distortion",
    "shape",
    "side",
    "mu",
    "sigma",
    "alpha",
    "output",
    "format",
    "seed",
    "budget",
    "quad_tol",
    "violation_tol",
    "attainment_tol",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drm-bounds",
        description="Sharp bounds on distortion risk measures under mean, "
        "variance and shape constraints.",
    )
    parser.add_argument(
        "command",
        choices=[command.value for command in Command],
        help="bound | extremal | verify | sweep",
    )
    parser.add_argument(
        "--config", help="JSON file with RunConfig fields; flags override it."
    )
    parser.add_argument(
        "--distortion",
        help="e.g. tvar:0.75, rvar:0.9,0.99, ph:0.9,0.75, pwl:0,0;0.5,0.2;1,1 "
        "(sweep: var, var+, tvar, rvar:<beta>, ph:<r>)",
    )
    parser.add_argument(
        "--class",
        dest="shape",
        choices=[shape.value for shape in ShapeClass],
        help="Distribution class (default general).",
    )
    parser.add_argument(
        "--side", choices=[side.value for side in SideSelection], help="Default both."
    )
    parser.add_argument("--mu", type=float, help="Mean (default 0).")
    parser.add_argument("--sigma", type=float, help="Standard deviation (default 1).")
    parser.add_argument("--alpha", help="Sweep range start:stop:step.")
    parser.add_argument("--output", help="Output path; stdout when omitted.")
    parser.add_argument(
        "--format", choices=[fmt.value for fmt in OutputFormat], help="json or csv."
    )
    parser.add_argument("--seed", type=int, help="Oracle seed (default DRMB_SEED).")
    parser.add_argument("--budget", type=int, help="Oracle evaluations per search.")
    parser.add_argument("--quad-tol", dest="quad_tol", type=float)
    parser.add_argument("--violation-tol", dest="violation_tol", type=float)
    parser.add_argument("--attainment-tol", dest="attainment_tol", type=float)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """RunConfig from the optional JSON file, overridden by explicit flags."""
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputException(f"Cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise InputException("Config file must hold a JSON object")
        if "class" in data:
            data["shape"] = data.pop("class")
    for field in _FLAG_FIELDS:
        value = getattr(args, field)
        if value is not None:
            data[field] = value
    data["command"] = args.command
    return RunConfig.model_validate(data)


def _sides(selection: SideSelection) -> list[Side]:
    if selection == SideSelection.BOTH:
        return [Side.SUP, Side.INF]
    return [Side(selection.value)]


def _bound(config: RunConfig, m: MomentSpec, settings: BoundSettings) -> int:
    h = parse_distortion(config.distortion)
    results = [bound(h, config.shape, side, m) for side in _sides(config.side)]
    if config.output_format == OutputFormat.CSV:
        text = to_csv(BOUND_HEADER, [bound_row(r) for r in results], settings.precision)
    else:
        payload = {
            "distortion": to_spec(h),
            "class": config.shape.value,
            "mu": m.mu,
            "sigma": m.sigma,
        }
        if len(results) == 1:
            payload.update(bound_payload(results[0]))
        else:
            for result in results:
                payload[result.side.value] = bound_payload(result)
        text = to_json(payload, settings.precision)
    write(text, config.output)
    return 0


def _extremal(config: RunConfig, m: MomentSpec, settings: BoundSettings) -> int:
    h = parse_distortion(config.distortion)
    side = Side.SUP if config.side == SideSelection.BOTH else Side(config.side.value)
    result = bound(h, config.shape, side, m)
    if result.extremal is None:
        reason = result.diagnostic or "no extremal law is available"
        raise NotAttainableException(
            f"{side.value} of {to_spec(h)} over {config.shape.value}: {reason}"
        )
    if config.output_format == OutputFormat.CSV:
        rows = quantile_rows(result.extremal, settings.export_grid)
        text = to_csv(QUANTILE_HEADER, rows, settings.precision)
    else:
        payload = {
            "distortion": to_spec(h),
            "class": config.shape.value,
            "side": side.value,
            "value": result.value,
        }
        payload.update(quantile_payload(result.extremal, settings.export_grid))
        text = to_json(payload, settings.precision)
    write(text, config.output)
    return 0


def _verify(config: RunConfig, m: MomentSpec, settings: BoundSettings) -> int:
    budget = config.budget if config.budget is not None else settings.oracle_budget
    seed = config.seed if config.seed is not None else settings.seed
    if config.distortion:
        h = parse_distortion(config.distortion)
        reports = [
            search(h, config.shape, side, m, budget, seed)
            for side in _sides(config.side)
        ]
    else:
        reports = run_suite(DEFAULT_SUITE, m, budget, seed)
    if config.output_format == OutputFormat.CSV:
        text = to_csv(REPORT_HEADER, [report_row(r) for r in reports], settings.precision)
    else:
        text = to_json([report_payload(r) for r in reports], settings.precision)
    write(text, config.output)
    violations = [r for r in reports if r.violation]
    if violations:
        cases = ", ".join(
            f"{r.distortion} {r.shape.value} {r.side.value} (gap {r.gap:.3e})"
            for r in violations
        )
        raise OracleViolationException(f"Bound violated: {cases}")
    return 0


def _sweep(config: RunConfig, m: MomentSpec, settings: BoundSettings) -> int:
    sides = _sides(config.side)
    rows = []
    for alpha in config.alpha_values():
        h = from_template(config.distortion, alpha)
        results = {side: bound(h, config.shape, side, m) for side in sides}
        methods = []
        for result in results.values():
            if result.method.value not in methods:
                methods.append(result.method.value)
        rows.append(
            (
                alpha,
                results[Side.SUP].value if Side.SUP in results else None,
                results[Side.INF].value if Side.INF in results else None,
                "/".join(methods),
            )
        )
    if config.output_format == OutputFormat.CSV:
        text = to_csv(SWEEP_HEADER, rows, settings.precision)
    else:
        text = to_json([dict(zip(SWEEP_HEADER, row)) for row in rows], settings.precision)
    write(text, config.output)
    return 0


_HANDLERS = {
    Command.BOUND: _bound,
    Command.EXTREMAL: _extremal,
    Command.VERIFY: _verify,
    Command.SWEEP: _sweep,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    settings = configure(
        seed=config.seed,
        quad_tol=config.quad_tol,
        violation_tol=config.violation_tol,
        attainment_tol=config.attainment_tol,
    )
    m = MomentSpec(mu=config.mu, sigma=config.sigma)
    logger.debug(f"Running {config.command.value} for {config.distortion}")
    return _HANDLERS[config.command](config, m, settings)


def _usage_error(parser: argparse.ArgumentParser, message: str) -> int:
    parser.print_usage(sys.stderr)
    sys.stderr.write(f"drm-bounds: error: {message}\n")
    return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        setup_logging()
        return run(load_config(args))
    except ValidationError as exc:
        detail = "; ".join(error["msg"] for error in exc.errors())
        return _usage_error(parser, detail)
    except InputException as exc:
        return _usage_error(parser, exc.message)
    except DrmBoundsException as exc:
        logger.error(f"[{exc.code}] {exc.message}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
