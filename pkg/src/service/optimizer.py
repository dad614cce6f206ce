from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np

from dtos.bound_dto import OptimizerTrace

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_max(
    objective: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> tuple[float, int]:
    """Golden-section search for a maximum of ``objective`` on [a, b].

    Returns:
        (argmax, number of objective evaluations)
    """
    dist = b - a
    if dist <= tol:
        return (a + b) / 2.0, 0

    n = int(math.ceil(math.log(tol / dist) / math.log(INV_PHI)))

    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = objective(c)
    yd = objective(d)

    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = objective(c)
        else:
            a = c
            c = d
            yc = yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = objective(d)

    if yc > yd:
        return (a + d) / 2.0, n + 1
    return (c + b) / 2.0, n + 1


def maximize(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    grid_size: int = 1024,
    tol: float = 1e-10,
) -> OptimizerTrace:
    """Uniform scan, then golden-section refinement around the best scan point.

    The objective is piecewise smooth with kinks at the atoms of the measure,
    so the scan picks the basin and the refinement polishes inside it. The
    better of the two candidates is returned.
    """
    grid = np.linspace(lo, hi, grid_size)
    values = np.array([objective(float(x)) for x in grid])
    values = np.where(np.isnan(values), -np.inf, values)
    best = int(np.argmax(values))
    left = float(grid[max(best - 1, 0)])
    right = float(grid[min(best + 1, grid_size - 1)])

    refined, iterations = golden_section_max(objective, left, right, tol)
    refined_value = objective(refined)
    logger.debug(
        f"scan best {values[best]:.12g} at {grid[best]:.6g}, "
        f"golden {refined_value:.12g} at {refined:.12g}"
    )
    if refined_value >= values[best]:
        return OptimizerTrace(
            argmax=refined,
            value=refined_value,
            grid_size=grid_size,
            iterations=iterations,
        )
    return OptimizerTrace(
        argmax=float(grid[best]),
        value=float(values[best]),
        grid_size=grid_size,
        iterations=iterations,
    )
