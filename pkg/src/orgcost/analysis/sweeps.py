from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from orgcost.analysis.allocation import AllocationProblem, induced_scenario, validate_problem
from orgcost.core import (
    LevelMode,
    OrgShape,
    Scenario,
    ValidationError,
    Violation,
    combined_cost_rate,
)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    combined_rate: float
    human_rate: float
    bot_rate: float
    kappa: float


@dataclass(frozen=True)
class SweepTable:
    axis_name: str
    rows: tuple[SweepRow, ...]


def _row(axis_value: float, scenario: Scenario) -> SweepRow:
    b = combined_cost_rate(scenario)
    return SweepRow(axis_value, b.combined_rate, b.human_rate, b.bot_rate, b.kappa)


def sweep_depth(scenario: Scenario, d_min: int, d_max: int) -> SweepTable:
    """Evaluate the combined rate at every depth in ``[d_min, d_max]``.

    Every employee must be placed by from-bottom offset so that the roster
    can be re-resolved at each depth.
    """
    problems = []
    if d_min < 1:
        problems.append(Violation("d_min", d_min, "d_min >= 1"))
    if d_max < d_min:
        problems.append(Violation("d_max", d_max, "d_max >= d_min"))
    for i, e in enumerate(scenario.roster):
        if e.level_mode is not LevelMode.FROM_BOTTOM:
            problems.append(Violation(f"roster[{i}].level_mode", e.level_mode.value,
                                      "depth sweeps need from_bottom levels"))
    if problems:
        raise ValidationError(problems)

    deepest = max((e.level for e in scenario.roster), default=0)
    rows = []
    for depth in range(d_min, d_max + 1):
        if deepest > depth:
            raise ValidationError([Violation(
                "depth", depth, f"from_bottom offset {deepest} does not fit at depth {depth}")])
        rows.append(_row(float(depth), replace(scenario, shape=OrgShape(depth))))
    return SweepTable("depth", tuple(rows))


def sweep_substitution(problem: AllocationProblem, grid: Sequence[float]) -> SweepTable:
    """Combined rate along a global bot share ``phi`` applied to every level."""
    validate_problem(problem)
    problems = []
    for k, phi in enumerate(grid):
        if not 0.0 <= phi <= 1.0:
            problems.append(Violation(f"grid[{k}]", phi, "0 <= phi <= 1"))
        if k and not grid[k - 1] < phi:
            problems.append(Violation(f"grid[{k}]", phi, "grid strictly increasing"))
    if not grid:
        problems.append(Violation("grid", list(grid), "at least one grid value"))
    if problems:
        raise ValidationError(problems)
    n = len(problem.levels)
    rows = tuple(_row(float(phi), induced_scenario(problem, (float(phi),) * n)) for phi in grid)
    return SweepTable("bot_share", rows)


def uniform_grid(steps: int) -> list[float]:
    """``steps + 1`` evenly spaced shares from 0 to 1, endpoints exact."""
    if steps < 1:
        raise ValidationError([Violation("steps", steps, "steps >= 1")])
    return [k / steps for k in range(steps + 1)]
