"""Human/bot split of fixed per-level work, minimized by grid search.

The objective is the combined rate of the scenario induced by a bot-share
vector ``phi`` (one entry per level, top first). Each class's rate is a ratio
of sums linear in ``phi``, and the normalizer jumps when a class empties, so
the search is exhaustive on a per-level grid and then refined by repeatedly
halving a box around the incumbent. Ties within a relative ``1e-12`` go to the
lexicographically smallest ``phi``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from orgcost.core import (
    ClassParams,
    Employee,
    LevelMode,
    OrgShape,
    Scenario,
    ValidationError,
    Violation,
    WorkforceClass,
    _is_finite,
    combined_cost_rate,
    line_worker_rate,
    manager_rate,
)

TIE_RTOL = 1e-12
CHUNK_POINTS = 1 << 20


class AllocationStatus(str, enum.Enum):
    OPTIMAL_ON_GRID = "optimal_on_grid"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LevelWork:
    hours: float
    bot_share_min: float = 0.0
    bot_share_max: float = 1.0
    human_skill: float = 0.0
    bot_skill: float = 0.0


@dataclass(frozen=True)
class AllocationProblem:
    """Fixed work per level to be split between humans and bots.

    ``levels`` runs top first: ``levels[0]`` is level 1 and ``levels[-1]`` the
    line-worker level. ``min_coverage`` is the required sum of skill times
    hours over line workers.
    """

    shape: OrgShape
    human_params: ClassParams
    bot_params: ClassParams
    levels: tuple[LevelWork, ...]
    min_coverage: float = 0.0


@dataclass(frozen=True)
class AllocationSolution:
    bot_share: tuple[float, ...]
    combined_rate: Optional[float]
    coverage: Optional[float]
    status: AllocationStatus


def validate_problem(problem: AllocationProblem) -> AllocationProblem:
    problems: list[Violation] = []
    depth = problem.shape.depth
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 1:
        problems.append(Violation("shape.depth", depth, "depth >= 1"))
    elif len(problem.levels) != depth + 1:
        problems.append(Violation("levels", len(problem.levels), f"exactly depth+1 ({depth + 1}) levels"))
    problems.extend(problem.human_params.violations("human_params"))
    problems.extend(problem.bot_params.violations("bot_params"))
    for i, lw in enumerate(problem.levels):
        path = f"levels[{i}]"
        for name in ("hours", "human_skill", "bot_skill"):
            v = getattr(lw, name)
            if not _is_finite(v) or v < 0:
                problems.append(Violation(f"{path}.{name}", v, f"{name} >= 0"))
        lo, hi = lw.bot_share_min, lw.bot_share_max
        if not _is_finite(lo) or not 0 <= lo <= 1:
            problems.append(Violation(f"{path}.bot_share_min", lo, "0 <= bot_share_min <= 1"))
        if not _is_finite(hi) or not 0 <= hi <= 1:
            problems.append(Violation(f"{path}.bot_share_max", hi, "0 <= bot_share_max <= 1"))
        if _is_finite(lo) and _is_finite(hi) and lo > hi:
            problems.append(Violation(f"{path}.bot_share_max", hi, "bot_share_min <= bot_share_max"))
    if not _is_finite(problem.min_coverage) or problem.min_coverage < 0:
        problems.append(Violation("min_coverage", problem.min_coverage, "min_coverage >= 0"))
    if not problems and not any(lw.hours > 0 for lw in problem.levels):
        problems.append(Violation("levels", 0.0, "some level has hours > 0"))
    if problems:
        raise ValidationError(problems)
    return problem


def induced_scenario(problem: AllocationProblem, phi: Sequence[float]) -> Scenario:
    """Scenario staffing each level with one human and one bot at the given split."""
    depth = problem.shape.depth
    roster = []
    for i, (lw, share) in enumerate(zip(problem.levels, phi)):
        if lw.hours == 0:
            continue
        offset = depth - i
        roster.append(Employee(WorkforceClass.HUMAN, offset, lw.human_skill,
                               (1.0 - share) * lw.hours, LevelMode.FROM_BOTTOM))
        roster.append(Employee(WorkforceClass.BOT, offset, lw.bot_skill,
                               share * lw.hours, LevelMode.FROM_BOTTOM))
    return Scenario(problem.shape, problem.human_params, problem.bot_params, tuple(roster))


def coverage(problem: AllocationProblem, bottom_share: float) -> float:
    lw = problem.levels[-1]
    return (1.0 - bottom_share) * lw.hours * lw.human_skill + bottom_share * lw.hours * lw.bot_skill


def _level_rates(problem: AllocationProblem) -> tuple[np.ndarray, np.ndarray]:
    depth = problem.shape.depth
    human, bot = [], []
    for i, lw in enumerate(problem.levels):
        level = i + 1
        for params, skill, out in ((problem.human_params, lw.human_skill, human),
                                   (problem.bot_params, lw.bot_skill, bot)):
            if level == depth + 1:
                out.append(line_worker_rate(params, depth, skill))
            else:
                out.append(manager_rate(params, depth, level, skill))
    return np.array(human), np.array(bot)


def _tol(value: float) -> float:
    return TIE_RTOL * max(1.0, abs(value))


def _prefer(val: float, phi: tuple, inc: Optional[tuple[float, tuple]]) -> bool:
    if inc is None:
        return True
    inc_val, inc_phi = inc
    if val < inc_val - _tol(inc_val):
        return True
    return abs(val - inc_val) <= _tol(inc_val) and phi < inc_phi


class _Objective:
    """Vectorized combined rate over a product grid of bot shares."""

    def __init__(self, problem: AllocationProblem):
        self.problem = problem
        self.hours = np.array([lw.hours for lw in problem.levels], dtype=float)
        self.c_human, self.c_bot = _level_rates(problem)

    def search(self, axes: list[np.ndarray], incumbent: Optional[tuple[float, tuple]]):
        n = len(axes)
        split = n
        size = 1
        while split > 0 and size * len(axes[split - 1]) <= CHUNK_POINTS:
            split -= 1
            size *= len(axes[split])
        trailing = axes[split:]
        shape = tuple(len(a) for a in trailing)

        # Partial sums over the trailing axes, broadcast over the chunk.
        th = np.zeros(shape)
        tb = np.zeros(shape)
        nh = np.zeros(shape)
        nb = np.zeros(shape)
        for k, a in enumerate(trailing):
            lvl = split + k
            view = [1] * len(trailing)
            view[k] = len(a)
            wh = ((1.0 - a) * self.hours[lvl]).reshape(view)
            wb = (a * self.hours[lvl]).reshape(view)
            th = th + wh
            tb = tb + wb
            nh = nh + self.c_human[lvl] * wh
            nb = nb + self.c_bot[lvl] * wb

        feasible_bottom = self._coverage_mask(axes[-1])
        for lead in itertools.product(*axes[:split]):
            lead_th = sum((1.0 - a) * self.hours[i] for i, a in enumerate(lead))
            lead_tb = sum(a * self.hours[i] for i, a in enumerate(lead))
            lead_nh = sum(self.c_human[i] * (1.0 - a) * self.hours[i] for i, a in enumerate(lead))
            lead_nb = sum(self.c_bot[i] * a * self.hours[i] for i, a in enumerate(lead))
            values = self._combine(th + lead_th, tb + lead_tb, nh + lead_nh, nb + lead_nb)
            if split == n:
                # Bottom level is among the leading axes.
                if not feasible_bottom[list(axes[-1]).index(lead[-1])]:
                    continue
                feasible = np.ones(values.shape, dtype=bool)
            else:
                view = [1] * len(trailing)
                view[-1] = len(axes[-1])
                feasible = np.broadcast_to(feasible_bottom.reshape(view), values.shape)
            if not feasible.any():
                continue
            flat = values.reshape(-1)
            ok = feasible.reshape(-1)
            m = float(flat[ok].min())
            idx = int(np.flatnonzero(ok & (flat <= m + _tol(m)))[0])
            pos = np.unravel_index(idx, shape) if shape else ()
            phi = tuple(float(x) for x in lead) + tuple(float(trailing[k][j]) for k, j in enumerate(pos))
            val = float(flat[idx])
            if _prefer(val, phi, incumbent):
                incumbent = (val, phi)
        return incumbent

    def _coverage_mask(self, bottom_axis: np.ndarray) -> np.ndarray:
        lw = self.problem.levels[-1]
        cov = (1.0 - bottom_axis) * lw.hours * lw.human_skill + bottom_axis * lw.hours * lw.bot_skill
        return cov >= self.problem.min_coverage

    @staticmethod
    def _combine(th, tb, nh, nb):
        th, tb = np.broadcast_arrays(th, tb)
        active_h = th > 0
        active_b = tb > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            rh = np.where(active_h, nh / np.where(active_h, th, 1.0), 0.0)
            rb = np.where(active_b, nb / np.where(active_b, tb, 1.0), 0.0)
        kappa = 1.0 / (active_h.astype(float) + active_b.astype(float))
        return kappa * (rh + rb)


def _axis(lo: float, hi: float, points: int, hours: float) -> np.ndarray:
    # A fixed or workless level has nothing to choose; the tie rule picks lo.
    if lo == hi or hours == 0:
        return np.array([lo])
    return np.linspace(lo, hi, points)


def optimize_allocation(problem: AllocationProblem, coarse_grid_points: int = 11,
                        refinement_rounds: int = 3) -> AllocationSolution:
    """Minimize the combined rate over per-level bot shares.

    Exhaustive search on ``coarse_grid_points`` values per level, then
    ``refinement_rounds`` rounds on a box of half the previous width around the
    incumbent (clamped to the bounds, same point count). Returns status
    ``infeasible`` when no grid point meets the coverage requirement.
    """
    validate_problem(problem)
    problems = []
    if not isinstance(coarse_grid_points, int) or coarse_grid_points < 2:
        problems.append(Violation("coarse_grid_points", coarse_grid_points, "coarse_grid_points >= 2"))
    if not isinstance(refinement_rounds, int) or refinement_rounds < 0:
        problems.append(Violation("refinement_rounds", refinement_rounds, "refinement_rounds >= 0"))
    if problems:
        raise ValidationError(problems)

    objective = _Objective(problem)
    bounds = [(lw.bot_share_min, lw.bot_share_max) for lw in problem.levels]
    axes = [_axis(lo, hi, coarse_grid_points, lw.hours) for (lo, hi), lw in zip(bounds, problem.levels)]
    best = objective.search(axes, None)
    if best is None:
        return AllocationSolution((), None, None, AllocationStatus.INFEASIBLE)

    width = [hi - lo for lo, hi in bounds]
    for _ in range(refinement_rounds):
        width = [w * 0.5 for w in width]
        center = best[1]
        axes = []
        for (lo, hi), w, c, lw in zip(bounds, width, center, problem.levels):
            a, b = max(lo, c - w / 2), min(hi, c + w / 2)
            axes.append(_axis(a, b, coarse_grid_points, lw.hours))
        best = objective.search(axes, best)

    phi = best[1]
    exact = combined_cost_rate(induced_scenario(problem, phi))
    return AllocationSolution(phi, exact.combined_rate, coverage(problem, phi[-1]),
                              AllocationStatus.OPTIMAL_ON_GRID)


def satisfies_constraints(problem: AllocationProblem, phi: Sequence[float]) -> bool:
    if len(phi) != len(problem.levels):
        return False
    for share, lw in zip(phi, problem.levels):
        if not lw.bot_share_min <= share <= lw.bot_share_max:
            return False
    return coverage(problem, phi[-1]) >= problem.min_coverage
