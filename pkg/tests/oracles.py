"""Independent reference computations and randomized corpora for the test suite.

Nothing here calls the engine's evaluation path: wages are re-derived from the
wage law by hand and class rates use the total-cost / total-time form.
"""

from __future__ import annotations

import math
import random

import numpy as np

from orgcost import ClassParams, Employee, LevelMode, OrgShape, Scenario, WorkforceClass
from orgcost.analysis import AllocationProblem, LevelWork

HUMAN = WorkforceClass.HUMAN
BOT = WorkforceClass.BOT


def wage(min_wage, delta_wage, r_base, depth, level, skill):
    line = min_wage + delta_wage * depth * skill / 2
    return line * (1 + r_base * depth) ** (depth + 1 - level)


def scenario_wages(s: Scenario) -> list[float]:
    out = []
    for e in s.roster:
        p = s.human_params if e.class_label is HUMAN else s.bot_params
        level = s.shape.depth + 1 - e.level if e.level_mode is LevelMode.FROM_BOTTOM else e.level
        out.append(wage(p.min_wage, p.delta_wage, p.r_base, s.shape.depth, level, e.skill))
    return out


def totals_form(s: Scenario, label: WorkforceClass) -> float | None:
    """Class rate as total cost over total time; None when the class has no time."""
    wages = scenario_wages(s)
    cost = sum(w * e.time for w, e in zip(wages, s.roster) if e.class_label is label)
    time = sum(e.time for e in s.roster if e.class_label is label)
    return None if time == 0 else cost / time


def combined_oracle(s: Scenario) -> float:
    rates = [totals_form(s, c) for c in (HUMAN, BOT)]
    active = [r for r in rates if r is not None]
    return sum(active) / len(active)


def random_scenario(rng: random.Random, max_depth: int = 8, max_employees: int = 20,
                    param_hi: float = 100.0, r_lo: float = 1e-4, r_hi: float = 100.0,
                    skill_hi: float = 10.0, time_lo: float = 0.0, time_hi: float = 10.0,
                    from_bottom: bool | None = None) -> Scenario:
    """Random valid scenario; r_base is log-uniform on [r_lo, r_hi]."""
    depth = rng.randint(1, max_depth)

    def params(label):
        return ClassParams(label, rng.uniform(0, param_hi), rng.uniform(0, param_hi),
                           math.exp(rng.uniform(math.log(r_lo), math.log(r_hi))))

    mix = rng.choice(("both", "both", "both", "human", "bot", "bot_idle"))
    roster = []
    for _ in range(rng.randint(1, max_employees)):
        if mix in ("human", "bot"):
            label = WorkforceClass(mix)
        else:
            label = rng.choice((HUMAN, BOT))
        time = 0.0 if rng.random() < 0.1 else rng.uniform(time_lo, time_hi)
        if mix == "bot_idle" and label is BOT:
            time = 0.0
        level = rng.randint(1, depth + 1)
        fb = rng.random() < 0.5 if from_bottom is None else from_bottom
        if fb:
            roster.append(Employee(label, depth + 1 - level, rng.uniform(0, skill_hi), time, LevelMode.FROM_BOTTOM))
        else:
            roster.append(Employee(label, level, rng.uniform(0, skill_hi), time))
    if not any(e.time > 0 for e in roster):
        e = roster[0]
        roster[0] = Employee(HUMAN, e.level, e.skill, 1.0, e.level_mode)
    return Scenario(OrgShape(depth), params(HUMAN), params(BOT), tuple(roster))


def corpus(n: int = 1000, seed: int = 20261016, **kw) -> list[Scenario]:
    rng = random.Random(seed)
    return [random_scenario(rng, **kw) for _ in range(n)]


def random_problem(rng: random.Random, depths=(1, 2)) -> AllocationProblem:
    depth = rng.choice(depths)
    human = ClassParams(HUMAN, rng.uniform(5, 40), rng.uniform(0, 10), rng.uniform(0.01, 0.2))
    bot = ClassParams(BOT, rng.uniform(0, 30), rng.uniform(0, 10), rng.uniform(0.01, 0.2))
    levels = []
    for _ in range(depth + 1):
        lo = rng.choice((0.0, rng.uniform(0, 0.5)))
        hi = rng.choice((1.0, rng.uniform(lo, 1.0)))
        levels.append(LevelWork(rng.uniform(0.5, 40), lo, hi, rng.uniform(0, 5), rng.uniform(0, 5)))
    bottom = levels[-1]
    top_cov = bottom.hours * max(bottom.human_skill, bottom.bot_skill)
    k = rng.choice((0.0, rng.uniform(0, top_cov)))
    return AllocationProblem(OrgShape(depth), human, bot, tuple(levels), k)


def brute_force_allocation(problem: AllocationProblem, points: int = 101):
    """Exhaustive search on ``points`` values per level (np.linspace over the bounds).

    Returns (best value, best phi) with the lexicographic tie rule, or None
    when no grid point satisfies coverage.
    """
    d = problem.shape.depth
    hp, bp = problem.human_params, problem.bot_params
    c_h = [wage(hp.min_wage, hp.delta_wage, hp.r_base, d, i + 1, lw.human_skill) for i, lw in enumerate(problem.levels)]
    c_b = [wage(bp.min_wage, bp.delta_wage, bp.r_base, d, i + 1, lw.bot_skill) for i, lw in enumerate(problem.levels)]
    axes = [np.linspace(lw.bot_share_min, lw.bot_share_max, points) for lw in problem.levels]
    grids = np.meshgrid(*axes, indexing="ij")

    t_h = sum((1 - g) * lw.hours for g, lw in zip(grids, problem.levels))
    t_b = sum(g * lw.hours for g, lw in zip(grids, problem.levels))
    cost_h = sum(c * (1 - g) * lw.hours for c, g, lw in zip(c_h, grids, problem.levels))
    cost_b = sum(c * g * lw.hours for c, g, lw in zip(c_b, grids, problem.levels))
    n_active = (t_h > 0).astype(int) + (t_b > 0).astype(int)
    with np.errstate(invalid="ignore", divide="ignore"):
        r_h = np.where(t_h > 0, cost_h / t_h, 0.0)
        r_b = np.where(t_b > 0, cost_b / t_b, 0.0)
    value = (r_h + r_b) / n_active

    bottom = problem.levels[-1]
    g = grids[-1]
    cov = (1.0 - g) * bottom.hours * bottom.human_skill + g * bottom.hours * bottom.bot_skill
    feasible = cov >= problem.min_coverage
    if not feasible.any():
        return None
    flat = value.reshape(-1)
    ok = feasible.reshape(-1)
    m = flat[ok].min()
    idx = np.flatnonzero(ok & (flat <= m + 1e-12 * max(1.0, abs(m))))[0]
    pos = np.unravel_index(idx, value.shape)
    return float(flat[idx]), tuple(float(axes[k][j]) for k, j in enumerate(pos))
