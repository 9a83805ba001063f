"""Hierarchical workforce cost model.

An organization of depth ``D`` has management levels ``1..D`` (1 is the top)
and a line-worker level ``D+1``. Humans and bots are paid by the same wage
law with separate constants:

    line worker:        C_{D+1} = min_wage + 0.5 * delta_wage * D * skill
    manager at level i: C_i     = C_{D+1} * (1 + r_base * D) ** (D - i + 1)

A class's task rate is the time-weighted mean of its members' wage rates, and
the combined rate normalizes both class rates so that all weights sum to one.

Everything here is a pure function over frozen dataclasses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence


class WorkforceClass(str, enum.Enum):
    HUMAN = "human"
    BOT = "bot"


class LevelMode(str, enum.Enum):
    ABSOLUTE = "absolute"
    FROM_BOTTOM = "from_bottom"


@dataclass(frozen=True)
class Violation:
    """One broken invariant, addressed by a dotted field path."""

    path: str
    value: Any
    rule: str

    def __str__(self) -> str:
        return f"{self.path}: {self.rule} (got {self.value!r})"


class ValidationError(ValueError):
    """Raised with every violation found, never just the first."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class ClassParams:
    class_label: WorkforceClass
    min_wage: float
    delta_wage: float
    r_base: float

    def violations(self, prefix: str) -> list[Violation]:
        out = []
        if not _is_finite(self.min_wage) or self.min_wage < 0:
            out.append(Violation(f"{prefix}.min_wage", self.min_wage, "min_wage >= 0"))
        if not _is_finite(self.delta_wage) or self.delta_wage < 0:
            out.append(Violation(f"{prefix}.delta_wage", self.delta_wage, "delta_wage >= 0"))
        if not _is_finite(self.r_base) or self.r_base <= 0:
            out.append(Violation(f"{prefix}.r_base", self.r_base, "r_base > 0"))
        return out


@dataclass(frozen=True)
class OrgShape:
    depth: int

    @property
    def line_level(self) -> int:
        return self.depth + 1


@dataclass(frozen=True)
class Employee:
    class_label: WorkforceClass
    level: int
    skill: float
    time: float
    level_mode: LevelMode = LevelMode.ABSOLUTE

    def absolute_level(self, depth: int) -> int:
        """Level counted from the top; offset 0 from the bottom is ``depth + 1``."""
        if self.level_mode is LevelMode.FROM_BOTTOM:
            return depth + 1 - self.level
        return self.level


@dataclass(frozen=True)
class Scenario:
    shape: OrgShape
    human_params: ClassParams
    bot_params: ClassParams
    roster: tuple[Employee, ...] = ()

    def params_for(self, label: WorkforceClass) -> ClassParams:
        return self.human_params if label is WorkforceClass.HUMAN else self.bot_params

    @property
    def resolved_levels(self) -> tuple[int, ...]:
        d = self.shape.depth
        return tuple(e.absolute_level(d) for e in self.roster)


@dataclass(frozen=True)
class EmployeeCost:
    index: int
    class_label: WorkforceClass
    level: int
    rate: float
    proportion: float
    weight: float


@dataclass(frozen=True)
class LevelTotal:
    level: int
    human: float
    bot: float


class ClassRate(NamedTuple):
    rate: float
    proportions: tuple[float, ...]
    active: bool


@dataclass(frozen=True)
class CostBreakdown:
    per_employee: tuple[EmployeeCost, ...]
    human_rate: float
    bot_rate: float
    kappa: float
    combined_rate: float
    per_level_totals: tuple[LevelTotal, ...]
    human_active: bool = True
    bot_active: bool = True


@dataclass(frozen=True)
class Decomposition:
    alpha_human: float
    beta_human: float
    weighted_skill_human: float
    alpha_bot: float
    beta_bot: float
    weighted_skill_bot: float
    bottom_level_total: float
    management_residual: float
    recomposed_total: float = field(default=0.0)


def _is_finite(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


# Raw wage law, no domain checks. Also used by finite differencing, which
# may step a parameter just outside its valid range.
def _line_rate(min_wage: float, delta_wage: float, depth: int, skill: float) -> float:
    return min_wage + 0.5 * delta_wage * depth * skill


def _wage(params: ClassParams, depth: int, level: int, skill: float) -> float:
    base = _line_rate(params.min_wage, params.delta_wage, depth, skill)
    if level == depth + 1:
        return base
    return base * (1.0 + params.r_base * depth) ** (depth - level + 1)


def _check_rate_inputs(params: ClassParams, depth: int, skill: float) -> list[Violation]:
    out = params.violations(params.class_label.value + "_params")
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 1:
        out.append(Violation("depth", depth, "depth >= 1"))
    if not _is_finite(skill) or skill < 0:
        out.append(Violation("skill", skill, "skill >= 0"))
    return out


def line_worker_rate(params: ClassParams, depth: int, skill: float) -> float:
    """Wage rate of a line worker of the given class, depth and skill."""
    problems = _check_rate_inputs(params, depth, skill)
    if problems:
        raise ValidationError(problems)
    return _line_rate(params.min_wage, params.delta_wage, depth, skill)


def manager_rate(params: ClassParams, depth: int, level: int, skill: float) -> float:
    """Wage rate of a manager at ``level`` in ``[1, depth]``.

    Line workers (``level == depth + 1``) are refused; use :func:`line_worker_rate`.
    """
    problems = _check_rate_inputs(params, depth, skill)
    if isinstance(depth, int) and (not isinstance(level, int) or not 1 <= level <= depth):
        problems.append(Violation("level", level, f"1 <= level <= depth ({depth})"))
    if problems:
        raise ValidationError(problems)
    return _wage(params, depth, level, skill)


def employee_rate(scenario: Scenario, employee: Employee) -> float:
    depth = scenario.shape.depth
    level = employee.absolute_level(depth)
    params = scenario.params_for(employee.class_label)
    if level == depth + 1:
        return line_worker_rate(params, depth, employee.skill)
    return manager_rate(params, depth, level, employee.skill)


def validate_scenario(scenario: Scenario) -> Scenario:
    """Check every scenario invariant and raise one aggregated error.

    Returns the scenario unchanged on success. Declared level forms are kept
    (depth sweeps need the from-bottom offsets); ``Scenario.resolved_levels``
    gives the absolute levels.
    """
    problems: list[Violation] = []
    depth = scenario.shape.depth
    depth_ok = isinstance(depth, int) and not isinstance(depth, bool) and depth >= 1
    if not depth_ok:
        problems.append(Violation("shape.depth", depth, "depth >= 1"))
    for name, params, label in (
        ("human_params", scenario.human_params, WorkforceClass.HUMAN),
        ("bot_params", scenario.bot_params, WorkforceClass.BOT),
    ):
        if params.class_label is not label:
            problems.append(Violation(f"{name}.class_label", params.class_label, f"class_label == {label.value}"))
        problems.extend(params.violations(name))

    any_time = False
    for i, e in enumerate(scenario.roster):
        path = f"roster[{i}]"
        if not isinstance(e.class_label, WorkforceClass):
            problems.append(Violation(f"{path}.class", e.class_label, "class in {human, bot}"))
        if not isinstance(e.level, int) or isinstance(e.level, bool):
            problems.append(Violation(f"{path}.level", e.level, "level is an integer"))
        elif depth_ok:
            if e.level_mode is LevelMode.FROM_BOTTOM and e.level < 0:
                problems.append(Violation(f"{path}.level", e.level, "from_bottom offset >= 0"))
            else:
                lvl = e.absolute_level(depth)
                if lvl < 1:
                    rule = "from_bottom offset <= depth" if e.level_mode is LevelMode.FROM_BOTTOM else "level >= 1"
                    problems.append(Violation(f"{path}.level", e.level, rule))
                elif lvl > depth + 1:
                    problems.append(Violation(f"{path}.level", e.level, "level exceeds depth+1"))
        if not _is_finite(e.skill) or e.skill < 0:
            problems.append(Violation(f"{path}.skill", e.skill, "skill >= 0"))
        if not _is_finite(e.time) or e.time < 0:
            problems.append(Violation(f"{path}.time", e.time, "time >= 0"))
        elif e.time > 0:
            any_time = True
    if not any_time:
        problems.append(Violation("roster", len(scenario.roster), "at least one employee with time > 0"))
    if problems:
        raise ValidationError(problems)
    return scenario


def _class_rate(scenario: Scenario, label: WorkforceClass, rates: Sequence[float]) -> ClassRate:
    members = [i for i, e in enumerate(scenario.roster) if e.class_label is label]
    total = math.fsum(scenario.roster[i].time for i in members)
    if total == 0:
        return ClassRate(0.0, (), False)
    props = tuple(scenario.roster[i].time / total for i in members)
    rate = math.fsum(rates[i] * p for i, p in zip(members, props))
    return ClassRate(rate, props, True)


def class_cost_rate(scenario: Scenario, class_label: WorkforceClass | str) -> ClassRate:
    """Time-weighted mean wage of one class.

    A class with zero total time is inactive: rate 0 and no proportions.
    """
    validate_scenario(scenario)
    label = WorkforceClass(class_label)
    rates = [_wage(scenario.params_for(e.class_label), scenario.shape.depth, lvl, e.skill)
             for e, lvl in zip(scenario.roster, scenario.resolved_levels)]
    return _class_rate(scenario, label, rates)


def _breakdown(scenario: Scenario) -> CostBreakdown:
    depth = scenario.shape.depth
    levels = scenario.resolved_levels
    rates = [_wage(scenario.params_for(e.class_label), depth, lvl, e.skill)
             for e, lvl in zip(scenario.roster, levels)]
    human = _class_rate(scenario, WorkforceClass.HUMAN, rates)
    bot = _class_rate(scenario, WorkforceClass.BOT, rates)
    denom = (1.0 if human.active else 0.0) + (1.0 if bot.active else 0.0)
    if denom == 0:
        raise ValidationError([Violation("roster", len(scenario.roster), "at least one employee with time > 0")])
    kappa = 1.0 / denom
    props = {WorkforceClass.HUMAN: iter(human.proportions), WorkforceClass.BOT: iter(bot.proportions)}
    active = {WorkforceClass.HUMAN: human.active, WorkforceClass.BOT: bot.active}

    per_employee = []
    level_sums: dict[int, dict[WorkforceClass, list[float]]] = {
        lvl: {WorkforceClass.HUMAN: [], WorkforceClass.BOT: []} for lvl in range(1, depth + 2)
    }
    for i, (e, lvl, rate) in enumerate(zip(scenario.roster, levels, rates)):
        p = next(props[e.class_label]) if active[e.class_label] else 0.0
        q = kappa * p
        per_employee.append(EmployeeCost(i, e.class_label, lvl, rate, p, q))
        level_sums[lvl][e.class_label].append(rate * q)
    per_level = tuple(
        LevelTotal(lvl, math.fsum(s[WorkforceClass.HUMAN]), math.fsum(s[WorkforceClass.BOT]))
        for lvl, s in level_sums.items()
    )
    return CostBreakdown(
        per_employee=tuple(per_employee),
        human_rate=human.rate,
        bot_rate=bot.rate,
        kappa=kappa,
        combined_rate=kappa * (human.rate + bot.rate),
        per_level_totals=per_level,
        human_active=human.active,
        bot_active=bot.active,
    )


def combined_cost_rate(scenario: Scenario) -> CostBreakdown:
    """Joint human and bot cost per unit time, with every intermediate quantity."""
    return _breakdown(validate_scenario(scenario))


def bottom_level_decomposition(scenario: Scenario) -> Decomposition:
    """Split the line-worker slice of the combined rate into base and skill terms.

    ``beta = 0.5 * delta_wage * depth`` keeps the depth factor of the
    line-worker wage law.
    """
    breakdown = combined_cost_rate(scenario)
    depth = scenario.shape.depth
    bottom = depth + 1
    terms = {}
    for label in WorkforceClass:
        params = scenario.params_for(label)
        rows = [c for c in breakdown.per_employee if c.level == bottom and c.class_label is label]
        if not rows:
            terms[label] = (0.0, 0.0, 0.0)
            continue
        q_sum = math.fsum(c.weight for c in rows)
        skill_sum = math.fsum(scenario.roster[c.index].skill * c.weight for c in rows)
        terms[label] = (params.min_wage * q_sum, 0.5 * params.delta_wage * depth, skill_sum)

    ah, bh, sh = terms[WorkforceClass.HUMAN]
    ab, bb, sb = terms[WorkforceClass.BOT]
    slice_ = breakdown.per_level_totals[bottom - 1]
    bottom_total = slice_.human + slice_.bot
    return Decomposition(
        alpha_human=ah,
        beta_human=bh,
        weighted_skill_human=sh,
        alpha_bot=ab,
        beta_bot=bb,
        weighted_skill_bot=sb,
        bottom_level_total=bottom_total,
        management_residual=breakdown.combined_rate - bottom_total,
        recomposed_total=ah + bh * sh + ab + bb * sb,
    )
