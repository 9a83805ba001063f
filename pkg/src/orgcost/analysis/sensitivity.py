"""Closed-form parameter derivatives of the combined rate, checked by central differences."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

from orgcost.core import (
    Scenario,
    ValidationError,
    Violation,
    WorkforceClass,
    _breakdown,
    combined_cost_rate,
)

CLASS_PARAMETERS = ("min_wage", "delta_wage", "r_base")
_SKILL_RE = re.compile(r"^skill[\[(](\d+)[\])]$")


@dataclass(frozen=True)
class SensitivityReport:
    parameter_id: str
    analytic_derivative: float
    fd_derivative: float
    step: float
    agreement: float


def parameter_ids(scenario: Scenario) -> list[str]:
    ids = [f"{name}.{label.value}" for label in WorkforceClass for name in CLASS_PARAMETERS]
    ids.extend(f"skill[{i}]" for i in range(len(scenario.roster)))
    return ids


def _parse(parameter_id: str, scenario: Scenario) -> tuple[str, WorkforceClass, int | None]:
    m = _SKILL_RE.match(parameter_id)
    if m:
        index = int(m.group(1))
        if index >= len(scenario.roster):
            raise ValidationError([Violation("parameter_id", parameter_id,
                                             f"roster index < {len(scenario.roster)}")])
        return "skill", scenario.roster[index].class_label, index
    name, _, label = parameter_id.partition(".")
    if name in CLASS_PARAMETERS and label in {c.value for c in WorkforceClass}:
        return name, WorkforceClass(label), None
    raise ValidationError([Violation("parameter_id", parameter_id, "known parameter id")])


def _get(scenario: Scenario, name: str, label: WorkforceClass, index: int | None) -> float:
    if name == "skill":
        return scenario.roster[index].skill
    return getattr(scenario.params_for(label), name)


def _with(scenario: Scenario, name: str, label: WorkforceClass, index: int | None, value: float) -> Scenario:
    if name == "skill":
        roster = list(scenario.roster)
        roster[index] = replace(roster[index], skill=value)
        return replace(scenario, roster=tuple(roster))
    field = "human_params" if label is WorkforceClass.HUMAN else "bot_params"
    return replace(scenario, **{field: replace(scenario.params_for(label), **{name: value})})


def analytic_derivative(scenario: Scenario, parameter_id: str) -> float:
    """d(combined rate)/d(parameter) from the wage law.

    Proportions depend only on times, so each employee contributes its weight
    ``q`` times the derivative of its own wage rate.
    """
    name, label, index = _parse(parameter_id, scenario)
    breakdown = combined_cost_rate(scenario)
    depth = scenario.shape.depth
    params = scenario.params_for(label)
    growth = 1.0 + params.r_base * depth
    terms = []
    for cost in breakdown.per_employee:
        if cost.class_label is not label or (index is not None and cost.index != index):
            continue
        skill = scenario.roster[cost.index].skill
        n = depth - cost.level + 1 if cost.level <= depth else 0
        if name == "min_wage":
            d = growth ** n
        elif name == "delta_wage":
            d = 0.5 * depth * skill * growth ** n
        elif name == "r_base":
            base = params.min_wage + 0.5 * params.delta_wage * depth * skill
            d = base * n * depth * growth ** (n - 1) if n else 0.0
        else:
            d = 0.5 * params.delta_wage * depth * growth ** n
        terms.append(cost.weight * d)
    return math.fsum(terms)


def fd_step(value: float) -> float:
    return max(1e-6, 1e-6 * abs(value))


def sensitivity(scenario: Scenario, parameter_id: str) -> SensitivityReport:
    """Analytic and central-difference derivative of the combined rate.

    Parameters of a class with zero total time sit on the boundary where the
    normalizer jumps, and are refused.
    """
    name, label, index = _parse(parameter_id, scenario)
    breakdown = combined_cost_rate(scenario)
    active = breakdown.human_active if label is WorkforceClass.HUMAN else breakdown.bot_active
    if not active:
        raise ValidationError([Violation("parameter_id", parameter_id,
                                         f"{label.value} class has zero total time; not differentiable")])
    analytic = analytic_derivative(scenario, parameter_id)
    theta = _get(scenario, name, label, index)
    h = fd_step(theta)
    # Steps may leave the valid domain (e.g. skill 0 - h); the formulas extend smoothly.
    up = _breakdown(_with(scenario, name, label, index, theta + h)).combined_rate
    down = _breakdown(_with(scenario, name, label, index, theta - h)).combined_rate
    fd = (up - down) / (2 * h)
    agreement = abs(analytic - fd) / max(abs(analytic), 1e-12)
    return SensitivityReport(f"skill[{index}]" if name == "skill" else parameter_id,
                             analytic, fd, h, agreement)
