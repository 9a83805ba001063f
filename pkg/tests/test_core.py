import math

import pytest

from orgcost import (
    ClassParams,
    Employee,
    LevelMode,
    OrgShape,
    Scenario,
    ValidationError,
    WorkforceClass,
    bottom_level_decomposition,
    class_cost_rate,
    combined_cost_rate,
    employee_rate,
    line_worker_rate,
    manager_rate,
    validate_scenario,
)

from oracles import combined_oracle, totals_form, wage

H, B = WorkforceClass.HUMAN, WorkforceClass.BOT


def human(min_wage=15.0, delta_wage=2.0, r_base=0.02):
    return ClassParams(H, min_wage, delta_wage, r_base)


def bot(min_wage=1.0, delta_wage=0.5, r_base=0.02):
    return ClassParams(B, min_wage, delta_wage, r_base)


def scenario(depth, roster, hp=None, bp=None):
    return Scenario(OrgShape(depth), hp or human(), bp or bot(), tuple(roster))


# Expected values below were evaluated by hand from the wage law:
# 15 + 0.5*2*5*3 = 30; r = 0.02*5 = 0.1; 30*1.1**3 = 39.93; 18*1.1**2 = 21.78.

@pytest.mark.parametrize("min_wage, delta_wage, depth, skill, expected", [
    (15, 2, 5, 3, 30.0),
    (10, 4, 2, 0, 10.0),
    (0, 0, 7, 9, 0.0),
])
def test_line_worker_rate(min_wage, delta_wage, depth, skill, expected):
    assert line_worker_rate(human(min_wage, delta_wage), depth, skill) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("min_wage, delta_wage, r_base, depth, level, skill, expected", [
    (15, 2, 0.02, 5, 3, 3, 39.93),
    (15, 2, 0.02, 5, 5, 3, 33.0),
    (10, 4, 0.05, 2, 1, 2, 21.78),
])
def test_manager_rate(min_wage, delta_wage, r_base, depth, level, skill, expected):
    got = manager_rate(human(min_wage, delta_wage, r_base), depth, level, skill)
    assert got == pytest.approx(expected, rel=1e-12)


def test_rate_validation_names_field():
    with pytest.raises(ValidationError) as exc:
        line_worker_rate(human(), 0, 1.0)
    assert exc.value.violations[0].path == "depth"
    with pytest.raises(ValidationError) as exc:
        line_worker_rate(human(), 3, -1.0)
    assert exc.value.violations[0].path == "skill"


@pytest.mark.parametrize("level", [0, 6, 7])
def test_manager_rate_refuses_out_of_range_level(level):
    with pytest.raises(ValidationError, match="level"):
        manager_rate(human(), 5, level, 1.0)


def test_employee_rate_dispatch():
    s = scenario(5, [Employee(H, 6, 3.0, 1.0)])
    assert employee_rate(s, s.roster[0]) == line_worker_rate(human(), 5, 3.0)
    b = Employee(B, 5, 4.0, 1.0)
    # bot line rate 1 + 0.5*0.5*5*4 = 6; one (1 + 0.02*5) step up.
    assert employee_rate(s, b) == pytest.approx(6.0 * 1.1, rel=1e-15)
    with pytest.raises(ValidationError):
        employee_rate(s, Employee(H, 0, 1.0, 1.0))


def test_class_cost_rate_two_forms_agree():
    # Line worker at rate 30 and level-3 manager at 39.93, times 3 and 1.
    s = scenario(5, [Employee(H, 6, 3.0, 3.0), Employee(H, 3, 3.0, 1.0)])
    rate, props, active = class_cost_rate(s, "human")
    assert active
    assert props == pytest.approx((0.75, 0.25))
    assert rate == pytest.approx((90 + 39.93) / 4, rel=1e-12)
    assert rate == pytest.approx(32.4825, rel=1e-12)
    assert rate == pytest.approx(totals_form(s, H), rel=1e-12)


def test_class_cost_rate_single_and_empty():
    s = scenario(5, [Employee(H, 6, 3.0, 3.0), Employee(B, 6, 4.0, 2.5)])
    rate, props, active = class_cost_rate(s, B)
    assert props == (1.0,) and rate == pytest.approx(6.0)
    idle = scenario(5, [Employee(H, 6, 3.0, 3.0), Employee(B, 6, 4.0, 0.0)])
    assert class_cost_rate(idle, B) == (0.0, (), False)


def test_combined_rate_both_active():
    # human rate 32.4825 (example above), bot rate 6 -> kappa 1/2.
    s = scenario(5, [Employee(H, 6, 3.0, 3.0), Employee(H, 3, 3.0, 1.0), Employee(B, 6, 4.0, 7.0)])
    b = combined_cost_rate(s)
    assert b.kappa == 0.5
    assert b.combined_rate == pytest.approx(19.24125, rel=1e-12)
    assert b.combined_rate == pytest.approx(combined_oracle(s), rel=1e-12)
    assert math.fsum(c.weight for c in b.per_employee) == pytest.approx(1.0, abs=1e-12)
    assert [c.index for c in b.per_employee] == [0, 1, 2]


def test_combined_rate_single_active_class():
    s = scenario(5, [Employee(H, 6, 3.0, 3.0), Employee(B, 6, 4.0, 0.0)])
    b = combined_cost_rate(s)
    assert b.kappa == 1.0
    assert b.combined_rate == b.human_rate == pytest.approx(30.0)
    assert not b.bot_active


def test_combined_rate_rejects_all_zero_time():
    with pytest.raises(ValidationError, match="time > 0"):
        combined_cost_rate(scenario(2, [Employee(H, 3, 1.0, 0.0), Employee(B, 3, 1.0, 0.0)]))


def test_per_level_totals_sum_to_combined():
    s = scenario(3, [Employee(H, 1, 2.0, 1.0), Employee(H, 4, 1.0, 5.0), Employee(B, 2, 3.0, 2.0)])
    b = combined_cost_rate(s)
    assert [t.level for t in b.per_level_totals] == [1, 2, 3, 4]
    total = sum(t.human + t.bot for t in b.per_level_totals)
    assert total == pytest.approx(b.combined_rate, rel=1e-12)


def test_decomposition_worked_example():
    hp = ClassParams(H, 10.0, 4.0, 0.1)
    bp = ClassParams(B, 2.0, 1.0, 0.1)
    s = scenario(2, [Employee(H, 3, 1.0, 1.0), Employee(H, 3, 3.0, 3.0), Employee(B, 3, 2.0, 5.0)], hp, bp)
    d = bottom_level_decomposition(s)
    assert d.alpha_human == pytest.approx(5.0, rel=1e-12)
    assert d.beta_human == pytest.approx(4.0, rel=1e-12)
    assert d.weighted_skill_human == pytest.approx(1.25, rel=1e-12)
    assert d.alpha_bot == pytest.approx(1.0, rel=1e-12)
    assert d.beta_bot == pytest.approx(1.0, rel=1e-12)
    assert d.weighted_skill_bot == pytest.approx(1.0, rel=1e-12)
    assert d.bottom_level_total == pytest.approx(12.0, rel=1e-9)
    assert d.recomposed_total == pytest.approx(12.0, rel=1e-9)
    assert d.management_residual == pytest.approx(0.0, abs=1e-12)
    assert combined_oracle(s) == pytest.approx(12.0, rel=1e-12)


def test_decomposition_empty_bottom_level():
    s = scenario(2, [Employee(H, 1, 1.0, 2.0), Employee(B, 2, 2.0, 1.0)])
    d = bottom_level_decomposition(s)
    assert (d.alpha_human, d.beta_human, d.alpha_bot, d.beta_bot, d.bottom_level_total) == (0, 0, 0, 0, 0)
    assert d.management_residual == combined_cost_rate(s).combined_rate


def test_decomposition_zero_skill_reduces_to_alphas():
    s = scenario(4, [Employee(H, 5, 0.0, 2.0), Employee(B, 5, 0.0, 1.0), Employee(H, 2, 1.0, 1.0)])
    d = bottom_level_decomposition(s)
    assert d.weighted_skill_human == d.weighted_skill_bot == 0.0
    assert d.bottom_level_total == pytest.approx(d.alpha_human + d.alpha_bot, rel=1e-12)


def test_validate_resolves_from_bottom():
    s = validate_scenario(scenario(3, [Employee(H, 0, 1.0, 1.0, LevelMode.FROM_BOTTOM)]))
    assert s.resolved_levels == (4,)
    assert combined_cost_rate(s).per_employee[0].level == 4


def test_validate_reports_every_violation():
    s = Scenario(
        OrgShape(2),
        ClassParams(H, -1.0, 2.0, 0.0),
        bot(),
        (Employee(H, 5, 1.0, -1.0), Employee(B, 3, -2.0, 1.0)),
    )
    with pytest.raises(ValidationError) as exc:
        validate_scenario(s)
    got = {(v.path, v.rule) for v in exc.value.violations}
    assert ("roster[0].time", "time >= 0") in got
    assert ("roster[0].level", "level exceeds depth+1") in got
    assert ("roster[1].skill", "skill >= 0") in got
    assert ("human_params.min_wage", "min_wage >= 0") in got
    assert ("human_params.r_base", "r_base > 0") in got
    assert len(got) == 5


def test_scenario_values_are_immutable():
    s = scenario(1, [Employee(H, 2, 1.0, 1.0)])
    with pytest.raises(AttributeError):
        s.shape = OrgShape(3)


def test_wage_oracle_matches_engine_on_manager_levels():
    p = human(12.5, 3.25, 0.07)
    for depth in range(1, 6):
        for level in range(1, depth + 1):
            assert manager_rate(p, depth, level, 2.5) == pytest.approx(wage(12.5, 3.25, 0.07, depth, level, 2.5), rel=1e-13)
