"""Cost engine for mixed human/bot hierarchical workforces."""

from orgcost.core import (
    ClassParams,
    ClassRate,
    CostBreakdown,
    Decomposition,
    Employee,
    EmployeeCost,
    LevelMode,
    LevelTotal,
    OrgShape,
    Scenario,
    ValidationError,
    Violation,
    WorkforceClass,
    bottom_level_decomposition,
    class_cost_rate,
    combined_cost_rate,
    employee_rate,
    line_worker_rate,
    manager_rate,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "ClassParams",
    "ClassRate",
    "CostBreakdown",
    "Decomposition",
    "Employee",
    "EmployeeCost",
    "LevelMode",
    "LevelTotal",
    "OrgShape",
    "Scenario",
    "ValidationError",
    "Violation",
    "WorkforceClass",
    "bottom_level_decomposition",
    "class_cost_rate",
    "combined_cost_rate",
    "employee_rate",
    "line_worker_rate",
    "manager_rate",
    "validate_scenario",
]
