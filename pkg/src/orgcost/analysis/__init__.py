"""What-if analyses over the cost model."""

from orgcost.analysis.allocation import (
    AllocationProblem,
    AllocationSolution,
    AllocationStatus,
    LevelWork,
    induced_scenario,
    optimize_allocation,
    satisfies_constraints,
    validate_problem,
)
from orgcost.analysis.sensitivity import SensitivityReport, analytic_derivative, parameter_ids, sensitivity
from orgcost.analysis.sweeps import SweepRow, SweepTable, sweep_depth, sweep_substitution, uniform_grid

__all__ = [
    "AllocationProblem",
    "AllocationSolution",
    "AllocationStatus",
    "LevelWork",
    "SensitivityReport",
    "SweepRow",
    "SweepTable",
    "analytic_derivative",
    "induced_scenario",
    "optimize_allocation",
    "parameter_ids",
    "satisfies_constraints",
    "sensitivity",
    "sweep_depth",
    "sweep_substitution",
    "uniform_grid",
    "validate_problem",
]
