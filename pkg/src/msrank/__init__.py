"""Budgeted submodular ranking: order items so that the sum of monotone
submodular functions, each evaluated on the longest prefix within its own
budget, is as large as possible."""

from .core import (BudgetedFunction, Evaluation, Instance, Item, ValidationError, check_ranking,
                   msr_objective, prefix_index, read_instance, validate_instance, write_instance)
from .functions import (Activation, CappedModular, FacilityLocationGain, ValuationOracle,
                        WeightedCoverage, submodularity_audit)
from .greedy import Scheme, TieBreak, run_greedy
from .msrl import best_of, dp_solve, gamma, round_instance

__version__ = "0.1.0"

__all__ = [
    "Activation", "BudgetedFunction", "CappedModular", "Evaluation", "FacilityLocationGain",
    "Instance", "Item", "Scheme", "TieBreak", "ValidationError", "ValuationOracle",
    "WeightedCoverage", "best_of", "check_ranking", "dp_solve", "gamma", "msr_objective",
    "prefix_index", "read_instance", "round_instance", "run_greedy", "submodularity_audit",
    "validate_instance", "write_instance",
]
