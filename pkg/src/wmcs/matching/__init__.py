"""Many-to-one matching with contracts under choice correspondences."""
from .axioms import AxiomResult, axiom_check, more_permissive, sen_alpha, sen_beta, strong_set_monotone, warni, warp, weak_substitutable
from .constraints import ConstraintsMarket, constraints_cs, constraints_to_contracts, equivalence_check, weak_stable_solve, weakly_stable, weakly_stable_set
from .economy import Contract, ContractUniverse, Economy
from .rules import (
    ChoiceRule,
    ExplicitTable,
    Feasibility,
    FunctionRule,
    HospitalSideFeasibility,
    MultidivisionInternalConstraint,
    RejectAll,
    ResponsiveWithCapacity,
    WorkerFromPartialOrder,
    choice,
    indifferent_slots,
    rejection,
)
from .stability import (
    TState,
    blair,
    characterization_check,
    is_alt_stable,
    is_stable,
    matching_cs,
    stable_set,
    stable_solve,
    t_apply,
    t_fixed_points,
    t_monotone_check,
    upgrades,
)

__all__ = [
    "AxiomResult",
    "ChoiceRule",
    "ConstraintsMarket",
    "constraints_cs",
    "constraints_to_contracts",
    "Contract",
    "ContractUniverse",
    "Economy",
    "ExplicitTable",
    "Feasibility",
    "FunctionRule",
    "HospitalSideFeasibility",
    "MultidivisionInternalConstraint",
    "RejectAll",
    "ResponsiveWithCapacity",
    "TState",
    "WorkerFromPartialOrder",
    "axiom_check",
    "blair",
    "characterization_check",
    "choice",
    "equivalence_check",
    "indifferent_slots",
    "is_alt_stable",
    "is_stable",
    "matching_cs",
    "more_permissive",
    "rejection",
    "sen_alpha",
    "sen_beta",
    "stable_set",
    "stable_solve",
    "strong_set_monotone",
    "t_apply",
    "t_fixed_points",
    "t_monotone_check",
    "upgrades",
    "warni",
    "warp",
    "weak_stable_solve",
    "weak_substitutable",
    "weakly_stable",
    "weakly_stable_set",
]
