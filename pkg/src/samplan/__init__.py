"""Time-truncated attribute sampling plans with chained lot decisions."""
from .designer import (
    DesignRequest,
    InfeasibleDesignError,
    Kind,
    PlanDesign,
    SearchBounds,
    design,
    design_gasip,
    design_mchgsp,
    design_sasip,
    feasible,
)
from .lifetest import DistSpec, fraction_nonconforming
from .oc import DomainError, PlanParams, binom_cdf, binom_pmf, oc_mchgsp, oc_mchsp, oc_single
from .simulator import SimConfig, SimResult, compare_to_analytic, simulate_chain

__version__ = "0.1.0"

__all__ = [
    "DesignRequest",
    "DistSpec",
    "DomainError",
    "InfeasibleDesignError",
    "Kind",
    "PlanDesign",
    "PlanParams",
    "SearchBounds",
    "SimConfig",
    "SimResult",
    "binom_cdf",
    "binom_pmf",
    "compare_to_analytic",
    "design",
    "design_gasip",
    "design_mchgsp",
    "design_sasip",
    "feasible",
    "fraction_nonconforming",
    "oc_mchgsp",
    "oc_mchsp",
    "oc_single",
    "simulate_chain",
]
