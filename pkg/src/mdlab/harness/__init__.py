"""Executable checks of truthfulness, price menus, ranges and query growth."""
from .affine_fit import Infeasible, fit_affine_maximizer
from .experiments import (
    CSV_HEADER,
    ExperimentRecord,
    GapDemo,
    RatioSummary,
    approximation_ratio,
    query_growth_experiment,
    random_instance,
    range_gap_demo,
    ratio_experiment,
    ratio_on_instance,
    write_records,
)
from .menus import Inconsistency, PriceMenu, extract_price_menu
from .truthfulness import (
    DeviationWitness,
    ValuationGrid,
    check_truthful,
    check_universally_truthful,
)

__all__ = [
    "CSV_HEADER",
    "DeviationWitness",
    "ExperimentRecord",
    "GapDemo",
    "Inconsistency",
    "Infeasible",
    "PriceMenu",
    "RatioSummary",
    "ValuationGrid",
    "approximation_ratio",
    "check_truthful",
    "check_universally_truthful",
    "extract_price_menu",
    "fit_affine_maximizer",
    "query_growth_experiment",
    "random_instance",
    "range_gap_demo",
    "ratio_experiment",
    "ratio_on_instance",
    "write_records",
]
