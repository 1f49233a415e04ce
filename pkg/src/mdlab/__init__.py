"""Truthful and approximate mechanisms for two-bidder extended multi-unit auctions."""
from .mechanisms import (
    AffineMaximizerSpec,
    Coin,
    Outcome,
    affine_maximizer,
    brute_force_opt,
    fptas,
    fptas_from_oracles,
    naive_vcg_fptas,
    random_dictator,
    vcg,
)
from .valuations import (
    CompactReport,
    MeteredOracle,
    Valuation,
    compactify,
    gen_random,
    global_max,
    new_valuation,
    round_down,
    spike_instance,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMaximizerSpec",
    "Coin",
    "CompactReport",
    "MeteredOracle",
    "Outcome",
    "Valuation",
    "affine_maximizer",
    "brute_force_opt",
    "compactify",
    "fptas",
    "fptas_from_oracles",
    "gen_random",
    "global_max",
    "naive_vcg_fptas",
    "new_valuation",
    "random_dictator",
    "round_down",
    "spike_instance",
    "vcg",
]
