"""Brute-force dominant-strategy checks over finite valuation grids."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ..exceptions import GridTooLarge
from ..io import instance_to_dict, money_to_json
from ..mechanisms import Mechanism, Money, Outcome
from ..valuations import Valuation, enumerate_valuations, gen_random

MAX_TRIPLES = 200_000


@dataclass(frozen=True)
class ValuationGrid:
    """All valid valuations with ``m`` items and entries in ``0..vmax``."""

    m: int
    vmax: int

    def enumerate(self) -> list[Valuation]:
        return list(enumerate_valuations(self.m, self.vmax))

    def sample(self, seed) -> Valuation:
        return gen_random(self.m, self.vmax, seed)


@dataclass(frozen=True)
class DeviationWitness:
    """A profitable misreport: ``utility_lie > utility_truth``.

    ``instance`` holds the deviator's true valuation and the opponent's
    report in bidder order.
    """

    instance: tuple[Valuation, Valuation]
    deviator: int
    misreport: Valuation
    utility_truth: Money
    utility_lie: Money
    coin: int | None = None

    def replay(self, mechanism: Mechanism) -> tuple[Money, Money]:
        """Re-run the mechanism and return ``(utility_truth, utility_lie)``."""
        v1, v2 = self.instance
        true = self.instance[self.deviator - 1]
        lie = (self.misreport, v2) if self.deviator == 1 else (v1, self.misreport)
        return (
            mechanism(v1, v2).utility(self.deviator, true),
            mechanism(*lie).utility(self.deviator, true),
        )

    def to_dict(self) -> dict:
        out = {
            "instance": instance_to_dict(*self.instance),
            "deviator": self.deviator,
            "misreport": self.misreport.to_dict(),
            "utility_truth": money_to_json(self.utility_truth),
            "utility_lie": money_to_json(self.utility_lie),
        }
        if self.coin is not None:
            out["coin"] = self.coin
        return out


def _profile(deviator, report, other):
    return (report, other) if deviator == 1 else (other, report)


def _exhaustive(mechanism, types, max_triples):
    n = len(types)
    if n**3 > max_triples:
        raise GridTooLarge(f"{n} types give {n**3} triples per bidder (cap {max_triples})")
    table: dict[tuple[int, int], Outcome] = {
        (i, j): mechanism(types[i], types[j]) for i in range(n) for j in range(n)
    }
    m = types[0].m
    witnesses = []
    for deviator in (1, 2):
        for other in range(n):
            # outcome of each possible own report against this opponent
            outs = [table[_profile(deviator, r, other)] for r in range(n)]
            shares = [o.t if deviator == 1 else m - o.t for o in outs]
            pays = [o.payments[deviator - 1] for o in outs]
            for true in range(n):
                vals = types[true].values
                truth = int(vals[shares[true]]) + pays[true]
                best, best_r = truth, None
                for r in range(n):
                    u = int(vals[shares[r]]) + pays[r]
                    if u > best:
                        best, best_r = u, r
                if best_r is not None:
                    witnesses.append(
                        DeviationWitness(
                            instance=_profile(deviator, types[true], types[other]),
                            deviator=deviator,
                            misreport=types[best_r],
                            utility_truth=truth,
                            utility_lie=best,
                        )
                    )
    return witnesses


def _sampled(mechanism, draw: Callable[[tuple], Valuation], seed, trials):
    witnesses = []
    for trial in range(trials):
        for deviator in (1, 2):
            true = draw((seed, trial, deviator, 0))
            other = draw((seed, trial, deviator, 1))
            lie = draw((seed, trial, deviator, 2))
            u_truth = mechanism(*_profile(deviator, true, other)).utility(deviator, true)
            u_lie = mechanism(*_profile(deviator, lie, other)).utility(deviator, true)
            if u_lie > u_truth:
                witnesses.append(
                    DeviationWitness(
                        instance=_profile(deviator, true, other),
                        deviator=deviator,
                        misreport=lie,
                        utility_truth=u_truth,
                        utility_lie=u_lie,
                    )
                )
    return witnesses


def check_truthful(
    mechanism: Mechanism,
    grid: ValuationGrid | Sequence[Valuation],
    mode: str = "exhaustive",
    *,
    seed: int | None = None,
    trials: int = 0,
    max_triples: int = MAX_TRIPLES,
) -> list[DeviationWitness]:
    """Search for profitable misreports of ``mechanism`` on ``grid``.

    In ``"exhaustive"`` mode every (opponent report, true type, misreport)
    triple is examined for both bidders and the best misreport per
    (opponent, true type) pair is returned; an empty list certifies
    truthfulness on the grid. ``"sampled"`` mode draws ``trials`` random
    triples per bidder from ``seed``.
    """
    if mode == "exhaustive":
        types = grid.enumerate() if isinstance(grid, ValuationGrid) else list(grid)
        return _exhaustive(mechanism, types, max_triples)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if seed is None:
        raise ValueError("sampled mode needs a seed")
    if isinstance(grid, ValuationGrid):
        draw = grid.sample
    else:
        types = list(grid)

        def draw(key):
            return types[int(np.random.default_rng(key).integers(len(types)))]

    return _sampled(mechanism, draw, seed, trials)


def check_universally_truthful(
    realizations: Mapping[object, Mechanism] | Iterable[Mechanism],
    grid: ValuationGrid | Sequence[Valuation],
    mode: str = "exhaustive",
    **kwargs,
) -> list[DeviationWitness]:
    """Run :func:`check_truthful` on every deterministic realization.

    ``realizations`` maps each coin outcome to its deterministic rule (a
    plain iterable is numbered from 1). Witnesses carry the coin they were
    found under.
    """
    if not isinstance(realizations, Mapping):
        realizations = dict(enumerate(realizations, start=1))
    witnesses = []
    for coin, mechanism in realizations.items():
        label = getattr(coin, "chosen", coin)
        for w in check_truthful(mechanism, grid, mode, **kwargs):
            witnesses.append(
                DeviationWitness(
                    w.instance, w.deviator, w.misreport, w.utility_truth, w.utility_lie, label
                )
            )
    return witnesses
