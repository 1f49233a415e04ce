"""Seeded experiments: range gaps, query growth and approximation ratios."""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from ..exceptions import BadIndex, FullRange
from ..mechanisms import (
    AffineMaximizerSpec,
    affine_maximizer,
    brute_force_opt,
    brute_force_opt_from_oracles,
    fptas_from_oracles,
    random_dictator,
    welfare,
)
from ..valuations import MeteredOracle, Valuation, as_eps, gen_random, spike_instance

CSV_HEADER = ("m", "eps", "seed", "alg", "queries", "welfare", "opt", "ratio")
RATIO_MECHANISMS = ("fptas", "random-dictator")


def random_instance(m: int, vmax: int, seed: int, index: int) -> tuple[Valuation, Valuation]:
    """Instance ``index`` of the stream rooted at ``seed``; independent of other indices."""
    return gen_random(m, vmax, (seed, index, 1)), gen_random(m, vmax, (seed, index, 2))


def approximation_ratio(opt, achieved) -> Fraction | float:
    """``opt / achieved``; 1 when both are zero, ``inf`` when only ``achieved`` is."""
    if opt == 0:
        return Fraction(1)
    if achieved == 0:
        return math.inf
    return Fraction(opt) / Fraction(achieved)


@dataclass(frozen=True)
class ExperimentRecord:
    m: int
    eps: Fraction
    seed: int | None
    alg: str
    queries: int | None
    welfare: int | Fraction
    opt_welfare: int
    ratio: Fraction | float

    def row(self) -> list:
        ratio = self.ratio if isinstance(self.ratio, float) else float(self.ratio)
        wel = self.welfare if isinstance(self.welfare, int) else float(self.welfare)
        eps = f"{self.eps.numerator}/{self.eps.denominator}"
        return [self.m, eps, self.seed, self.alg, self.queries, wel, self.opt_welfare, ratio]

    def to_dict(self) -> dict:
        return dict(zip(CSV_HEADER, self.row()))


def write_records(records: Iterable[ExperimentRecord], fmt: str, out: TextIO) -> None:
    """JSON lines (one record per line) or CSV with the fixed header."""
    if fmt == "json":
        for r in records:
            out.write(json.dumps(r.to_dict()) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(["" if x is None else x for x in r.row()])
    else:
        raise ValueError(f"unknown format {fmt!r}")


# -- range gap ----------------------------------------------------------------

@dataclass(frozen=True)
class GapDemo:
    instance: tuple[Valuation, Valuation]
    missing_t: int
    mir_welfare: int
    opt_welfare: int

    @property
    def ratio(self):
        return approximation_ratio(self.opt_welfare, self.mir_welfare)

    def to_dict(self) -> dict:
        return {
            "m": self.instance[0].m,
            "missing_t": self.missing_t,
            "mir_welfare": self.mir_welfare,
            "opt_welfare": self.opt_welfare,
        }


def range_gap_demo(spec: AffineMaximizerSpec, m: int, H: int) -> GapDemo:
    """Spike instance on an allocation the maximizer cannot output.

    An interior missing ``t`` is preferred (optimum ``2H``); if only an
    endpoint is missing the optimum is ``H``. The maximizer's welfare is 0
    either way, so the ratio grows without bound in ``H``.
    """
    if spec.range[-1] > m:
        raise BadIndex(f"range entry {spec.range[-1]} exceeds m={m}")
    missing = [t for t in range(m + 1) if t not in set(spec.range)]
    if not missing:
        raise FullRange(f"range covers all {m + 1} allocations")
    interior = [t for t in missing if 0 < t < m]
    t = interior[0] if interior else missing[0]
    v1, v2 = spike_instance(m, t, H)
    outcome = affine_maximizer(spec, v1, v2)
    _, opt = brute_force_opt(v1, v2)
    return GapDemo((v1, v2), t, outcome.welfare, opt)


# -- query growth ---------------------------------------------------------------

def query_growth_experiment(
    m_list: Sequence[int], eps, seed: int, vmax: int = 10**6
) -> list[ExperimentRecord]:
    """Exact versus FPTAS value-query counts on one random instance per ``m``.

    The instance for a given ``m`` depends only on ``(seed, m)``.
    """
    eps = as_eps(eps)
    records = []
    for m in m_list:
        v1, v2 = random_instance(m, vmax, seed, m)
        o1, o2 = MeteredOracle(v1), MeteredOracle(v2)
        _, opt = brute_force_opt_from_oracles(o1, o2)
        records.append(
            ExperimentRecord(m, eps, seed, "exact", o1.queries + o2.queries, opt, opt, Fraction(1))
        )
        t, _, queries = fptas_from_oracles(MeteredOracle(v1), MeteredOracle(v2), eps)
        w = welfare(v1, v2, t)
        records.append(
            ExperimentRecord(m, eps, seed, "fptas", queries, w, opt, approximation_ratio(opt, w))
        )
    return records


# -- approximation ratios -------------------------------------------------------

def ratio_on_instance(mechanism: str, v1: Valuation, v2: Valuation, eps=1):
    """``(achieved welfare, opt, queries)``; random-dictator averages both coins."""
    _, opt = brute_force_opt(v1, v2)
    if mechanism == "fptas":
        t, _, queries = fptas_from_oracles(MeteredOracle(v1), MeteredOracle(v2), eps)
        return welfare(v1, v2, t), opt, queries
    if mechanism == "random-dictator":
        both = sum(random_dictator(v1, v2, coin).welfare for coin in (1, 2))
        return Fraction(both, 2), opt, None
    raise ValueError(f"unknown mechanism {mechanism!r}; expected one of {RATIO_MECHANISMS}")


def _ratio_task(args) -> ExperimentRecord:
    mechanism, m, vmax, seed, eps, index = args
    v1, v2 = random_instance(m, vmax, seed, index)
    achieved, opt, queries = ratio_on_instance(mechanism, v1, v2, eps)
    if isinstance(achieved, Fraction) and achieved.denominator == 1:
        achieved = achieved.numerator
    return ExperimentRecord(
        m, eps, seed, mechanism, queries, achieved, opt, approximation_ratio(opt, achieved)
    )


@dataclass(frozen=True)
class RatioSummary:
    mechanism: str
    count: int
    min: Fraction | float | None
    mean: Fraction | float | None
    max: Fraction | float | None
    bound: Fraction

    @classmethod
    def from_records(cls, mechanism: str, records: Sequence[ExperimentRecord], bound):
        ratios = [r.ratio for r in records]
        if not ratios:
            return cls(mechanism, 0, None, None, None, Fraction(bound))
        mean = math.inf if math.inf in ratios else sum(ratios, Fraction(0)) / len(ratios)
        return cls(mechanism, len(ratios), min(ratios), mean, max(ratios), Fraction(bound))

    @property
    def within_bound(self) -> bool:
        return self.max is None or self.max <= self.bound

    def to_dict(self) -> dict:
        def f(x):
            return None if x is None else float(x)

        return {
            "mechanism": self.mechanism,
            "count": self.count,
            "min": f(self.min),
            "mean": f(self.mean),
            "max": f(self.max),
            "bound": f(self.bound),
            "within_bound": self.within_bound,
        }


def mechanism_bound(mechanism: str, eps) -> Fraction:
    return Fraction(2) if mechanism == "random-dictator" else 1 + as_eps(eps)


def ratio_experiment(
    mechanism: str,
    instances: int,
    m: int,
    vmax: int,
    seed: int,
    eps=1,
    *,
    n_jobs: int = 1,
) -> tuple[RatioSummary, list[ExperimentRecord]]:
    """Approximation ratios against the brute-force optimum on random instances.

    Records come back in instance order whatever ``n_jobs`` is.
    """
    if mechanism not in RATIO_MECHANISMS:
        raise ValueError(f"unknown mechanism {mechanism!r}; expected one of {RATIO_MECHANISMS}")
    eps = as_eps(eps)
    tasks = [(mechanism, m, vmax, seed, eps, i) for i in range(instances)]
    if n_jobs > 1 and instances > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            records = list(pool.map(_ratio_task, tasks, chunksize=max(1, instances // (4 * n_jobs))))
    else:
        records = [_ratio_task(t) for t in tasks]
    return RatioSummary.from_records(mechanism, records, mechanism_bound(mechanism, eps)), records
