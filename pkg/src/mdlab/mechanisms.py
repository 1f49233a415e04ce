"""Allocation rules and payment schemes for two-bidder extended multi-unit auctions.

Every rule allocates all ``m`` items as ``(t, m - t)``: ``t`` to bidder 1
and the rest to bidder 2. Payments are amounts paid *to* the bidders, so a
bidder's utility is ``v_i(share) + payment_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Mapping, Union

import numpy as np

from .exceptions import BadIndex, EmptyRange, MismatchedEps, MismatchedM
from .io import money_to_json, parse_rational
from .valuations import (
    CompactReport,
    MeteredOracle,
    Valuation,
    as_eps,
    compactify,
    global_max,
)

Money = Union[int, Fraction]
Mechanism = Callable[[Valuation, Valuation], "Outcome"]

__all__ = [
    "AffineMaximizerSpec",
    "Coin",
    "Outcome",
    "affine_maximizer",
    "brute_force_opt",
    "brute_force_opt_from_oracles",
    "fptas",
    "fptas_from_oracles",
    "naive_vcg_fptas",
    "naive_vcg_mechanism",
    "random_dictator",
    "random_dictator_realizations",
    "vcg",
    "welfare",
]


def _money(x) -> Money:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _check_same_m(a, b):
    if a.m != b.m:
        raise MismatchedM(f"bidders disagree on m: {a.m} vs {b.m}")
    return a.m


@dataclass(frozen=True)
class Outcome:
    """Allocation ``(t, m - t)``, payments to each bidder, and welfare."""

    t: int
    payments: tuple[Money, Money]
    welfare: int

    def utility(self, bidder: int, true_valuation: Valuation) -> Money:
        share = self.t if bidder == 1 else true_valuation.m - self.t
        return true_valuation(share) + self.payments[bidder - 1]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "payments": [money_to_json(p) for p in self.payments],
            "welfare": self.welfare,
        }


def welfare(v1: Valuation, v2: Valuation, t: int) -> int:
    return v1(t) + v2(v2.m - t)


def brute_force_opt(v1: Valuation, v2: Valuation) -> tuple[int, int]:
    """Return ``(t, welfare)`` of the welfare-optimal allocation.

    Evaluates all ``m + 1`` allocations; ties go to the smaller ``t``.
    """
    _check_same_m(v1, v2)
    a, b = v1.values, v2.values[::-1]
    if max(int(a.max()), int(b.max())) >= 2**62:
        a, b = a.astype(object), b.astype(object)
    sums = a + b
    t = int(np.argmax(sums))
    return t, int(sums[t])


def brute_force_opt_from_oracles(o1: MeteredOracle, o2: MeteredOracle) -> tuple[int, int]:
    """Exact optimum through value queries; costs exactly ``2 (m + 1)`` queries."""
    m = _check_same_m(o1, o2)
    best_t, best = 0, -1
    for t in range(m + 1):
        w = o1.value(t) + o2.value(m - t)
        if w > best:
            best_t, best = t, w
    return best_t, best


def vcg(v1: Valuation, v2: Valuation) -> Outcome:
    """Optimal allocation; each bidder is paid the other's realized value."""
    t, w = brute_force_opt(v1, v2)
    return Outcome(t, (v2(v2.m - t), v1(t)), w)


@dataclass(frozen=True)
class AffineMaximizerSpec:
    """Range of allowed ``t``, bidder weights and per-allocation constants."""

    range: tuple[int, ...]
    w1: Fraction = Fraction(1)
    w2: Fraction = Fraction(1)
    constants: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        rng = tuple(sorted({int(t) for t in self.range}))
        if not rng:
            raise EmptyRange("affine maximizer range is empty")
        if min(rng) < 0:
            raise BadIndex("range entries must be non-negative")
        w1, w2 = Fraction(self.w1), Fraction(self.w2)
        if w1 < 0 or w2 < 0 or (w1 == 0 and w2 == 0):
            raise ValueError("weights must be non-negative and not both zero")
        consts = {int(t): Fraction(c) for t, c in self.constants.items()}
        if not consts:
            consts = {t: Fraction(0) for t in rng}
        if set(consts) != set(rng):
            raise ValueError("constants must be keyed exactly by the range")
        object.__setattr__(self, "range", rng)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)
        object.__setattr__(self, "constants", consts)

    @classmethod
    def full(cls, m: int) -> "AffineMaximizerSpec":
        """Unit weights, zero constants, every allocation: plain VCG."""
        return cls(range=tuple(range(m + 1)))

    def score(self, v1: Valuation, v2: Valuation, t: int) -> Fraction:
        return self.w1 * v1(t) + self.w2 * v2(v2.m - t) + self.constants[t]

    def to_dict(self) -> dict:
        return {
            "range": list(self.range),
            "w": [money_to_json(self.w1), money_to_json(self.w2)],
            "c": {str(t): money_to_json(c) for t, c in self.constants.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AffineMaximizerSpec":
        w = data.get("w", [1, 1])
        consts = {int(t): parse_rational(c) for t, c in data.get("c", {}).items()}
        return cls(
            range=tuple(data["range"]),
            w1=parse_rational(w[0]),
            w2=parse_rational(w[1]),
            constants=consts,
        )


def affine_maximizer(spec: AffineMaximizerSpec, v1: Valuation, v2: Valuation) -> Outcome:
    """Maximize the weighted welfare plus constants over ``spec.range``.

    Weighted-VCG payments make each bidder's utility the objective divided
    by their weight; a zero-weight bidder is paid nothing.
    """
    m = _check_same_m(v1, v2)
    if spec.range[-1] > m:
        raise BadIndex(f"range entry {spec.range[-1]} exceeds m={m}")
    best_t, best = None, None
    for t in spec.range:
        s = spec.score(v1, v2, t)
        if best is None or s > best:
            best_t, best = t, s
    t = best_t
    c = spec.constants[t]
    pay1 = (spec.w2 * v2(m - t) + c) / spec.w1 if spec.w1 else Fraction(0)
    pay2 = (spec.w1 * v1(t) + c) / spec.w2 if spec.w2 else Fraction(0)
    return Outcome(t, (_money(pay1), _money(pay2)), welfare(v1, v2, t))


def _check_reports(r1: CompactReport, r2: CompactReport) -> int:
    m = _check_same_m(r1, r2)
    if r1.eps != r2.eps:
        raise MismatchedEps(f"reports use different eps: {r1.eps} vs {r2.eps}")
    return m


def fptas(r1: CompactReport, r2: CompactReport) -> tuple[int, int]:
    """Exhaustive search over the allocations the two reports speak about.

    Returns ``(t, reported welfare)``; the true welfare of ``t`` is at least
    ``OPT / (1 + eps)``.
    """
    m = _check_reports(r1, r2)
    spikes = {r1.spike[0], m - r2.spike[0]}
    candidates = set(spikes)
    # Bidder 1's reported value is flat from each of its breakpoints onward
    # and bidder 2's is flat below each of theirs, so one endpoint per step
    # suffices; an endpoint sitting on a spike is replaced by its nearest
    # non-spike neighbour in the flat direction.
    for t in (0, *(t for t, _ in r1.breakpoints)):
        while t in spikes:
            t += 1
        if t <= m:
            candidates.add(t)
    for t in (m, *(m - s for s, _ in r2.breakpoints)):
        while t in spikes:
            t -= 1
        if t >= 0:
            candidates.add(t)
    best_t, best = 0, -1
    for t in sorted(candidates):
        w = r1.value(t) + r2.value(m - t)
        if w > best:
            best_t, best = t, w
    return best_t, best


def fptas_from_oracles(o1: MeteredOracle, o2: MeteredOracle, eps) -> tuple[int, int, int]:
    """Compactify both bidders and run :func:`fptas`; also return queries used."""
    _check_same_m(o1, o2)
    eps = as_eps(eps)
    r1, r2 = compactify(o1, eps), compactify(o2, eps)
    t, w = fptas(r1, r2)
    return t, w, r1.queries + r2.queries


def naive_vcg_fptas(o1: MeteredOracle, o2: MeteredOracle, eps) -> Outcome:
    """VCG payments bolted onto the FPTAS allocation. Not truthful."""
    m = _check_same_m(o1, o2)
    t, _, _ = fptas_from_oracles(o1, o2, eps)
    v1t, v2t = o1.value(t), o2.value(m - t)
    return Outcome(t, (v2t, v1t), v1t + v2t)


def naive_vcg_mechanism(eps) -> Mechanism:
    """:func:`naive_vcg_fptas` as a rule on (reported) valuations."""
    eps = as_eps(eps)

    def mechanism(v1: Valuation, v2: Valuation) -> Outcome:
        return naive_vcg_fptas(MeteredOracle(v1), MeteredOracle(v2), eps)

    mechanism.__name__ = f"naive_vcg_fptas[eps={eps}]"
    return mechanism


@dataclass(frozen=True)
class Coin:
    """Outcome of the dictator draw: which bidder chooses."""

    chosen: int

    def __post_init__(self):
        if self.chosen not in (1, 2):
            raise ValueError(f"coin must pick bidder 1 or 2, got {self.chosen!r}")

    @classmethod
    def draw(cls, rng: np.random.Generator) -> "Coin":
        return cls(int(rng.integers(1, 2, endpoint=True)))


def random_dictator(v1: Valuation, v2: Valuation, coin: Coin | int) -> Outcome:
    """The chosen bidder takes their favourite bundle; no payments."""
    m = _check_same_m(v1, v2)
    chosen = coin.chosen if isinstance(coin, Coin) else Coin(coin).chosen
    if chosen == 1:
        t, _ = global_max(v1)
    else:
        s, _ = global_max(v2)
        t = m - s
    return Outcome(t, (0, 0), welfare(v1, v2, t))


def random_dictator_realizations() -> dict[Coin, Mechanism]:
    """The deterministic mechanism behind each coin outcome."""
    return {Coin(i): partial(random_dictator, coin=Coin(i)) for i in (1, 2)}
