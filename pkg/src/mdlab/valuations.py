"""Almost-monotone valuations, metered value queries and compact reports.

A valuation over ``m`` identical items is a table ``v(0..m)`` with
``v(0) = 0`` that is non-decreasing once the single spike index ``k`` is
removed; ``v(k)`` itself is free (non-negative).
"""
from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .exceptions import (
    BadIndex,
    BadSpikeIndex,
    ChainViolation,
    IndexOutOfRange,
    NotNormalized,
    ValuationError,
)

MAX_MONEY = 2**63 - 1

__all__ = [
    "MAX_MONEY",
    "CompactReport",
    "MeteredOracle",
    "Valuation",
    "as_eps",
    "compactify",
    "compactify_bound",
    "enumerate_valuations",
    "gen_random",
    "global_max",
    "new_valuation",
    "report_value",
    "round_down",
    "rounding_levels",
    "spike_instance",
]


def _chain_index(pos, k):
    # position in the spike-free chain -> item count
    return pos + 1 if pos + 1 < k else pos + 2


def _as_money_array(values):
    if isinstance(values, np.ndarray) and values.dtype.kind in "iu":
        if values.size and (values.min() < 0 or int(values.max()) > MAX_MONEY):
            raise ValuationError("values must lie in [0, 2**63 - 1]")
        return values.astype(np.int64, copy=True)
    values = list(values)
    for x in values:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            raise ValuationError(f"values must be integers, got {x!r}")
        if x < 0 or x > MAX_MONEY:
            raise ValuationError(f"value {x} outside [0, 2**63 - 1]")
    return np.array(values, dtype=np.int64)


class Valuation:
    """A validated almost-monotone valuation.

    Instances are immutable; ``v(t)`` returns the value of ``t`` items as a
    Python ``int``.
    """

    __slots__ = ("m", "k", "_values")

    def __init__(self, m: int, values, k: int):
        if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
            raise ValuationError(f"m must be a positive integer, got {m!r}")
        m = int(m)
        arr = _as_money_array(values)
        if arr.shape != (m + 1,):
            raise ValuationError(f"expected {m + 1} values, got {arr.size}")
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= m:
            raise BadSpikeIndex(f"spike index must be in 1..{m}, got {k!r}")
        k = int(k)
        if arr[0] != 0:
            raise NotNormalized(f"v(0) must be 0, got {int(arr[0])}")
        chain = np.delete(arr[1:], k - 1)
        bad = np.flatnonzero(chain[1:] < chain[:-1])
        if bad.size:
            pos = int(bad[0])
            lo, hi = _chain_index(pos, k), _chain_index(pos + 1, k)
            raise ChainViolation(
                lo, f"v({hi})={int(arr[hi])} < v({lo})={int(arr[lo])} with spike k={k}"
            )
        arr.flags.writeable = False
        self.m = m
        self.k = k
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        """Read-only ``int64`` array of the m+1 table entries."""
        return self._values

    def __call__(self, t: int) -> int:
        if not 0 <= t <= self.m:
            raise IndexOutOfRange(f"t={t} outside 0..{self.m}")
        return int(self._values[t])

    def tolist(self) -> list[int]:
        return self._values.tolist()

    def scaled(self, factor: int) -> "Valuation":
        return Valuation(self.m, [x * factor for x in self.tolist()], self.k)

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.k == other.k and np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash((self.k, self._values.tobytes()))

    def __repr__(self):
        vals = self.tolist()
        shown = vals if len(vals) <= 12 else vals[:6] + ["..."] + vals[-3:]
        return f"Valuation(m={self.m}, values={shown}, k={self.k})"

    def to_dict(self) -> dict:
        return {"values": self.tolist(), "k": self.k}


def new_valuation(m: int, values, k: int) -> Valuation:
    """Validate ``values`` and spike ``k`` and return a :class:`Valuation`.

    Raises :class:`NotNormalized`, :class:`ChainViolation` (carrying the
    first violating index) or :class:`BadSpikeIndex`.
    """
    return Valuation(m, values, k)


class MeteredOracle:
    """Value-query access to a valuation that counts every query.

    The spike index is part of the bidder's own knowledge and is readable
    for free through :attr:`spike`.
    """

    def __init__(self, valuation: Valuation):
        self._valuation = valuation
        self._table = valuation.values
        self.queries = 0

    @property
    def m(self) -> int:
        return self._valuation.m

    @property
    def spike(self) -> int:
        return self._valuation.k

    def value(self, t: int) -> int:
        if not 0 <= t <= self._valuation.m:
            raise IndexOutOfRange(f"t={t} outside 0..{self._valuation.m}")
        self.queries += 1
        return int(self._table[t])


def global_max(v: Valuation) -> tuple[int, int]:
    """Return ``(t, v(t))`` maximizing ``v``, ties broken toward larger ``t``."""
    rev = v.values[::-1]
    t = v.m - int(np.argmax(rev))
    return t, int(v.values[t])


def gen_random(m: int, vmax: int, seed) -> Valuation:
    """Draw a random valid valuation, deterministic in ``seed``.

    The spike index is uniform on 1..m, the chain is a sorted sample of
    i.i.d. uniforms on 0..vmax and the spike value is uniform on 0..vmax.
    """
    if m < 1:
        raise ValuationError("m must be >= 1")
    if not 0 <= vmax <= MAX_MONEY:
        raise ValuationError("vmax must lie in [0, 2**63 - 1]")
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, m, endpoint=True))
    chain = np.sort(rng.integers(0, vmax, size=m - 1, endpoint=True, dtype=np.int64))
    spike = rng.integers(0, vmax, endpoint=True, dtype=np.int64)
    values = np.empty(m + 1, dtype=np.int64)
    values[0] = 0
    values[1:k] = chain[: k - 1]
    values[k] = spike
    values[k + 1 :] = chain[k - 1 :]
    return Valuation(m, values, k)


def enumerate_valuations(m: int, vmax: int) -> Iterator[Valuation]:
    """Yield every valid ``(values, k)`` pair with entries in 0..vmax.

    Tables valid for several spike indices are yielded once per index.
    """
    for k in range(1, m + 1):
        for chain in itertools.combinations_with_replacement(range(vmax + 1), m - 1):
            chain = list(chain)
            for spike in range(vmax + 1):
                yield Valuation(m, [0] + chain[: k - 1] + [spike] + chain[k - 1 :], k)


def spike_instance(m: int, t: int, H: int) -> tuple[Valuation, Valuation]:
    """Two valuations that are zero except ``v1(t) = v2(m - t) = H``.

    At ``t = 0`` (resp. ``t = m``) the spike that would sit at index 0 is
    dropped, so the optimum is ``H`` rather than ``2H``.
    """
    if m < 1 or not 0 <= t <= m:
        raise BadIndex(f"need m >= 1 and 0 <= t <= m, got m={m}, t={t}")
    if H <= 0:
        raise BadIndex(f"H must be positive, got {H}")

    def one(at):
        values = [0] * (m + 1)
        if at == 0:
            return Valuation(m, values, 1)
        values[at] = H
        return Valuation(m, values, at)

    return one(t), one(m - t)


# -- rounding ---------------------------------------------------------------

def as_eps(eps) -> Fraction:
    """Coerce ``eps`` (Fraction, int, ``"a/b"`` or ``(a, b)``) to a positive Fraction."""
    if isinstance(eps, (tuple, list)):
        eps = Fraction(int(eps[0]), int(eps[1]))
    elif isinstance(eps, float):
        raise TypeError("eps must be rational; pass a Fraction or 'num/den'")
    else:
        eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return eps


_LEVELS: dict[Fraction, tuple[list[int], list[int]]] = {}


def rounding_levels(eps, upto: int) -> list[int]:
    """Sorted distinct grid levels ``ceil((1+eps)**j)``, extended past ``upto``.

    The returned list is shared and grows on demand; do not mutate it.
    """
    eps = as_eps(eps)
    entry = _LEVELS.get(eps)
    if entry is None:
        entry = _LEVELS[eps] = ([1], [1, 1])
    levels, state = entry
    num, den = state
    pn, pd = eps.denominator + eps.numerator, eps.denominator
    while levels[-1] <= upto:
        num *= pn
        den *= pd
        level = -(-num // den)
        if level > levels[-1]:
            levels.append(level)
    state[0], state[1] = num, den
    return levels


def round_down(x: int, eps) -> int:
    """Round ``x`` down onto the ``(1+eps)``-power grid.

    Returns ``ceil(p**J)`` where ``p = 1 + eps`` and ``J`` is the largest
    exponent with ``p**J <= x``, or 0 for ``x = 0``. The result ``r`` obeys
    ``x / p < r <= x``.
    """
    if x <= 0:
        return 0
    levels = rounding_levels(eps, x)
    return levels[bisect_right(levels, x) - 1]


def _next_level(level: int, eps) -> int:
    if level == 0:
        return 1
    levels = rounding_levels(eps, level)
    return levels[bisect_right(levels, level)]


@dataclass(frozen=True)
class CompactReport:
    """A bidder's rounded step-function message.

    ``breakpoints`` lists ``(t, rounded value)`` where the rounded chain
    changes level; ``spike`` is ``(k, rounded v(k))``. ``queries`` records
    how many value queries produced the report and is not part of equality.
    """

    m: int
    eps: Fraction
    breakpoints: tuple[tuple[int, int], ...]
    spike: tuple[int, int]
    queries: int = field(default=0, compare=False)
    _ts: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "eps", as_eps(self.eps))
        bps = tuple((int(t), int(val)) for t, val in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "spike", (int(self.spike[0]), int(self.spike[1])))
        object.__setattr__(self, "_ts", tuple(t for t, _ in bps))
        if not 1 <= self.spike[0] <= self.m:
            raise BadSpikeIndex(f"spike index {self.spike[0]} outside 1..{self.m}")
        for (t0, a), (t1, b) in zip(bps, bps[1:]):
            if not (t0 < t1 and a < b):
                raise ValueError("breakpoints must strictly increase in t and value")
        if bps and not (1 <= bps[0][0] and bps[-1][0] <= self.m and bps[0][1] > 0):
            raise ValueError("breakpoints must lie in 1..m with positive values")

    @property
    def eps_num(self) -> int:
        return self.eps.numerator

    @property
    def eps_den(self) -> int:
        return self.eps.denominator

    @property
    def indices(self) -> tuple[int, ...]:
        """Item counts the report carries a value for (breakpoints and spike)."""
        return self._ts + (self.spike[0],)

    def value(self, t: int) -> int:
        """Evaluate the reported step function at ``t`` items."""
        if not 0 <= t <= self.m:
            raise IndexOutOfRange(f"t={t} outside 0..{self.m}")
        if t == self.spike[0]:
            return self.spike[1]
        i = bisect_right(self._ts, t)
        return self.breakpoints[i - 1][1] if i else 0

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "eps": [self.eps_num, self.eps_den],
            "breakpoints": [list(bp) for bp in self.breakpoints],
            "spike": list(self.spike),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CompactReport":
        return cls(
            m=int(data["m"]),
            eps=as_eps(data["eps"]),
            breakpoints=tuple(tuple(bp) for bp in data["breakpoints"]),
            spike=tuple(data["spike"]),
        )


def report_value(report: CompactReport, t: int) -> int:
    return report.value(t)


def compactify(oracle: MeteredOracle, eps) -> CompactReport:
    """Build the bidder's compact report with few value queries.

    Every rounded level boundary of the spike-free chain is located by a
    binary search for the first chain position reaching the next grid
    level. With ``B`` levels this costs at most
    ``(B + 1) * (ceil(log2 m) + 2) + 2`` queries.
    """
    eps = as_eps(eps)
    m, k = oracle.m, oracle.spike
    start = oracle.queries
    n = m - 1
    seen: dict[int, int] = {}

    def at(pos):
        if pos not in seen:
            seen[pos] = oracle.value(_chain_index(pos, k))
        return seen[pos]

    breakpoints = []
    if n > 0:
        top = round_down(at(n - 1), eps)
        lo, threshold = 0, 1
        while threshold <= top:
            # first position in [lo, n-1] with value >= threshold; v(n-1) qualifies
            a, b = lo, n - 1
            while a < b:
                mid = (a + b) // 2
                if at(mid) >= threshold:
                    b = mid
                else:
                    a = mid + 1
            level = round_down(at(a), eps)
            breakpoints.append((_chain_index(a, k), level))
            lo, threshold = a + 1, _next_level(level, eps)
    spike_value = round_down(oracle.value(k), eps)
    return CompactReport(
        m=m,
        eps=eps,
        breakpoints=tuple(breakpoints),
        spike=(k, spike_value),
        queries=oracle.queries - start,
    )


def compactify_bound(m: int, levels: int) -> int:
    """Worst-case query count of :func:`compactify` with ``levels`` breakpoints."""
    return (levels + 1) * ((m - 1).bit_length() + 2) + 2

