"""Price menus induced by a fixed opponent (taxation principle).

Against a fixed report of bidder 2, a truthful mechanism behaves like a
menu of prices ``price(t)``: bidder 1 always ends up with a ``t`` that
maximizes ``v1(t) - price(t)``. Observed choices give difference
constraints ``price(t*) - price(s) <= v1(t*) - v1(s)``; a menu exists iff
the constraint graph has no negative cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..exceptions import MismatchedM
from ..mechanisms import Mechanism
from ..valuations import Valuation


@dataclass(frozen=True)
class PriceMenu:
    """Price bidder 1 faces for each ``t`` in ``0..m`` (largest price is 0)."""

    prices: tuple[int, ...]

    def best_responses(self, v1: Valuation) -> set[int]:
        profits = [v1(t) - p for t, p in enumerate(self.prices)]
        top = max(profits)
        return {t for t, u in enumerate(profits) if u == top}

    def rationalizes(self, v1: Valuation, t: int) -> bool:
        return t in self.best_responses(v1)


@dataclass(frozen=True)
class Inconsistency:
    """A negative cycle of choice constraints: no menu explains the probes.

    ``cycle`` lists allocations ``t0 -> t1 -> ... -> t0`` whose constraint
    weights sum to ``weight < 0``.
    """

    cycle: tuple[int, ...]
    weight: int


def difference_constraints(choices: Sequence[tuple[Valuation, int]], m: int):
    """Tightest edge weights ``{(s, t): w}`` meaning ``price(t) - price(s) <= w``."""
    edges: dict[tuple[int, int], int] = {}
    for v1, chosen in choices:
        vt = v1(chosen)
        for s in range(m + 1):
            if s == chosen:
                continue
            w = vt - v1(s)
            key = (s, chosen)
            if key not in edges or w < edges[key]:
                edges[key] = w
    return edges


def solve_difference_constraints(n: int, edges: dict[tuple[int, int], int]):
    """Bellman-Ford from a virtual source; returns potentials or a negative cycle."""
    dist = [0] * n
    pred = [-1] * n
    last = -1
    for _ in range(n):
        last = -1
        for (u, v), w in edges.items():
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                pred[v] = u
                last = v
        if last == -1:
            return dist, None
    # a relaxation in round n means a negative cycle reachable through pred
    x = last
    for _ in range(n):
        x = pred[x]
    cycle = [x]
    y = pred[x]
    while y != x:
        cycle.append(y)
        y = pred[y]
    cycle.reverse()
    return None, cycle


def extract_price_menu(
    mechanism: Mechanism, v2_fixed: Valuation, probes: Sequence[Valuation]
) -> PriceMenu | Inconsistency:
    """Recover a menu explaining bidder 1's outcomes against ``v2_fixed``."""
    m = v2_fixed.m
    for v1 in probes:
        if v1.m != m:
            raise MismatchedM(f"probe has m={v1.m}, opponent has m={m}")
    choices = [(v1, mechanism(v1, v2_fixed).t) for v1 in probes]
    edges = difference_constraints(choices, m)
    dist, cycle = solve_difference_constraints(m + 1, edges)
    if cycle is not None:
        ring = cycle + cycle[:1]
        weight = sum(edges[(a, b)] for a, b in zip(ring, ring[1:]))
        return Inconsistency(tuple(cycle), weight)
    top = max(dist)
    return PriceMenu(tuple(d - top for d in dist))
