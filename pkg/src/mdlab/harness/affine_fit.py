"""Decide whether observed choices come from a single affine maximizer."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..exceptions import MismatchedM, ScaleTooLarge
from ..mechanisms import AffineMaximizerSpec
from ..valuations import Valuation
from ._simplex import maximize

MAX_TABLEAU = 400_000

Observation = tuple[tuple[Valuation, Valuation], int]


@dataclass(frozen=True)
class Infeasible:
    reason: str


def fit_affine_maximizer(
    observations: Sequence[Observation],
    range_hint: Iterable[int],
    *,
    max_tableau: int = MAX_TABLEAU,
) -> AffineMaximizerSpec | Infeasible:
    """Find weights and constants reproducing every observed choice.

    A choice ``t*`` must weakly beat every larger ``t`` in the range and
    strictly beat every smaller one (ties resolve toward smaller ``t``).
    Constants only matter up to a shift and weights up to scale, so the
    search is the exact LP

        max z  s.t.  z <= w1 + w2,  z <= delta,  w1 + w2 <= 1,  delta <= 1,
                     score(s) - score(t*) + [s < t*] delta <= 0,

    over non-negative variables; the data is consistent iff ``z > 0``.
    """
    rng = sorted(set(range_hint))
    if not rng:
        return Infeasible("empty range")
    pos = {t: i for i, t in enumerate(rng)}
    m = None
    rows: set[tuple] = set()
    for (v1, v2), chosen in observations:
        if v1.m != v2.m or (m is not None and v1.m != m):
            raise MismatchedM("observations disagree on m")
        m = v1.m
        if chosen not in pos:
            return Infeasible(f"observed t={chosen} lies outside the range")
        for s in rng:
            if s == chosen:
                continue
            row = [0] * (len(rng) + 4)
            row[0] = v1(s) - v1(chosen)
            row[1] = v2(m - s) - v2(m - chosen)
            row[2 + pos[s]] += 1
            row[2 + pos[chosen]] -= 1
            row[-2] = 1 if s < chosen else 0
            rows.add(tuple(row))
    if m is not None and rng[-1] > m:
        return Infeasible(f"range entry {rng[-1]} exceeds m={m}")
    nvar = len(rng) + 4  # w1, w2, c_t..., delta, z
    if (len(rows) + 4) * (nvar + len(rows) + 4) > max_tableau:
        raise ScaleTooLarge(f"{len(rows)} constraints over {nvar} unknowns is too large")

    def unit(**coefs):
        row = [0] * nvar
        for idx, val in coefs.items():
            row[{"w1": 0, "w2": 1, "delta": nvar - 2, "z": nvar - 1}[idx]] = val
        return row

    A = [list(r) for r in sorted(rows)]
    b = [0] * len(A)
    A += [unit(z=1, w1=-1, w2=-1), unit(z=1, delta=-1), unit(w1=1, w2=1), unit(delta=1)]
    b += [0, 0, 1, 1]
    c = unit(z=1)
    status, x, value = maximize(c, A, b)
    if status != "optimal" or value <= 0:
        return Infeasible("no affine maximizer over this range explains every choice")
    w1, w2 = x[0], x[1]
    consts = {t: x[2 + pos[t]] for t in rng}
    # scale so the weights sum to one
    total = w1 + w2
    return AffineMaximizerSpec(
        range=tuple(rng),
        w1=w1 / total,
        w2=w2 / total,
        constants={t: Fraction(cv) / total for t, cv in consts.items()},
    )
