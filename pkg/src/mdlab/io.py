"""JSON formats for instances, reports, outcomes and affine specs."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .valuations import Valuation


def parse_rational(x) -> Fraction:
    """Accept an int, a ``"num/den"`` string or a ``[num, den]`` pair."""
    if isinstance(x, (list, tuple)):
        num, den = x
        return Fraction(int(num), int(den))
    if isinstance(x, float):
        raise ValueError(f"rationals must not be floats: {x!r}")
    return Fraction(x)


def money_to_json(x):
    """Integers stay integers; other rationals become ``"num/den"`` strings."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def instance_from_dict(data: dict) -> tuple[Valuation, Valuation]:
    m = int(data["m"])
    bidders = data["bidders"]
    if len(bidders) != 2:
        raise ValueError(f"an instance has exactly two bidders, got {len(bidders)}")
    v1, v2 = (Valuation(m, b["values"], b["k"]) for b in bidders)
    return v1, v2


def instance_to_dict(v1: Valuation, v2: Valuation) -> dict:
    return {"m": v1.m, "bidders": [v1.to_dict(), v2.to_dict()]}


def load_instance(path) -> tuple[Valuation, Valuation]:
    return instance_from_dict(json.loads(Path(path).read_text()))


def dump_instance(path, v1: Valuation, v2: Valuation) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(v1, v2)) + "\n")
