"""Reference computations kept independent of the code under test."""
import itertools
import math
from fractions import Fraction


def has_negative_cycle_by_enumeration(n, edges):
    """Try every simple cycle on ``n`` nodes (fine for n <= 5)."""
    for size in range(2, n + 1):
        for nodes in itertools.permutations(range(n), size):
            if nodes[0] != min(nodes):
                continue
            ring = nodes + nodes[:1]
            if all((a, b) in edges for a, b in zip(ring, ring[1:])):
                if sum(edges[(a, b)] for a, b in zip(ring, ring[1:])) < 0:
                    return True
    return False


def reference_round_down(x, eps):
    """Ceiling of the largest power of (1 + eps) not exceeding x."""
    if x == 0:
        return 0
    p = 1 + Fraction(eps)
    power = Fraction(1)
    while power * p <= x:
        power *= p
    return math.ceil(power)


def welfare_table(v1, v2):
    return [v1(t) + v2(v1.m - t) for t in range(v1.m + 1)]
