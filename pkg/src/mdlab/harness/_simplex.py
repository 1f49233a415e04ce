"""Exact dense simplex over Fractions for small LPs.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0`` (so the origin
is feasible and no phase one is needed). Bland's rule guarantees
termination.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence):
    """Return ``(status, x, value)``; status is ``"optimal"`` or ``"unbounded"``."""
    n, rows = len(c), len(A)
    if any(bi < 0 for bi in b):
        raise ValueError("right-hand side must be non-negative")
    # tableau rows: [A | I | b]; objective row holds reduced costs -c
    width = n + rows + 1
    T = []
    for i, row in enumerate(A):
        r = [Fraction(x) for x in row] + [Fraction(0)] * rows + [Fraction(b[i])]
        r[n + i] = Fraction(1)
        T.append(r)
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * (rows + 1)
    basis = [n + i for i in range(rows)]

    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(rows):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded", None, None
        prow = T[leave]
        piv = prow[enter]
        if piv != 1:
            prow = T[leave] = [x / piv for x in prow]
        nz = [j for j, x in enumerate(prow) if x]
        for i in range(rows):
            f = T[i][enter]
            if i != leave and f:
                ri = T[i]
                for j in nz:
                    ri[j] -= f * prow[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * prow[j]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    return "optimal", x, obj[-1]
