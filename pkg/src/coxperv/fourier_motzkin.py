"""Exact feasibility of small linear systems by Fourier-Motzkin elimination.

A system is a list of equalities ``a . x = b`` and inequalities ``a . x >= b``
with exact coefficients (Fraction or QSqrt5).  ``feasible_point`` returns a
witness or None.  Intended for a handful of variables (at most 2 * rank).
"""
from __future__ import annotations

from typing import Optional, Sequence

Row = tuple  # (coefficients tuple, rhs)


def _normalize(coeffs: Sequence, rhs) -> Row:
    # positive rescaling only, so the direction of ">=" is kept
    lead = next((c for c in coeffs if c != 0), None)
    if lead is None:
        return tuple(coeffs), rhs
    scale = 1 / abs(lead)
    return tuple(c * scale for c in coeffs), rhs * scale


def _substitute(rows: list, var: int, pivot: Row) -> list:
    pa, pb = pivot
    out = []
    for a, b in rows:
        c = a[var]
        if c == 0:
            out.append((a, b))
            continue
        f = c / pa[var]
        out.append((tuple(x - f * y for x, y in zip(a, pa)), b - f * pb))
    return out


def feasible_point(nvars: int, equalities: Sequence[Row], inequalities: Sequence[Row], zero, one) -> Optional[list]:
    """A point satisfying every row, or None if the system is infeasible."""
    eqs = [(tuple(a), b) for a, b in equalities]
    ineqs = [(tuple(a), b) for a, b in inequalities]

    # Gaussian elimination of the equalities; remember pivots for back-substitution.
    eq_pivots: list[tuple[int, Row]] = []
    while eqs:
        a, b = eqs.pop()
        var = next((i for i, c in enumerate(a) if c != 0), None)
        if var is None:
            if b != 0:
                return None
            continue
        row = (a, b)
        eqs = _substitute(eqs, var, row)
        ineqs = _substitute(ineqs, var, row)
        eq_pivots.append((var, row))

    eliminated = {v for v, _ in eq_pivots}
    free_vars = [v for v in range(nvars) if v not in eliminated]

    # Fourier-Motzkin over the remaining variables, keeping each stage for the witness.
    stages: list[tuple[int, list]] = []
    current = _dedupe(ineqs)
    if current is None:
        return None
    for var in free_vars:
        stages.append((var, current))
        pos, neg, rest = [], [], []
        for a, b in current:
            c = a[var]
            (pos if c > 0 else neg if c < 0 else rest).append((a, b))
        combined = list(rest)
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[var], -an[var]
                combined.append((tuple(cn * x + cp * y for x, y in zip(ap, an)), cn * bp + cp * bn))
        current = _dedupe(combined)
        if current is None:
            return None

    # back-substitute: each variable gets a value inside the bounds of its stage
    x = [zero] * nvars
    assigned: set[int] = set()
    for var, rows in reversed(stages):
        lo = hi = None
        for a, b in rows:
            c = a[var]
            if c == 0:
                continue
            rest = sum((a[i] * x[i] for i in assigned), zero)
            bound = (b - rest) / c
            if c > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if lo is not None and hi is not None:
            x[var] = (lo + hi) / 2
        elif lo is not None:
            x[var] = lo
        elif hi is not None:
            x[var] = hi
        else:
            x[var] = zero
        assigned.add(var)
    for var, (a, b) in reversed(eq_pivots):
        rest = sum((a[i] * x[i] for i in range(nvars) if i != var), zero)
        x[var] = (b - rest) / a[var]
    return x


def _dedupe(rows: list):
    """Normalize rows, drop trivial ones; None if some row reads 0 >= positive."""
    seen = {}
    for a, b in rows:
        a, b = _normalize(a, b)
        if all(c == 0 for c in a):
            if b > 0:
                return None
            continue
        prev = seen.get(a)
        # same left side: keep the tightest lower bound
        if prev is None or b > prev:
            seen[a] = b
    return [(a, b) for a, b in seen.items()]


def satisfies(x: Sequence, equalities: Sequence[Row], inequalities: Sequence[Row], zero) -> bool:
    def val(a):
        return sum((c * xi for c, xi in zip(a, x)), zero)

    return all(val(a) == b for a, b in equalities) and all(val(a) >= b for a, b in inequalities)
