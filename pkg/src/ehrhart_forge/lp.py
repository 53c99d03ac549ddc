"""Exact convex-hull membership via rational linear feasibility.

A point is in conv(V) iff there are convex multipliers (nonnegative,
summing to one) reproducing it. That feasibility problem is solved with a
phase-1 simplex over Fractions using Bland's rule, which terminates on
every input. On success the certificate (the multipliers) is re-verified
before returning.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import InvalidInputError
from .geometry import Point, Polytope, as_point

_ZERO = Fraction(0)
_ONE = Fraction(1)


def convex_combination(
    points: Sequence[Point], target: Point
) -> Optional[Tuple[Fraction, ...]]:
    """Convex multipliers expressing ``target`` over ``points``, or None.

    Solves min(sum of artificials) for  V mu = target, 1.mu = 1, mu >= 0.
    """
    k = len(points)
    if k == 0:
        return None
    dim = len(target)
    m = dim + 1

    # Equality rows (coordinates + normalization), right-hand sides made
    # nonnegative so the artificial basis is feasible.
    rows = []
    rhs = []
    for i in range(dim):
        rows.append([p[i] for p in points])
        rhs.append(target[i])
    rows.append([_ONE] * k)
    rhs.append(_ONE)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-c for c in rows[i]]
            rhs[i] = -rhs[i]

    # Tableau columns: k real + m artificial, then the rhs.
    tab = [rows[i] + [_ONE if j == i else _ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [k + i for i in range(m)]
    # Reduced-cost row for min(sum of artificials), priced out over the
    # artificial basis: cost[j] = -sum_i tab[i][j] on real columns.
    ncols = k + m
    cost = [_ZERO] * (ncols + 1)
    for j in list(range(k)) + [ncols]:
        cost[j] = -sum(tab[i][j] for i in range(m))

    while True:
        enter = -1
        for j in range(ncols):  # Bland: smallest eligible index
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # Unbounded phase-1 objective cannot happen (bounded below by 0);
            # treat defensively as infeasible.
            return None
        piv = tab[leave][enter]
        tab[leave] = [c / piv for c in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [c - f * d for c, d in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [c - f * d for c, d in zip(cost, tab[leave])]
        basis[leave] = enter

    if cost[ncols] != 0:  # optimum of sum(artificials) is -cost[rhs]
        return None

    weights = [_ZERO] * k
    for i, b in enumerate(basis):
        if b < k:
            weights[b] = tab[i][ncols]
    # Exact certificate check: nonnegative, sums to one, reproduces target.
    assert all(w >= 0 for w in weights)
    assert sum(weights) == 1
    for i in range(dim):
        assert sum(w * p[i] for w, p in zip(weights, points)) == target[i]
    return tuple(weights)


def contains_hull(poly: Polytope, point: Sequence) -> bool:
    """True iff the point is a convex combination of the polytope's vertices."""
    x = as_point(point)
    if len(x) != poly.dim:
        raise InvalidInputError(
            f"point of dimension {len(x)} against {poly.dim}-dimensional hull"
        )
    return convex_combination(poly.vertices, x) is not None
