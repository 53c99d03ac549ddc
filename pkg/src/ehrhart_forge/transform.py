"""Turn translation families into dilation families, and k-ETP solvers.

A translation family P + t*v/N with an integer point in P becomes Q =
(1/M)P + v/N for a large multiple M of N, so that the dilation counts
|(t+M)Q| reproduce the translate counts. M is found by doubling and direct
verification rather than through distance bounds, so the returned family is
correct by construction.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .counting import (
    TranslationFamily,
    _certified_scaled_count,
    count_lattice_points,
    count_translate,
    ehrhart_value,
)
from .errors import (
    InvalidInputError,
    ResourceLimitError,
    UnsupportedInputError,
    VerificationError,
)
from .geometry import (
    Point,
    Polytope,
    dilate,
    integer_bounding_box,
    pieces_sound,
    scale_point,
    translate,
)
from .lp import contains_hull

_MAX_DOUBLINGS = 200
_DEFAULT_SEARCH_CAP = 1 << 40


@dataclass(frozen=True)
class DilationFamily:
    """Polytope Q with |(t+M)Q| equal to the source counts for 0 <= t < N."""

    q: Polytope
    m: int
    valid_n: int


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Counting polynomial of an integer polytope, coefficients ascending."""

    coefficients: Tuple[Fraction, ...]

    def evaluate(self, t) -> Fraction:
        x = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def evaluate_int(self, t: int) -> int:
        val = self.evaluate(t)
        if val.denominator != 1:
            raise VerificationError(f"polynomial value at t={t} is not an integer: {val}")
        return int(val)


def find_integer_point(poly: Polytope, guard: Optional[int] = None) -> Optional[Point]:
    """Lexicographically smallest integer point of the polytope, or None."""
    if poly.halfspaces is not None:
        return _lex_min_hrep(poly)
    if poly.pieces:
        found = [find_integer_point(q, guard) for _, q in poly.pieces]
        found = [p for p in found if p is not None]
        return min(found) if found else None
    return _lex_min_vrep(poly, guard)


def _lex_min_hrep(poly: Polytope) -> Optional[Point]:
    from .counting import _scaled_rows  # same scaling as the counting engine

    box = integer_bounding_box(poly)
    if any(lo > hi for lo, hi in box):
        return None
    rows = _scaled_rows(poly.halfspaces)
    dim = poly.dim

    def rec(axis, rhs, prefix):
        lo, hi = box[axis]
        for (a, _), r in zip(rows, rhs):
            c = a[axis]
            if c and all(a[j] == 0 for j in range(axis + 1, dim)):
                if c > 0:
                    hi = min(hi, r // c)
                else:
                    lo = max(lo, -(r // (-c)))
        for v in range(lo, hi + 1):
            if axis == dim - 1:
                return prefix + (v,)
            nxt = [r - a[axis] * v for (a, _), r in zip(rows, rhs)]
            hit = rec(axis + 1, nxt, prefix + (v,))
            if hit is not None:
                return hit
        return None

    pt = rec(0, [b for _, b in rows], ())
    return tuple(Fraction(c) for c in pt) if pt is not None else None


def _lex_min_vrep(poly: Polytope, guard: Optional[int]) -> Optional[Point]:
    import itertools

    from .counting import cell_guard

    box = integer_bounding_box(poly)
    if any(lo > hi for lo, hi in box):
        return None
    cells = 1
    for lo, hi in box:
        cells *= hi - lo + 1
    limit = cell_guard(guard)
    if cells > limit:
        raise ResourceLimitError(
            f"integer bounding box has {cells} cells, above the guard of {limit}"
        )
    for cell in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        p = tuple(Fraction(c) for c in cell)
        if contains_hull(poly, p):
            return p
    return None


def _diameter_bound(poly: Polytope) -> int:
    worst = 0
    verts = poly.vertices
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            d2 = sum((a - b) ** 2 for a, b in zip(verts[i], verts[j]))
            worst = max(worst, d2)
    frac = Fraction(worst)
    return math.isqrt(frac.numerator // frac.denominator) + 1


def _dilation_value(q: Polytope, factor: int, guard: Optional[int]) -> Optional[int]:
    """Exact |factor * q| when provably computable, else None.

    Direct enumeration for halfspace systems and integer-aligned piece
    decompositions; the shell certificate for scaled tagged hulls. None
    means "not verifiable at this scale", never an approximate answer.
    """
    scaled = dilate(q, Fraction(factor))
    if scaled.halfspaces is not None:
        return count_lattice_points(scaled, guard)
    if scaled.pieces and pieces_sound(scaled):
        return count_lattice_points(scaled, guard)
    if scaled.scaled_from is not None:
        return _certified_scaled_count(scaled, guard)
    return None


def to_dilation_family(
    family: TranslationFamily,
    guard: Optional[int] = None,
    max_doublings: int = _MAX_DOUBLINGS,
) -> DilationFamily:
    """Verified conversion: Q = (1/M) P0 + v with M doubled until
    |(t+M)Q| matches the family count for every 0 <= t < N.

    P0 is the base translated so an integer point sits at the origin
    (integer translation keeps every count). Needs an integer direction
    vector; fails with a no-integer-point error when the base has none.
    """
    if any(c.denominator != 1 for c in family.direction):
        raise InvalidInputError("conversion needs an integer direction vector")
    anchor = find_integer_point(family.base, guard)
    if anchor is None:
        raise InvalidInputError("base polytope contains no integer point")
    base = translate(family.base, tuple(-c for c in anchor))
    if base.scaled_from is not None:
        # Root the affine provenance here: the origin-normalized copy is the
        # reference the shell certificate measures against.
        base = dataclasses.replace(base, scaled_from=None)
    n = family.denominator
    targets = [count_translate(family, t, guard) for t in range(n)]
    v = scale_point(family.direction, Fraction(1, n))

    m = 2 * n * max(1, _diameter_bound(base))
    for _ in range(max_doublings):
        q = translate(dilate(base, Fraction(1, m)), v)
        if all(
            _dilation_value(q, t + m, guard) == targets[t] for t in range(n)
        ):
            return DilationFamily(q, m, n)
        m *= 2
    raise VerificationError(
        f"no verified M found after {max_doublings} doublings (last tried {m // 2})"
    )


def k_etp(
    poly: Polytope,
    k: int,
    bound: Optional[int] = None,
    guard: Optional[int] = None,
    search_cap: int = _DEFAULT_SEARCH_CAP,
) -> Optional[int]:
    """Largest t >= 0 with f_P(t) < k, or None when no t qualifies.

    Without an explicit bound the polytope must contain an integer point:
    translating it to the origin makes f nondecreasing, enabling doubling
    plus binary search. With a bound, t is scanned downward from it.
    """
    if k < 1:
        raise InvalidInputError("k must be a positive integer")
    if bound is not None:
        for t in range(bound, -1, -1):
            if ehrhart_value(poly, t, guard) < k:
                return t
        return None
    anchor = find_integer_point(poly, guard)
    if anchor is None:
        raise UnsupportedInputError(
            "polytope has no integer point; monotone search unavailable, pass a bound"
        )
    base = translate(poly, tuple(-c for c in anchor))

    def f(t: int) -> int:
        return ehrhart_value(base, t, guard)

    if f(0) >= k:
        return None
    hi = 1
    while f(hi) < k:
        hi *= 2
        if hi > search_cap:
            raise ResourceLimitError(
                f"no t <= {search_cap} reaches {k} lattice points; counts may be bounded"
            )
    lo = hi // 2  # f(lo) < k <= f(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) < k:
            lo = mid
        else:
            hi = mid
    return lo


def ehrhart_poly_interpolate(
    poly: Polytope, guard: Optional[int] = None
) -> EhrhartPolynomial:
    """Lagrange interpolation of f_P through t = 0..dim for integer P.

    The result is checked against direct counts at dim+1 and dim+2 before
    being returned.
    """
    for v in poly.vertices:
        if any(c.denominator != 1 for c in v):
            raise InvalidInputError("interpolation needs integer vertices")
    d = poly.dim
    values = [ehrhart_value(poly, t, guard) for t in range(d + 1)]
    coeffs = _solve_vandermonde(values)
    result = EhrhartPolynomial(tuple(coeffs))
    for t in (d + 1, d + 2):
        if result.evaluate_int(t) != ehrhart_value(poly, t, guard):
            raise VerificationError(f"interpolated polynomial fails direct count at t={t}")
    return result


def _solve_vandermonde(values):
    """Coefficients of the degree <= len(values)-1 polynomial through
    (t, values[t]) for t = 0..len-1, by exact Gaussian elimination."""
    m = len(values)
    rows = [[Fraction(t) ** j for j in range(m)] + [Fraction(values[t])] for t in range(m)]
    for col in range(m):
        pivot = next(r for r in range(col, m) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [c / pv for c in rows[col]]
        for r in range(m):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[j][m] for j in range(m)]


def k_etp_integer(
    poly: Polytope,
    k: int,
    guard: Optional[int] = None,
    search_cap: int = _DEFAULT_SEARCH_CAP,
) -> Optional[int]:
    """k-ETP for integer polytopes via the interpolated polynomial.

    Binary search over polynomial values (monotone for integer polytopes),
    cross-checked against direct counting at the answer and one beyond.
    """
    if k < 1:
        raise InvalidInputError("k must be a positive integer")
    p = ehrhart_poly_interpolate(poly, guard)
    if p.evaluate_int(0) >= k:
        return None
    hi = 1
    while p.evaluate_int(hi) < k:
        hi *= 2
        if hi > search_cap:
            raise ResourceLimitError(
                f"polynomial stays below k={k} up to t={search_cap}"
            )
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if p.evaluate_int(mid) < k:
            lo = mid
        else:
            hi = mid
    if not (
        ehrhart_value(poly, lo, guard) < k and ehrhart_value(poly, lo + 1, guard) >= k
    ):
        raise VerificationError(f"polynomial answer t={lo} fails the direct-count check")
    return lo
