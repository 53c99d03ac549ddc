"""Exact rational polytopes: V-rep, optional H-rep, tagged decompositions.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across workers. Vertices are
plain tuples of ``Fraction``; a polytope always carries its vertex list and,
when constructively available, the inequality system (``a . x <= b`` rows).
Hull-only objects (built by :func:`tagged_hull`) carry their pieces instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .errors import DegenerateConstructionError, InvalidInputError
from .rationals import as_rational

Point = Tuple[Fraction, ...]
Row = Tuple[Tuple[Fraction, ...], Fraction]
Tag = Tuple[Tuple[int, Fraction], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_point(coords: Iterable) -> Point:
    pt = tuple(as_rational(c) for c in coords)
    if not pt:
        raise InvalidInputError("a point needs at least one coordinate")
    return pt


def unit_vector(dim: int, axis: int) -> Point:
    if not 0 <= axis < dim:
        raise InvalidInputError(f"axis {axis} out of range for dimension {dim}")
    return tuple(_ONE if i == axis else _ZERO for i in range(dim))


def scale_point(p: Point, s: Fraction) -> Point:
    return tuple(c * s for c in p)


def _dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, x)), _ZERO)


def make_tag(assignment: Mapping[int, object]) -> Tag:
    return tuple(sorted((int(axis), as_rational(val)) for axis, val in assignment.items()))


def tag_dict(tag: Tag) -> dict:
    return dict(tag)


@dataclass(frozen=True)
class HalfspaceSystem:
    """System of inequalities ``a . x <= b``."""

    dim: int
    rows: Tuple[Row, ...]

    def __post_init__(self):
        rows = tuple(
            (tuple(as_rational(c) for c in a), as_rational(b)) for a, b in self.rows
        )
        object.__setattr__(self, "rows", rows)
        for a, _ in rows:
            if len(a) != self.dim:
                raise InvalidInputError(
                    f"halfspace row has {len(a)} coefficients, expected {self.dim}"
                )

    def contains(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.dim:
            raise InvalidInputError(
                f"point has dimension {len(x)}, system has dimension {self.dim}"
            )
        return all(_dot(a, x) <= b for a, b in self.rows)


def contains_h(system: HalfspaceSystem, point: Sequence) -> bool:
    """Exact membership test against an inequality system (boundary included)."""
    return system.contains(as_point(point))


@dataclass(frozen=True)
class Polytope:
    """Rational polytope: vertices always, halfspaces/pieces when available.

    Pieces are (tag, polytope) pairs recording a tagged decomposition whose
    lattice points partition the hull's; they are what makes exact counting
    of convex hulls tractable. ``scaled_from`` records that this polytope is
    an affine image scale*base + shift of a tagged hull: piece-sum counting
    breaks once tag slabs leave integer heights, and the affine provenance
    is what lets the counting engine certify such counts exactly.
    """

    dim: int
    vertices: Tuple[Point, ...]
    halfspaces: Optional[HalfspaceSystem] = None
    pieces: Optional[Tuple[Tuple[Tag, "Polytope"], ...]] = None
    scaled_from: Optional[tuple] = dataclass_field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise InvalidInputError("polytope needs at least one vertex")
        for v in verts:
            if len(v) != self.dim:
                raise InvalidInputError(
                    f"vertex of dimension {len(v)} in {self.dim}-dimensional polytope"
                )
        if len(set(verts)) != len(verts):
            raise InvalidInputError("duplicate vertices")
        if self.halfspaces is not None:
            if self.halfspaces.dim != self.dim:
                raise InvalidInputError("halfspace dimension mismatch")
            for v in verts:
                if not self.halfspaces.contains(v):
                    raise InvalidInputError(f"vertex {v} violates a halfspace row")
        if self.pieces is not None:
            pieces = tuple((make_tag(dict(t)), q) for t, q in self.pieces)
            object.__setattr__(self, "pieces", pieces)
            vert_set = set(verts)
            for _, q in pieces:
                if q.dim != self.dim:
                    raise InvalidInputError("piece dimension mismatch")
                if not set(q.vertices) <= vert_set:
                    raise InvalidInputError("piece vertex missing from hull vertex list")


def _compose_provenance(poly: Polytope, scale: Fraction, shift: Point):
    """Provenance of scale*poly + shift for hull-only tagged polytopes."""
    if poly.halfspaces is not None or not poly.pieces:
        return None
    if poly.scaled_from is not None:
        base, s0, w0 = poly.scaled_from
    else:
        base, s0, w0 = poly, _ONE, tuple(_ZERO for _ in range(poly.dim))
    return (base, s0 * scale, tuple(c * scale + d for c, d in zip(w0, shift)))


def translate(poly: Polytope, shift: Sequence) -> Polytope:
    """Shift every vertex (and halfspace offset, and piece) by a vector."""
    w = as_point(shift)
    if len(w) != poly.dim:
        raise InvalidInputError(
            f"translation vector of dimension {len(w)} for {poly.dim}-dimensional polytope"
        )
    verts = tuple(tuple(c + d for c, d in zip(v, w)) for v in poly.vertices)
    half = None
    if poly.halfspaces is not None:
        half = HalfspaceSystem(
            poly.dim,
            tuple((a, b + _dot(a, w)) for a, b in poly.halfspaces.rows),
        )
    pieces = None
    if poly.pieces is not None:
        pieces = tuple(
            (tuple((ax, val + w[ax]) for ax, val in tag), translate(q, w))
            for tag, q in poly.pieces
        )
    return Polytope(
        poly.dim, verts, half, pieces, scaled_from=_compose_provenance(poly, _ONE, w)
    )


def dilate(poly: Polytope, factor) -> Polytope:
    """Dilation about the origin by a positive rational factor."""
    s = as_rational(factor)
    if s <= 0:
        raise InvalidInputError(f"dilation factor must be positive, got {s}")
    verts = tuple(scale_point(v, s) for v in poly.vertices)
    half = None
    if poly.halfspaces is not None:
        half = HalfspaceSystem(
            poly.dim, tuple((a, b * s) for a, b in poly.halfspaces.rows)
        )
    pieces = None
    if poly.pieces is not None:
        pieces = tuple(
            (tuple((ax, val * s) for ax, val in tag), dilate(q, s))
            for tag, q in poly.pieces
        )
    zero = tuple(_ZERO for _ in range(poly.dim))
    return Polytope(
        poly.dim, verts, half, pieces, scaled_from=_compose_provenance(poly, s, zero)
    )


def embed_with_tags(
    poly: Polytope,
    ambient_dim: int,
    coord_map: Sequence[int],
    fixed: Mapping[int, object],
) -> Polytope:
    """Embed into a larger space: axis i goes to position coord_map[i], the
    remaining positions are pinned to the given constants.

    The mapped positions and the fixed positions must partition the ambient
    axes. Pinned positions get explicit equality rows so the H-rep still
    describes the embedded slab exactly.
    """
    cmap = tuple(int(p) for p in coord_map)
    pins = {int(p): as_rational(v) for p, v in dict(fixed).items()}
    if len(cmap) != poly.dim:
        raise InvalidInputError(
            f"coordinate map has {len(cmap)} positions for a {poly.dim}-dimensional polytope"
        )
    claimed = sorted(list(cmap) + list(pins))
    if claimed != list(range(ambient_dim)):
        raise InvalidInputError(
            "mapped and fixed positions must partition the ambient axes exactly"
        )

    def lift(v: Point) -> Point:
        out = [None] * ambient_dim
        for i, pos in enumerate(cmap):
            out[pos] = v[i]
        for pos, val in pins.items():
            out[pos] = val
        return tuple(out)

    verts = tuple(lift(v) for v in poly.vertices)
    half = None
    if poly.halfspaces is not None:
        rows = []
        for a, b in poly.halfspaces.rows:
            coeffs = [_ZERO] * ambient_dim
            for i, pos in enumerate(cmap):
                coeffs[pos] = a[i]
            rows.append((tuple(coeffs), b))
        for pos, val in sorted(pins.items()):
            up = [_ZERO] * ambient_dim
            up[pos] = _ONE
            rows.append((tuple(up), val))
            down = [_ZERO] * ambient_dim
            down[pos] = -_ONE
            rows.append((tuple(down), -val))
        half = HalfspaceSystem(ambient_dim, tuple(rows))
    pieces = None
    if poly.pieces is not None:
        pieces = tuple(
            (
                tuple((cmap[ax], val) for ax, val in tag),
                embed_with_tags(q, ambient_dim, cmap, pins),
            )
            for tag, q in poly.pieces
        )
    return Polytope(ambient_dim, verts, half, pieces)


@dataclass(frozen=True)
class TrapezoidSpec:
    """Planar region ``x_low <= x <= x_high``, lower line <= y <= upper line.

    Lines are intercept + slope * x. The bounding lines may cross inside the
    x-range, in which case the stored polytope degenerates to a triangle (or
    a point); the region just has to be nonempty.
    """

    x_low: Fraction
    x_high: Fraction
    y_low_intercept: Fraction
    y_low_slope: Fraction
    y_high_intercept: Fraction
    y_high_slope: Fraction

    def __post_init__(self):
        for name in (
            "x_low",
            "x_high",
            "y_low_intercept",
            "y_low_slope",
            "y_high_intercept",
            "y_high_slope",
        ):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not self.x_low < self.x_high:
            raise InvalidInputError("trapezoid needs x_low < x_high")
        lo, hi = self.feasible_x_interval()
        if lo > hi:
            raise InvalidInputError("trapezoid region is empty")

    def y_bounds(self, x: Fraction) -> Tuple[Fraction, Fraction]:
        return (
            self.y_low_intercept + self.y_low_slope * x,
            self.y_high_intercept + self.y_high_slope * x,
        )

    def clip_feasible(self, lo: Fraction, hi: Fraction):
        """Restrict [lo, hi] to where the y-interval is nonempty."""
        gap_const = self.y_high_intercept - self.y_low_intercept
        gap_slope = self.y_high_slope - self.y_low_slope
        if gap_slope == 0:
            if gap_const < 0:
                return _ONE, _ZERO  # canonical empty interval
            return lo, hi
        crossing = -gap_const / gap_slope
        if gap_slope > 0:
            return max(lo, crossing), hi
        return lo, min(hi, crossing)

    def feasible_x_interval(self) -> Tuple[Fraction, Fraction]:
        return self.clip_feasible(self.x_low, self.x_high)

    def to_polytope(self) -> Polytope:
        return product_polytope([self])


def product_polytope(factors: Sequence[TrapezoidSpec]) -> Polytope:
    """Joint-x product of planar trapezoids: coordinates (x, y_1, ..., y_d).

    Every x-slab of the result is the product of the factor slabs, so the
    lattice count of any translate factorizes. Combinatorially a box: at
    most 2^(d+1) vertices, all at the ends of the shared x-interval.
    """
    if not factors:
        raise InvalidInputError("product needs at least one factor")
    lo = max(f.x_low for f in factors)
    hi = min(f.x_high for f in factors)
    for f in factors:
        lo, hi = f.clip_feasible(lo, hi)
    if lo > hi:
        raise DegenerateConstructionError("empty shared x-range")

    d = len(factors)
    verts = []
    seen = set()
    for x in ((lo,) if lo == hi else (lo, hi)):
        per_factor = []
        for f in factors:
            ylo, yhi = f.y_bounds(x)
            per_factor.append((ylo,) if ylo == yhi else (ylo, yhi))
        for combo in itertools.product(*per_factor):
            v = (x,) + combo
            if v not in seen:
                seen.add(v)
                verts.append(v)

    rows = []
    ex = [_ZERO] * (d + 1)
    ex[0] = _ONE
    rows.append((tuple(ex), hi))
    ex = [_ZERO] * (d + 1)
    ex[0] = -_ONE
    rows.append((tuple(ex), -lo))
    for i, f in enumerate(factors):
        upper = [_ZERO] * (d + 1)
        upper[0] = -f.y_high_slope
        upper[1 + i] = _ONE
        rows.append((tuple(upper), f.y_high_intercept))
        lower = [_ZERO] * (d + 1)
        lower[0] = f.y_low_slope
        lower[1 + i] = -_ONE
        rows.append((tuple(lower), -f.y_low_intercept))
    return Polytope(d + 1, tuple(verts), HalfspaceSystem(d + 1, tuple(rows)))


def prism(poly: Polytope, height: int) -> Polytope:
    """Product with the segment [0, height-1] in one fresh axis.

    Multiplies the lattice count by exactly ``height`` for any translation
    orthogonal to the new axis.
    """
    if not isinstance(height, int) or height < 1:
        raise InvalidInputError(f"prism height must be a positive integer, got {height!r}")
    top = Fraction(height - 1)
    zs = (Fraction(0),) if height == 1 else (Fraction(0), top)
    verts = tuple(v + (z,) for v in poly.vertices for z in zs)
    half = None
    if poly.halfspaces is not None:
        rows = [(a + (_ZERO,), b) for a, b in poly.halfspaces.rows]
        up = (_ZERO,) * poly.dim + (_ONE,)
        rows.append((up, top))
        down = (_ZERO,) * poly.dim + (-_ONE,)
        rows.append((down, _ZERO))
        half = HalfspaceSystem(poly.dim + 1, tuple(rows))
    pieces = None
    if poly.pieces is not None:
        pieces = tuple((tag, prism(q, height)) for tag, q in poly.pieces)
    return Polytope(poly.dim + 1, verts, half, pieces)


def tagged_hull(pieces: Sequence[Tuple[Mapping[int, object], Polytope]]) -> Polytope:
    """Convex hull of pieces pinned at distinguishing 0/1 coordinates.

    Any two pieces must disagree on some coordinate tagged by both, which
    forces their lattice points apart; the hull's integer points are then
    the disjoint union of the pieces'. The result keeps the pieces for
    decomposed counting and carries no halfspaces.
    """
    if not pieces:
        raise InvalidInputError("tagged hull needs at least one piece")
    norm = [(make_tag(dict(t)), q) for t, q in pieces]
    dim = norm[0][1].dim
    for tag, q in norm:
        if q.dim != dim:
            raise InvalidInputError("pieces live in different ambient dimensions")
        for ax, val in tag:
            if not 0 <= ax < dim:
                raise InvalidInputError(f"tag axis {ax} outside ambient dimension {dim}")
            if not 0 <= val <= 1:
                raise InvalidInputError("tag values must lie in [0, 1]")
            for v in q.vertices:
                if v[ax] != val:
                    raise InvalidInputError(
                        f"piece is not pinned at tagged coordinate {ax}"
                    )
    for (ta, _), (tb, _) in itertools.combinations(norm, 2):
        da, db = dict(ta), dict(tb)
        if not any(da[ax] != db[ax] for ax in da.keys() & db.keys()):
            raise InvalidInputError(
                "duplicate tags: two pieces share every common tagged value"
            )
    verts = []
    seen = set()
    for _, q in norm:
        for v in q.vertices:
            if v not in seen:
                seen.add(v)
                verts.append(v)
    return Polytope(dim, tuple(verts), None, tuple(norm))


def integer_bounding_box(poly: Polytope) -> list:
    """Per-axis [ceil(min), floor(max)]; an axis range may be empty (lo > hi)."""
    box = []
    for axis in range(poly.dim):
        coords = [v[axis] for v in poly.vertices]
        box.append((math.ceil(min(coords)), math.floor(max(coords))))
    return box


def split_axis(pieces) -> Optional[int]:
    """Smallest axis tagged by every piece and taking two or more values."""
    tags = [dict(t) for t, _ in pieces]
    common = set(tags[0])
    for t in tags[1:]:
        common &= set(t)
    for ax in sorted(common):
        if len({t[ax] for t in tags}) > 1:
            return ax
    return None


def pieces_sound(poly: Polytope) -> bool:
    """True when the hull's integer points provably split over its pieces.

    Needs a full split tree in which every split coordinate takes exactly
    two integer values one apart: both are then faces, and no other integer
    height meets the hull, so integer points land in single pieces.
    """
    if not poly.pieces:
        return False

    def rec(pieces) -> bool:
        if len(pieces) == 1:
            q = pieces[0][1]
            if q.pieces:
                return pieces_sound(q)
            return q.halfspaces is not None
        ax = split_axis(pieces)
        if ax is None:
            return False
        values = sorted({dict(t)[ax] for t, _ in pieces})
        if len(values) != 2:
            return False
        lo, hi = values
        if lo.denominator != 1 or hi.denominator != 1 or hi - lo != 1:
            return False
        groups = {lo: [], hi: []}
        for tag, q in pieces:
            groups[dict(tag)[ax]].append((tag, q))
        return all(rec(grp) for grp in groups.values())

    return rec(list(poly.pieces))


def split_depth(poly: Polytope) -> int:
    """Longest chain of split decisions from the hull down to a leaf piece."""
    if not poly.pieces:
        return 0

    def rec(pieces) -> int:
        if len(pieces) == 1:
            q = pieces[0][1]
            return split_depth(q) if q.pieces else 0
        ax = split_axis(pieces)
        if ax is None:
            return 0
        groups = {}
        for tag, q in pieces:
            groups.setdefault(dict(tag)[ax], []).append((tag, q))
        return 1 + max(rec(grp) for grp in groups.values())

    return rec(list(poly.pieces))


def tagged_axes(poly: Polytope) -> set:
    """All axes tagged anywhere in the piece tree."""
    axes = set()
    if poly.pieces:
        for tag, q in poly.pieces:
            axes.update(ax for ax, _ in tag)
            axes.update(tagged_axes(q))
    return axes


def leaf_pieces(poly: Polytope):
    """Yield the halfspace-carrying pieces at the bottom of the tag tree."""
    if poly.pieces:
        for _, q in poly.pieces:
            if q.pieces:
                yield from leaf_pieces(q)
            else:
                yield q
