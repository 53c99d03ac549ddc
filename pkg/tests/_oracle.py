"""Independent brute-force counting oracle for the tests.

Deliberately dumb: full bounding-box sweep with a direct membership test
per cell (halfspace rows evaluated term by term, or exact-LP hull
membership for vertex-only polytopes). No pruning, no closed forms, no
piece decomposition - so it shares no shortcuts with the engine it checks.
"""

import itertools
from fractions import Fraction

from ehrhart_forge.geometry import integer_bounding_box
from ehrhart_forge.lp import contains_hull


def naive_count(poly) -> int:
    box = integer_bounding_box(poly)
    if any(lo > hi for lo, hi in box):
        return 0
    total = 0
    for cell in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        pt = tuple(Fraction(c) for c in cell)
        if poly.halfspaces is not None:
            inside = all(
                sum(a * x for a, x in zip(row, pt)) <= b
                for row, b in poly.halfspaces.rows
            )
        else:
            inside = contains_hull(poly, pt)
        if inside:
            total += 1
    return total


def naive_count_translate(family, t: int) -> int:
    from ehrhart_forge.geometry import scale_point, translate

    shift = scale_point(family.direction, Fraction(t, family.denominator))
    return naive_count(translate(family.base, shift))
