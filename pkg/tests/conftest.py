from fractions import Fraction

import pytest

from ehrhart_forge.geometry import HalfspaceSystem, Polytope


def box_polytope(*ranges) -> Polytope:
    """Axis-aligned box given per-axis (lo, hi) rationals."""
    import itertools

    ranges = [(Fraction(lo), Fraction(hi)) for lo, hi in ranges]
    dim = len(ranges)
    verts = tuple(itertools.product(*((lo, hi) if lo != hi else (lo,) for lo, hi in ranges)))
    rows = []
    for i, (lo, hi) in enumerate(ranges):
        up = [Fraction(0)] * dim
        up[i] = Fraction(1)
        rows.append((tuple(up), hi))
        down = [Fraction(0)] * dim
        down[i] = Fraction(-1)
        rows.append((tuple(down), -lo))
    return Polytope(dim, verts, HalfspaceSystem(dim, tuple(rows)))


@pytest.fixture
def unit_square():
    return box_polytope((0, 1), (0, 1))


@pytest.fixture
def unit_cube():
    return box_polytope((0, 1), (0, 1), (0, 1))
