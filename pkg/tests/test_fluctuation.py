import math
import random
from fractions import Fraction

import pytest

from ehrhart_forge.counting import TranslationFamily, count_translate, ehrhart_value
from ehrhart_forge.errors import InvalidInputError
from ehrhart_forge.fluctuation import (
    build_floor_trapezoid,
    build_term_polytope,
    normalize_coefficients,
    product_identity_expansion,
    qp_eval,
    quasi_polynomial,
    realize_qp,
    realize_sequence,
    sequence_to_qp,
)
from ehrhart_forge.geometry import unit_vector

from _oracle import naive_count_translate


def test_qp_eval_examples():
    assert qp_eval(quasi_polynomial([(1, [("1/2", 0)])]), 5) == 2
    fluct = quasi_polynomial(
        [(1, []), (1, [(1, 0), ("1/2", 0)]), (-1, [(1, 0), ("1/2", "-1/2")])]
    )
    assert qp_eval(fluct, 4) == 5  # 1 + 8 - 4
    assert qp_eval(quasi_polynomial([(7, [])]), 123) == 7


def test_sequence_to_qp_hits_values():
    qp = sequence_to_qp([5, 7])
    assert [qp_eval(qp, t) for t in range(2)] == [5, 7]
    qp1 = sequence_to_qp([9])
    assert qp_eval(qp1, 0) == 9
    qp3 = sequence_to_qp([3, 1, 4])
    assert qp_eval(qp3, 2) == 4


def test_normalize_coefficients():
    qp = quasi_polynomial([(-3, [("1/2", 0)])])
    norm = normalize_coefficients(qp)
    assert norm.terms[0].gamma == 1
    assert norm.terms[0].factors[0] == (Fraction(0), Fraction(-3))
    rng = random.Random(5)
    for _ in range(20):
        terms = [
            (
                rng.randint(-5, 5),
                [(Fraction(rng.randint(-4, 4), rng.randint(1, 4)), rng.randint(-3, 3))
                 for _ in range(rng.randint(0, 2))],
            )
            for _ in range(rng.randint(1, 3))
        ]
        qp = quasi_polynomial(terms)
        norm = normalize_coefficients(qp)
        for t in rng.sample(range(-50, 50), 10):
            assert qp_eval(qp, t) == qp_eval(norm, t)


def test_normalize_rejects_fractional_gamma():
    qp = quasi_polynomial([(Fraction(1, 2), [(1, 0)])])
    with pytest.raises(InvalidInputError):
        normalize_coefficients(qp)


def test_identity_base_case():
    exp = product_identity_expansion(2)
    assert len(exp.summands) == 3
    # 3*g1*g2 + h1*h2 at g=(2,3), h=(1,2): 20 = 1 + 10 + 9
    assert exp.evaluate([2, 3], [1, 2]) == 20 == 3 * 6 + 2


def test_identity_summand_counts():
    assert len(product_identity_expansion(3).summands) == 7
    assert len(product_identity_expansion(4).summands) == 15


def test_identity_random_assignments():
    rng = random.Random(99)
    for n in (2, 3, 4):
        exp = product_identity_expansion(n)
        for _ in range(50):
            gs = [rng.randint(-50, 50) for _ in range(n)]
            hs = [rng.randint(-50, 50) for _ in range(n)]
            assert exp.evaluate(gs, hs) == 3 ** (n - 1) * math.prod(gs) + math.prod(hs)


def test_identity_rejects_small_n():
    with pytest.raises(InvalidInputError):
        product_identity_expansion(1)


def test_floor_trapezoid_counts():
    e1 = unit_vector(2, 0)
    plus = build_floor_trapezoid(Fraction(1, 2), 0, 1, 5, 4)
    fam = TranslationFamily(plus, e1, 4)
    assert [count_translate(fam, t) for t in range(4)] == [5, 5, 6, 6]
    minus = build_floor_trapezoid(Fraction(1, 2), 0, -1, 5, 4)
    famm = TranslationFamily(minus, e1, 4)
    assert [count_translate(famm, t) for t in range(4)] == [5, 5, 4, 4]
    const = build_floor_trapezoid(0, -3, 1, 5, 4)
    famc = TranslationFamily(const, e1, 4)
    assert [count_translate(famc, t) for t in range(4)] == [2, 2, 2, 2]


def test_floor_trapezoid_matches_oracle():
    e1 = unit_vector(2, 0)
    cases = [
        (Fraction(1, 3), Fraction(1, 2), 1, 4, 6),
        (Fraction(-1, 2), 2, 1, 7, 5),
        (Fraction(2, 3), Fraction(-1, 3), -1, 6, 6),
        (Fraction(0), 1, -1, 3, 4),
    ]
    for a, b, sign, g, n in cases:
        fam = TranslationFamily(build_floor_trapezoid(a, b, sign, g, n), e1, n)
        for t in range(n):
            want = g + sign * math.floor(a * t + b)
            assert count_translate(fam, t) == want == naive_count_translate(fam, t)


def test_floor_trapezoid_g_too_small():
    with pytest.raises(InvalidInputError):
        build_floor_trapezoid(Fraction(1, 2), 0, 1, 2, 6)  # floor(5/2) = 2 >= g


def test_term_polytope_counts():
    g = 8
    poly = build_term_polytope([(Fraction(1, 2), 0), (Fraction(1, 3), 0)], g, 6)
    fam = TranslationFamily(poly, unit_vector(poly.dim, 0), 6)
    for t in range(6):
        want = (t // 2) * (t // 3) + 3 * g * g
        assert count_translate(fam, t) == want
    assert len(poly.vertices) <= 4 ** (2 + 1)


def test_term_polytope_constant_factors():
    g = 6
    poly = build_term_polytope([(0, 1), (0, 1)], g, 3)
    fam = TranslationFamily(poly, unit_vector(poly.dim, 0), 3)
    for t in range(3):
        assert count_translate(fam, t) == 1 + 3 * g * g


def test_realize_sequence_small():
    res = realize_sequence([3, 1, 4])
    for i, c in enumerate([3, 1, 4]):
        assert ehrhart_value(res.q, i + res.m) == c + res.big_k
    assert res.dim == 9  # 2n+2+ceil(log2 6) with n = 2


def test_realize_single_zero():
    res = realize_sequence([0])
    assert ehrhart_value(res.q, res.m) == res.big_k


def test_realize_constant_sequence():
    res = realize_sequence([7, 7])
    for i in range(2):
        assert ehrhart_value(res.q, i + res.m) == 7 + res.big_k


def test_realize_qp_floor_half():
    qp = quasi_polynomial([(1, [("1/2", 0)])])
    res = realize_qp(qp, 4)
    values = [ehrhart_value(res.q, t + res.m) - res.big_k for t in range(4)]
    assert values == [0, 0, 1, 1]


def test_realize_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        realize_sequence([])
    with pytest.raises(InvalidInputError):
        realize_sequence([-1])
    with pytest.raises(InvalidInputError):
        realize_qp(quasi_polynomial([(Fraction(1, 2), [(1, 0)])]), 2)
