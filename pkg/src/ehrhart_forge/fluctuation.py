"""Realize floor-product quasi-polynomials as Ehrhart counting functions.

Any p(t) = sum_i gamma_i * prod_j floor(alpha_ij t + beta_ij) with integer
gamma is reproduced, over a chosen window 0 <= t < N and up to an additive
constant K, as f_Q(t + M) of a constructed rational polytope Q. The route:
absorb coefficients, expand each product through the 3^(n-1)-identity into
positive summands g +/- h, encode those as trapezoids, take products,
prisms and tagged hulls, then convert translation to dilation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .counting import TranslationFamily, count_translate, ehrhart_value
from .errors import InvalidInputError, VerificationError
from .geometry import (
    Polytope,
    TrapezoidSpec,
    embed_with_tags,
    prism,
    product_polytope,
    tagged_hull,
    unit_vector,
)
from .rationals import as_rational
from .transform import to_dilation_family

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class QpTerm:
    gamma: Fraction
    factors: Tuple[Tuple[Fraction, Fraction], ...]  # (alpha, beta) per factor


@dataclass(frozen=True)
class QuasiPolynomial:
    """sum_i gamma_i * prod_j floor(alpha_ij t + beta_ij); empty product = 1."""

    terms: Tuple[QpTerm, ...]

    def __post_init__(self):
        if not self.terms:
            raise InvalidInputError("quasi-polynomial needs at least one term")

    @property
    def r(self) -> int:
        return len(self.terms)

    @property
    def n(self) -> int:
        return max(len(t.factors) for t in self.terms)


def qp_term(gamma, factors) -> QpTerm:
    return QpTerm(
        as_rational(gamma),
        tuple((as_rational(a), as_rational(b)) for a, b in factors),
    )


def quasi_polynomial(terms) -> QuasiPolynomial:
    return QuasiPolynomial(tuple(qp_term(g, fs) for g, fs in terms))


def qp_eval(qp: QuasiPolynomial, t: int) -> Fraction:
    """Exact evaluation; integer whenever the gammas are integers."""
    total = Fraction(0)
    for term in qp.terms:
        prod = term.gamma
        for a, b in term.factors:
            prod *= math.floor(a * t + b)
        total += prod
    return total


def sequence_to_qp(values: Sequence[int]) -> QuasiPolynomial:
    """Degree-1 quasi-polynomial hitting f(i) = values[i] for 0 <= i < r."""
    r = len(values)
    if r < 1:
        raise InvalidInputError("sequence must be nonempty")
    terms = []
    for i, c in enumerate(values):
        c = as_rational(c)
        terms.append(QpTerm(c, (((Fraction(1, r)), Fraction(-i, r)),)))
        terms.append(QpTerm(-c, (((Fraction(1, r)), Fraction(-i - 1, r)),)))
    return QuasiPolynomial(tuple(terms))


def normalize_coefficients(qp: QuasiPolynomial) -> QuasiPolynomial:
    """Absorb each integer gamma as a constant floor factor; all gammas
    become 1 and evaluations are unchanged."""
    terms = []
    for term in qp.terms:
        if term.gamma.denominator != 1:
            raise InvalidInputError("only integer coefficients can be absorbed")
        terms.append(
            QpTerm(Fraction(1), ((Fraction(0), term.gamma),) + term.factors)
        )
    return QuasiPolynomial(tuple(terms))


@dataclass(frozen=True)
class Summand:
    """One product in the identity expansion: coefficient * prod_{j not in S}
    g_j * prod_{j in S} (g_j + sign_j h_j)."""

    coefficient: int
    subset: Tuple[int, ...]
    signs: Tuple[int, ...]  # aligned with subset


@dataclass(frozen=True)
class IdentityExpansion:
    """Expansion of 3^(n-1) g_1..g_n + h_1..h_n into positive-able products."""

    n: int
    summands: Tuple[Summand, ...]

    def evaluate(self, gs, hs) -> int:
        total = 0
        for s in self.summands:
            val = s.coefficient
            inside = set(s.subset)
            for j in range(self.n):
                if j not in inside:
                    val *= gs[j]
            for j, sign in zip(s.subset, s.signs):
                val *= gs[j] + sign * hs[j]
            total += val
        return total


def _expand(n: int):
    """Recursive expansion; variables 0..n-1, one summand per nonempty subset."""
    if n == 2:
        return [
            Summand(1, (0, 1), (-1, -1)),
            Summand(1, (1,), (1,)),
            Summand(1, (0,), (1,)),
        ]
    sub = _expand(n - 1)

    def shift(s: Summand) -> Summand:
        return Summand(s.coefficient, tuple(j + 1 for j in s.subset), s.signs)

    out = []
    first_var = 1  # sub identity lives on variables 1..n-1 after shifting
    for s in map(shift, sub):
        # (g0 - h0) * [3^(n-2) prod g - prod h]: flip the sign on the first
        # sub-variable, equivalent to substituting h -> -h there.
        signs = tuple(
            -sg if j == first_var else sg for j, sg in zip(s.subset, s.signs)
        )
        out.append(Summand(s.coefficient, (0,) + s.subset, (-1,) + signs))
    out.extend(map(shift, sub))  # g0 * [3^(n-2) prod g + prod h]
    out.append(Summand(3 ** (n - 2), (0,), (1,)))  # (g0 + h0) * 3^(n-2) prod g
    return out


def product_identity_expansion(n: int, trials: int = 100, seed: int = 20260810) -> IdentityExpansion:
    """Build the expansion by the recursive construction and verify the
    formal identity on random integer assignments before returning it."""
    if n < 2:
        raise InvalidInputError("identity expansion needs n >= 2")
    summands = sorted(_expand(n), key=lambda s: s.subset)
    exp = IdentityExpansion(n, tuple(summands))
    if len(exp.summands) != 2**n - 1:
        raise VerificationError("expansion does not have one summand per nonempty subset")
    rng = random.Random(seed)
    for _ in range(trials):
        gs = [rng.randint(-50, 50) for _ in range(n)]
        hs = [rng.randint(-50, 50) for _ in range(n)]
        lhs = 3 ** (n - 1) * math.prod(gs) + math.prod(hs)
        if exp.evaluate(gs, hs) != lhs:
            raise VerificationError(
                "identity expansion failed numeric verification",
                detail={"n": n, "gs": gs, "hs": hs},
            )
    return exp


def _floor_trapezoid_spec(a, b, sign, g, n, margin=None) -> TrapezoidSpec:
    a = as_rational(a)
    b = as_rational(b)
    if sign not in (1, -1):
        raise InvalidInputError("sign must be +1 or -1")
    if not (isinstance(g, int) and g >= 1):
        raise InvalidInputError("g must be a positive integer")
    for t in range(n):
        if abs(math.floor(a * t + b)) >= g:
            raise InvalidInputError(
                f"g={g} too small: |floor(a*t+b)| = {abs(math.floor(a * t + b))} at t={t}"
            )
    lcm = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    if margin is None:
        margin = Fraction(1, 4 * n * n * lcm)
    slope = a * n
    if sign == 1:
        return TrapezoidSpec(margin, 1, _HALF - g, 0, b + slope, -slope)
    kappa = Fraction(1, 2 * lcm)  # below the least positive frac of a*t+b
    return TrapezoidSpec(margin, 1, b + kappa + slope, -slope, Fraction(g), 0)


def build_floor_trapezoid(a, b, sign, g, n, margin=None) -> Polytope:
    """Trapezoid whose translate family counts g + sign*floor(a*t + b)."""
    return _floor_trapezoid_spec(a, b, sign, g, n, margin).to_polytope()


def build_term_polytope(
    factors, g: int, n_period: int, expansion: Optional[IdentityExpansion] = None
) -> Polytope:
    """Hull W_i whose family counts prod_j floor(a_j t + b_j) + 3^(n-1) g^n.

    One piece per nonempty subset S: the product of the signed trapezoids
    for j in S, under a prism of height 3^'delta(S)' * g^(n-|S|), padded and
    tagged with the characteristic vector of S.
    """
    facs = [(as_rational(a), as_rational(b)) for a, b in factors]
    while len(facs) < 2:
        facs.append((Fraction(0), Fraction(1)))  # constant factor floor(1)
    n = len(facs)
    if expansion is None or expansion.n != n:
        expansion = product_identity_expansion(n)
    lcm = 1
    for a, b in facs:
        for den in (a.denominator, b.denominator):
            lcm = lcm * den // math.gcd(lcm, den)
    margin = Fraction(1, 4 * n_period * n_period * lcm)

    ambient = 2 * n + 2
    pieces = []
    for s in expansion.summands:
        specs = [
            _floor_trapezoid_spec(facs[j][0], facs[j][1], sign, g, n_period, margin)
            for j, sign in zip(s.subset, s.signs)
        ]
        prod = product_polytope(specs)
        height = s.coefficient * g ** (n - len(s.subset))
        lifted = prism(prod, height)
        cmap = (0,) + tuple(1 + j for j in s.subset) + (n + 1,)
        fixed = {1 + j: 0 for j in range(n) if j not in set(s.subset)}
        chi = {n + 2 + j: (1 if j in set(s.subset) else 0) for j in range(n)}
        fixed.update(chi)
        pieces.append((chi, embed_with_tags(lifted, ambient, cmap, fixed)))
    return tagged_hull(pieces)


@dataclass(frozen=True)
class RealizationResult:
    q: Polytope
    big_k: int
    m: int
    dim: int
    vertex_count: int
    valid_n: int


def realize_qp(qp: QuasiPolynomial, n_period: int, guard: Optional[int] = None) -> RealizationResult:
    """Polytope Q with f_Q(t + M) = p(t) + K for 0 <= t < n_period.

    K = r * 3^(n-1) * g^n after coefficient normalization and padding to a
    common factor count n. The construction is verified by direct counting
    before it is returned.
    """
    if n_period < 1:
        raise InvalidInputError("the window length must be positive")
    for term in qp.terms:
        if term.gamma.denominator != 1:
            raise InvalidInputError("realization needs integer coefficients")
    norm = normalize_coefficients(qp)
    n = max(2, norm.n)
    padded = [
        term.factors + ((Fraction(0), Fraction(1)),) * (n - len(term.factors))
        for term in norm.terms
    ]
    r = len(padded)

    worst = max(
        abs(a) * n_period + abs(b) for facs in padded for a, b in facs
    )
    g = 2 * math.ceil(worst) + 2
    expansion = product_identity_expansion(n)

    term_polys = [build_term_polytope(facs, g, n_period, expansion) for facs in padded]
    tag_bits = (r - 1).bit_length() if r > 1 else 0  # exactly ceil(log2 r)
    if r == 1:
        hull = term_polys[0]
    else:
        ambient = 2 * n + 2 + tag_bits
        pieces = []
        for i, poly in enumerate(term_polys):
            bits = {2 * n + 2 + j: (i >> j) & 1 for j in range(tag_bits)}
            pieces.append(
                (bits, embed_with_tags(poly, ambient, tuple(range(2 * n + 2)), bits))
            )
        hull = tagged_hull(pieces)

    big_k = r * 3 ** (n - 1) * g**n
    family = TranslationFamily(hull, unit_vector(hull.dim, 0), n_period)
    for t in range(n_period):
        expected = int(qp_eval(qp, t)) + big_k
        got = count_translate(family, t, guard)
        if got != expected:
            raise VerificationError(
                f"translation contract failed at t={t}: counted {got}, expected {expected}"
            )

    conv = to_dilation_family(family, guard)
    for t in range(n_period):
        expected = int(qp_eval(qp, t)) + big_k
        if ehrhart_value(conv.q, t + conv.m, guard) != expected:
            raise VerificationError(f"dilation contract failed at t={t}")

    result = RealizationResult(
        q=conv.q,
        big_k=big_k,
        m=conv.m,
        dim=hull.dim,
        vertex_count=len(conv.q.vertices),
        valid_n=n_period,
    )
    if result.dim > 2 * n + 2 + tag_bits:
        raise VerificationError("realization exceeded its dimension bound")
    if result.vertex_count > r * 4 ** (n + 1):
        raise VerificationError("realization exceeded its vertex bound")
    return result


def realize_sequence(values: Sequence[int], guard: Optional[int] = None) -> RealizationResult:
    """Polytope Q with f_Q(i + M) = values[i] + K for every index i."""
    vals = [int(v) for v in values]
    if any(v < 0 for v in vals):
        raise InvalidInputError("sequence entries must be nonnegative integers")
    qp = sequence_to_qp(vals)
    return realize_qp(qp, len(vals), guard)
