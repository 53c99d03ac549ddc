"""Quadratic-congruence gadgets: encode a QDE instance as a polytope whose
translation-count minimum reveals feasibility.

The objective (u^2 - alpha - beta*v)^2, with (u, v) packed into one integer
t = u*beta + v, splits into four positive products of linear and floor
terms. Each factor becomes a planar trapezoid whose translate counts the
factor value, products are merged over a shared axis, and the four product
polytopes are hulled at distinguishing 0/1 coordinates. A brute-force
oracle over the (u, v) box certifies every constructed gadget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .counting import (
    TranslationFamily,
    count_translate,
    prepare_e1_scan,
)
from .errors import InvalidInputError, VerificationError
from .geometry import (
    HalfspaceSystem,
    Polytope,
    TrapezoidSpec,
    embed_with_tags,
    product_polytope,
    tagged_hull,
    translate,
    unit_vector,
)
from .rationals import as_rational

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class QdeInstance:
    """Does some u in [0, gamma) satisfy u^2 = alpha (mod beta)?"""

    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        if self.beta < 2:
            raise InvalidInputError("beta must be at least 2")
        if not 0 <= self.alpha < self.beta:
            raise InvalidInputError("alpha must satisfy 0 <= alpha < beta")
        if not 1 <= self.gamma < self.beta:
            raise InvalidInputError("gamma must satisfy 1 <= gamma < beta")

    @property
    def n(self) -> int:
        return self.beta * self.gamma


def qde_oracle(inst: QdeInstance):
    """Exhaustive minimum of (u^2 - alpha - beta v)^2 over the (u, v) box.

    Returns (min_value, (u, v), feasible); ties resolve to the smallest
    (u, v) in lexicographic order.
    """
    best = None
    arg = None
    for u in range(inst.gamma):
        for v in range(inst.beta):
            val = (u * u - inst.alpha - inst.beta * v) ** 2
            if best is None or val < best:
                best, arg = val, (u, v)
    return best, arg, best == 0


def big_l_constant(inst: QdeInstance) -> int:
    """Offset making every term positive: one above the exact T4 bound."""
    b = inst.beta
    return 2 * b * (b * b + b) * (inst.alpha + b * inst.n) + 1


def g_reference(inst: QdeInstance, t: int, big_l: Optional[int] = None) -> int:
    """g(t) = L + (u^2 - alpha - beta v)^2 with u = t // beta, v = t % beta."""
    if not 0 <= t < inst.n:
        raise InvalidInputError(f"t={t} outside [0, {inst.n})")
    if big_l is None:
        big_l = big_l_constant(inst)
    u, v = divmod(t, inst.beta)
    return big_l + (u * u - inst.alpha - inst.beta * v) ** 2


@dataclass(frozen=True)
class PlusLinear:
    """p + q t"""

    p: int
    q: int

    def value(self, t: int) -> int:
        return self.p + self.q * t


@dataclass(frozen=True)
class MinusLinear:
    """p' - q t"""

    p_prime: int
    q: int

    def value(self, t: int) -> int:
        return self.p_prime - self.q * t


@dataclass(frozen=True)
class PlusFloor:
    """r + floor(t / beta)"""

    r: int
    beta: int

    def value(self, t: int) -> int:
        return self.r + t // self.beta


@dataclass(frozen=True)
class MinusFloor:
    """r' - floor(t / beta)"""

    r_prime: int
    beta: int

    def value(self, t: int) -> int:
        return self.r_prime - t // self.beta


Factor = object


@dataclass(frozen=True)
class TermFactorization:
    """The four positive product terms plus the additive constant."""

    instance: QdeInstance
    terms: Tuple[Tuple[Factor, ...], ...]
    big_l: int

    def term_value(self, i: int, t: int) -> int:
        val = 1
        for f in self.terms[i]:
            val *= f.value(t)
        return val

    def g_value(self, t: int) -> int:
        return sum(self.term_value(i, t) for i in range(len(self.terms)))


def term_factorization(inst: QdeInstance) -> TermFactorization:
    """Split g(t) into T1..T4, each a product of encodable factors.

    T1 = u^2 (b^2+u)^2, T2 = (a+bt)^2, T3 = (b-u)(b^2+b+u)(2a+2bt),
    T4 = L - 2b(b^2+b)(a+bt), with u = floor(t/b). The identity
    T1+T2+T3+T4 = g(t) is re-checked pointwise before returning.
    """
    a, b = inst.alpha, inst.beta
    big_l = big_l_constant(inst)
    t1 = (PlusFloor(0, b), PlusFloor(0, b), PlusFloor(b * b, b), PlusFloor(b * b, b))
    t2 = (PlusLinear(a, b), PlusLinear(a, b))
    t3 = (MinusFloor(b, b), PlusFloor(b * b + b, b), PlusLinear(2 * a, 2 * b))
    coeff = 2 * b * (b * b + b)
    t4 = (MinusLinear(big_l - coeff * a, coeff * b),)
    fact = TermFactorization(inst, (t1, t2, t3, t4), big_l)

    if fact.terms[3][0].p_prime <= fact.terms[3][0].q * inst.n:
        raise VerificationError("T4 upper constant does not dominate its slope")
    checks = range(inst.n) if inst.n <= 4096 else list(range(64)) + [inst.n - 1]
    for t in checks:
        if fact.g_value(t) != g_reference(inst, t, big_l):
            raise VerificationError(f"term identity fails at t={t}")
        if fact.term_value(3, t) < 1:
            raise VerificationError(f"T4 not positive at t={t}")
    return fact


_KINDS = ("A", "B", "C", "D", "triangle", "triangle_prime")


def _gamma_slope(n: int, beta: int) -> Fraction:
    if beta < 1 or n % beta != 0:
        raise InvalidInputError(f"beta={beta} must divide N={n}")
    return Fraction(n // beta)


def _trapezoid_spec(kind, params, n, eps, integer_variant=False) -> TrapezoidSpec:
    eps = as_rational(eps)
    x_lo = Fraction(0) if integer_variant else eps
    one = Fraction(1)
    if kind == "A":
        p, q = params["p"], params["q"]
        if p < 1:
            raise InvalidInputError(f"kind A needs p >= 1, got p={p}")
        if q < 1:
            raise InvalidInputError(f"kind A needs q >= 1, got q={q}")
        low = Fraction(1 - p) if integer_variant else _HALF - p
        return TrapezoidSpec(x_lo, one, low, 0, Fraction(q * n), Fraction(-q * n))
    if kind == "B":
        pp, q = params["p_prime"], params["q"]
        if q < 1:
            raise InvalidInputError(f"kind B needs q >= 1, got q={q}")
        if pp <= q * n:
            raise InvalidInputError(f"kind B needs p' > qN, got p'={pp}, qN={q * n}")
        nudge = Fraction(0) if integer_variant else 2 * eps
        top = Fraction(pp - 1) if integer_variant else Fraction(pp)
        return TrapezoidSpec(x_lo, one, Fraction(q * n) + nudge, Fraction(-q * n), top, 0)
    if kind == "C":
        r, beta = params["r"], params["beta"]
        if r < 1:
            raise InvalidInputError(f"kind C needs r >= 1, got r={r}")
        g = _gamma_slope(n, beta)
        low = Fraction(1 - r) if integer_variant else _HALF - r
        return TrapezoidSpec(x_lo, one, low, 0, g, -g)
    if kind == "D":
        rp, beta = params["r_prime"], params["beta"]
        g = _gamma_slope(n, beta)
        if rp <= g:
            raise InvalidInputError(f"kind D needs r' > gamma, got r'={rp}, gamma={g}")
        nudge = Fraction(0) if integer_variant else 2 * eps
        return TrapezoidSpec(x_lo, one, g + nudge, -g, Fraction(rp), 0)
    if kind == "triangle":
        q = params["q"]
        if q < 1:
            raise InvalidInputError(f"triangle needs q >= 1, got q={q}")
        slope = Fraction(q * n)
        if integer_variant:
            return TrapezoidSpec(x_lo, one, 1, 0, slope, -slope)
        # Clipped just before the sloped edge meets the base: keeps four
        # vertices while the x=1 slab still vanishes at t=0.
        return TrapezoidSpec(x_lo, one - 2 * eps / slope, eps, 0, slope, -slope)
    if kind == "triangle_prime":
        beta = params["beta"]
        g = _gamma_slope(n, beta)
        if integer_variant:
            return TrapezoidSpec(x_lo, one, 1, 0, g, -g)
        return TrapezoidSpec(x_lo, one - 2 * eps / g, eps, 0, g, -g)
    raise InvalidInputError(f"unknown trapezoid kind {kind!r}, expected one of {_KINDS}")


def build_trapezoid(kind, params, n, epsilon, integer_variant=False) -> Polytope:
    """One encoding trapezoid as a 2-D polytope (vertices and halfspaces).

    Counting contracts for the family with direction e1/N:
    A -> p+qt, B -> p'-qt, C -> r+floor(t/beta), D -> r'-floor(t/beta),
    triangle -> qt, triangle_prime -> floor(t/beta). The integer variant
    drops the epsilon margins and holds whenever beta does not divide t.
    """
    return _trapezoid_spec(kind, dict(params), n, epsilon, integer_variant).to_polytope()


def _factor_spec(factor, n, eps, integer_variant) -> TrapezoidSpec:
    if isinstance(factor, PlusLinear):
        if factor.p == 0:
            return _trapezoid_spec("triangle", {"q": factor.q}, n, eps, integer_variant)
        return _trapezoid_spec("A", {"p": factor.p, "q": factor.q}, n, eps, integer_variant)
    if isinstance(factor, MinusLinear):
        return _trapezoid_spec(
            "B", {"p_prime": factor.p_prime, "q": factor.q}, n, eps, integer_variant
        )
    if isinstance(factor, PlusFloor):
        if factor.r == 0:
            return _trapezoid_spec(
                "triangle_prime", {"beta": factor.beta}, n, eps, integer_variant
            )
        return _trapezoid_spec(
            "C", {"r": factor.r, "beta": factor.beta}, n, eps, integer_variant
        )
    if isinstance(factor, MinusFloor):
        return _trapezoid_spec(
            "D", {"r_prime": factor.r_prime, "beta": factor.beta}, n, eps, integer_variant
        )
    raise InvalidInputError(f"unknown factor {factor!r}")


@dataclass(frozen=True)
class QdeGadget:
    """Everything the reduction produced for one instance and mode."""

    instance: QdeInstance
    mode: str
    n: int
    epsilon: Fraction
    big_l: int
    factorization: TermFactorization
    term_polytopes: Tuple[Polytope, ...]
    hull: Polytope
    family: TranslationFamily
    delta: Optional[Fraction] = None
    big_k: Optional[int] = None
    parallelogram: Optional[Polytope] = None


_EMBEDDINGS = (
    ((0, 1, 2, 3, 4), {5: 1}),
    ((0, 1, 2), {3: 1, 4: 0, 5: 0}),
    ((0, 1, 2, 3), {4: 1, 5: 0}),
    ((0, 1), {2: 1, 3: 0, 4: 0, 5: 0}),
)
_R_EMBEDDING = ((0, 1), {2: 0, 3: 0, 4: 0, 5: 0})
_EXPECTED_PIECE_VERTICES = (32, 8, 16, 4)


def _parallelogram(n: int, delta: Fraction, big_k: int) -> Polytope:
    """Slanted strip of K*N unit-window slices; counts K on the wide phase."""
    height = Fraction(big_k * n) - _HALF
    right = 1 - delta / 8
    left = 1 - Fraction(1, n) + delta / 8
    drop = height / n
    verts = (
        (left, Fraction(0)),
        (right, Fraction(0)),
        (right - drop, height),
        (left - drop, height),
    )
    inv_n = Fraction(1, n)
    rows = (
        ((Fraction(0), Fraction(-1)), Fraction(0)),
        ((Fraction(0), Fraction(1)), height),
        ((Fraction(1), inv_n), right),
        ((Fraction(-1), -inv_n), -left),
    )
    return Polytope(2, verts, HalfspaceSystem(2, rows))


def max_boundary_slope(gadget_or_fact, n=None, eps=None, integer_variant=False) -> Fraction:
    """Largest |slope| among the sloped trapezoid boundaries of the terms."""
    fact = gadget_or_fact
    if isinstance(fact, QdeGadget):
        n = fact.n
        eps = fact.epsilon
        integer_variant = fact.mode == "integer"
        fact = fact.factorization
    best = Fraction(0)
    for term in fact.terms:
        for f in term:
            spec = _factor_spec(f, n, eps, integer_variant)
            best = max(best, abs(spec.y_low_slope), abs(spec.y_high_slope))
    return best


def build_gadget(inst: QdeInstance, mode: str = "rational") -> QdeGadget:
    """Assemble the 6-dimensional gadget hull for the given mode.

    rational: counts g(t mod N) for every integer t; hull has 60 vertices.
    real: all trapezoids shifted by +delta and the parallelogram added, so
    the count is g(t(lambda) mod N) near lattice phases and at least K on
    the wide phases; hull has 64 vertices.
    integer: epsilon-free shapes; the count contract holds whenever beta
    does not divide t, and the beta | t residues are checked directly
    against the v = 0 row of the objective.
    """
    if mode not in ("rational", "integer", "real"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    fact = term_factorization(inst)
    n = inst.n
    eps = Fraction(1, 4 * n * n)
    integer_variant = mode == "integer"
    products = [
        product_polytope([_factor_spec(f, n, eps, integer_variant) for f in term])
        for term in fact.terms
    ]

    delta = None
    big_k = None
    parallelogram = None
    if mode == "real":
        delta = Fraction(1, 4 * inst.beta**8)
        smax = max_boundary_slope(fact, n, eps)
        if not (delta < eps and inst.beta * smax * delta < 1):
            raise VerificationError("delta is not small enough for this instance")
        max_g = max(g_reference(inst, t, fact.big_l) for t in range(n))
        big_k = fact.big_l + (2 * inst.beta**2 + inst.beta) ** 2 + 1
        if big_k <= max_g:
            raise VerificationError("K does not dominate max g(t)")
        products = [
            translate(p, (delta,) + (Fraction(0),) * (p.dim - 1)) for p in products
        ]
        parallelogram = _parallelogram(n, delta, big_k)

    pieces = []
    for poly, (cmap, fixed) in zip(products, _EMBEDDINGS):
        pieces.append((fixed, embed_with_tags(poly, 6, cmap, fixed)))
    if mode == "real":
        cmap, fixed = _R_EMBEDDING
        pieces.append((fixed, embed_with_tags(parallelogram, 6, cmap, fixed)))

    hull = tagged_hull(pieces)

    if mode in ("rational", "real"):
        for (_, piece), expected in zip(hull.pieces, _EXPECTED_PIECE_VERTICES):
            if len(piece.vertices) != expected:
                raise VerificationError(
                    f"piece has {len(piece.vertices)} vertices, expected {expected}"
                )
        expected_total = 64 if mode == "real" else 60
        if len(hull.vertices) != expected_total:
            raise VerificationError(
                f"hull has {len(hull.vertices)} vertices, expected {expected_total}"
            )
    elif len(hull.vertices) > 60:
        raise VerificationError("integer-mode hull exceeds 60 vertices")

    family = TranslationFamily(hull, unit_vector(6, 0), n)
    return QdeGadget(
        instance=inst,
        mode=mode,
        n=n,
        epsilon=eps,
        big_l=fact.big_l,
        factorization=fact,
        term_polytopes=tuple(products),
        hull=hull,
        family=family,
        delta=delta,
        big_k=big_k,
        parallelogram=parallelogram,
    )


def solve_translation_min(gadget: QdeGadget, guard: Optional[int] = None):
    """Minimum translate count over one period, checked against the oracle.

    Returns (min_count, argmin_t, feasible). Integer mode skips beta | t
    (where the floor encodings shift) and covers those residues by scanning
    the v = 0 objective values directly.
    """
    inst = gadget.instance
    candidates = []
    for t in range(gadget.n):
        if gadget.mode == "integer" and t % inst.beta == 0:
            continue
        candidates.append((count_translate(gadget.family, t, guard), t))
    if gadget.mode == "integer":
        for u in range(inst.gamma):
            val = gadget.big_l + (u * u - inst.alpha) ** 2
            candidates.append((val, u * inst.beta))
    min_count, argmin_t = min(candidates)
    feasible = min_count == gadget.big_l

    oracle_min, _, oracle_feasible = qde_oracle(inst)
    if min_count != gadget.big_l + oracle_min or feasible != oracle_feasible:
        raise VerificationError(
            "gadget minimum disagrees with the brute-force oracle",
            detail={
                "instance": (inst.alpha, inst.beta, inst.gamma),
                "mode": gadget.mode,
                "gadget_min": min_count,
                "expected": gadget.big_l + oracle_min,
            },
        )
    return min_count, argmin_t, feasible


def real_min_scan(gadget: QdeGadget, grid_step=None):
    """Grid scan of |hull + lambda e1| over lambda in [0, 1].

    Verifies the two-phase behavior sample by sample: at least K on the
    wide phase, exactly g(t(lambda) mod N) near lattice phases. Returns
    (min_count, argmin_lambda); the minimum must match the oracle.
    """
    if gadget.mode != "real":
        raise InvalidInputError("real_min_scan needs a real-mode gadget")
    delta = gadget.delta
    step = delta / 8 if grid_step is None else as_rational(grid_step)
    if step <= 0 or step > delta / 8:
        raise InvalidInputError(f"grid step must be in (0, delta/8 = {delta / 8}]")
    inst = gadget.instance
    n = gadget.n
    scan = prepare_e1_scan(gadget.hull, step)
    j_max = int(Fraction(1) / step)
    best = None
    best_lam = None
    for j in range(j_max + 1):
        lam = j * step
        count = scan.count_at(j)
        t_round = math.floor(lam * n + _HALF)
        in_z = abs(lam - Fraction(t_round, n)) <= delta / 4
        frac = lam - Fraction(math.floor(lam * n), n)
        in_y = delta / 8 <= frac <= Fraction(1, n) - delta / 8
        if in_y:
            if count < gadget.big_k:
                raise VerificationError(
                    f"wide-phase sample lambda={lam} counted {count} < K={gadget.big_k}"
                )
        elif in_z:
            expected = g_reference(inst, t_round % n, gadget.big_l)
            if count != expected:
                raise VerificationError(
                    f"lattice-phase sample lambda={lam} counted {count}, expected {expected}"
                )
        else:
            raise VerificationError(f"sample lambda={lam} escaped both phases")
        if best is None or count < best:
            best, best_lam = count, lam
    oracle_min, _, _ = qde_oracle(inst)
    if best != gadget.big_l + oracle_min:
        raise VerificationError(
            f"grid minimum {best} disagrees with oracle minimum {gadget.big_l + oracle_min}"
        )
    return best, best_lam
