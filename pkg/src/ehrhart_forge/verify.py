"""Bundled verification suites: every counting contract re-derived at desk
scale against independent oracles (exhaustive search, direct enumeration,
exact LP hull membership)."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Optional

from .counting import (
    TranslationFamily,
    count_lattice_points,
    count_translate,
    ehrhart_value,
    prepare_e1_scan,
)
from .errors import UnsupportedInputError, VerificationError
from .geometry import (
    HalfspaceSystem,
    Polytope,
    integer_bounding_box,
    split_axis,
    translate,
    unit_vector,
)
from .lp import contains_hull
from .qde import (
    QdeGadget,
    QdeInstance,
    build_gadget,
    build_trapezoid,
    g_reference,
    max_boundary_slope,
    real_min_scan,
    solve_translation_min,
    term_factorization,
    _factor_spec,
)
from .fluctuation import (
    product_identity_expansion,
    realize_sequence,
    sequence_to_qp,
)
from .transform import ehrhart_poly_interpolate, k_etp_integer, to_dilation_family

_DEFAULT_SEED = 20260810


def _fail(message, **detail):
    raise VerificationError(message, detail=detail or None)


# ---------------------------------------------------------------------------
# Tagged-hull certification


def certify_tagged_hull(poly: Polytope) -> int:
    """Prove lattice(hull) = disjoint-union(lattice(pieces)) structurally.

    Walks the tag-split tree: at each level the split coordinate must be
    tagged by every remaining piece with values in [0, 1], the remaining
    hull vertices must take exactly the tagged values there, and each leaf's
    vertex set must be exactly its piece's. Faces of a polytope under a
    valid inequality are spanned by the vertices attaining it, so integer
    points (whose tagged coordinates are forced to the 0/1 tag values) land
    inside single pieces. Returns the number of splits checked.
    """
    if not poly.pieces:
        _fail("polytope has no pieces to certify")
    checks = 0

    def rec(pieces, vertices):
        nonlocal checks
        if len(pieces) == 1:
            tag, q = pieces[0]
            if set(q.vertices) != set(vertices):
                _fail("leaf vertex set differs from its piece")
            if q.pieces:
                checks += certify_tagged_hull(q)
            return
        ax = split_axis(pieces)
        if ax is None:
            _fail("no common split coordinate: tag structure unsupported")
        groups = {}
        for tag, q in pieces:
            val = dict(tag)[ax]
            if not 0 <= val <= 1:
                _fail(f"tag value {val} at axis {ax} outside [0, 1]")
            groups.setdefault(val, []).append((tag, q))
        vgroups = {}
        for v in vertices:
            vgroups.setdefault(v[ax], []).append(v)
        if set(vgroups) != set(groups):
            _fail(f"hull vertices take unexpected values at split axis {ax}")
        checks += 1
        for val, grp in groups.items():
            rec(grp, vgroups[val])

    rec(list(poly.pieces), list(poly.vertices))
    return checks


def tagged_contains_integer(poly: Polytope, point) -> bool:
    """Hull membership for integer points of a certified tagged hull,
    decided through the tag-split tree (exact, no LP)."""
    pieces = list(poly.pieces) if poly.pieces else None
    if pieces is None:
        return contains_hull(poly, point)
    while len(pieces) > 1:
        ax = split_axis(pieces)
        if ax is None:
            return contains_hull(poly, point)
        val = point[ax]
        pieces = [(t, q) for t, q in pieces if dict(t)[ax] == val]
        if not pieces:
            return False
    q = pieces[0][1]
    if q.halfspaces is not None:
        return q.halfspaces.contains(point)
    if q.pieces:
        return tagged_contains_integer(q, point)
    return contains_hull(q, point)


def _piece_cell_union(poly: Polytope):
    cells = set()
    for _, q in poly.pieces:
        box = integer_bounding_box(q)
        if any(lo > hi for lo, hi in box):
            continue
        cells.update(itertools.product(*(range(lo, hi + 1) for lo, hi in box)))
    return sorted(cells)


# ---------------------------------------------------------------------------
# Suites


def _instances(beta_max: int):
    for beta in range(2, beta_max + 1):
        for gamma in range(1, beta):
            for alpha in range(beta):
                yield QdeInstance(alpha, beta, gamma)


def verify_trapezoids(n_max: int = 24, val_max: int = 8) -> dict:
    """A/B/C/D counting contracts over all small parameter combinations."""
    checks = 0
    e1 = unit_vector(2, 0)
    for n in range(2, n_max + 1):
        eps = Fraction(1, 4 * n * n)
        for q in range(1, val_max + 1):
            for p in range(1, val_max + 1):
                fam = TranslationFamily(build_trapezoid("A", {"p": p, "q": q}, n, eps), e1, n)
                for t in range(n):
                    if count_translate(fam, t) != p + q * t:
                        _fail("F_A contract", n=n, p=p, q=q, t=t)
                    checks += 1
            for dp in range(1, val_max + 1):
                pp = q * n + dp
                fam = TranslationFamily(
                    build_trapezoid("B", {"p_prime": pp, "q": q}, n, eps), e1, n
                )
                for t in range(n):
                    if count_translate(fam, t) != pp - q * t:
                        _fail("F_B contract", n=n, p_prime=pp, q=q, t=t)
                    checks += 1
        for beta in range(2, n + 1):
            if n % beta:
                continue
            gamma = n // beta
            for r in range(1, val_max + 1):
                fam = TranslationFamily(
                    build_trapezoid("C", {"r": r, "beta": beta}, n, eps), e1, n
                )
                for t in range(n):
                    if count_translate(fam, t) != r + t // beta:
                        _fail("F_C contract", n=n, beta=beta, r=r, t=t)
                    checks += 1
            for dr in range(1, val_max + 1):
                rp = gamma + dr
                fam = TranslationFamily(
                    build_trapezoid("D", {"r_prime": rp, "beta": beta}, n, eps), e1, n
                )
                for t in range(n):
                    if count_translate(fam, t) != rp - t // beta:
                        _fail("F_D contract", n=n, beta=beta, r_prime=rp, t=t)
                    checks += 1
    return {"suite": "trapezoids", "checks": checks}


def verify_term_contracts(beta_max: int = 5) -> dict:
    """Each product polytope counts its term, exhaustively over a period."""
    from .geometry import product_polytope

    checks = 0
    for inst in _instances(beta_max):
        fact = term_factorization(inst)
        n = inst.n
        eps = Fraction(1, 4 * n * n)
        for i, term in enumerate(fact.terms):
            poly = product_polytope([_factor_spec(f, n, eps, False) for f in term])
            fam = TranslationFamily(poly, unit_vector(poly.dim, 0), n)
            for t in range(n):
                if count_translate(fam, t) != fact.term_value(i, t):
                    _fail(
                        "term contract",
                        instance=(inst.alpha, inst.beta, inst.gamma),
                        term=i + 1,
                        t=t,
                    )
                checks += 1
    return {"suite": "terms", "checks": checks}


def verify_gadget(beta_max: int = 4) -> dict:
    """Reduction soundness at desk scale, both modes, plus vertex anchors."""
    checks = 0
    for inst in _instances(beta_max):
        gadget = build_gadget(inst, "rational")
        if len(gadget.hull.vertices) != 60:
            _fail("rational hull vertex anchor", instance=(inst.alpha, inst.beta, inst.gamma))
        checks += 1
        for t in range(-inst.n, 2 * inst.n):
            if count_translate(gadget.family, t) != g_reference(inst, t % inst.n, gadget.big_l):
                _fail(
                    "gadget count contract",
                    instance=(inst.alpha, inst.beta, inst.gamma),
                    t=t,
                )
            checks += 1
        solve_translation_min(gadget)
        checks += 1

        slope_cap = 4 * inst.beta**6
        if max_boundary_slope(gadget) > slope_cap:
            _fail("slope bound", instance=(inst.alpha, inst.beta, inst.gamma))
        checks += 1

        int_gadget = build_gadget(inst, "integer")
        for t in range(inst.n):
            if t % inst.beta == 0:
                continue
            if count_translate(int_gadget.family, t) != g_reference(inst, t, gadget.big_l):
                _fail(
                    "integer-mode count contract",
                    instance=(inst.alpha, inst.beta, inst.gamma),
                    t=t,
                )
            checks += 1
        solve_translation_min(int_gadget)
        checks += 1

        real_gadget = build_gadget(inst, "real")
        if len(real_gadget.hull.vertices) != 64:
            _fail("real hull vertex anchor", instance=(inst.alpha, inst.beta, inst.gamma))
        checks += 1
    return {"suite": "gadget", "checks": checks}


def verify_disjoint_union(
    beta_max: int = 3, lp_samples: int = 120, seed: int = _DEFAULT_SEED
) -> dict:
    """Hull-membership counting equals the piece sum, cell by cell.

    Every cell of the union of piece boxes is decided twice (tag-split hull
    membership vs per-piece halfspaces, requiring exactly one hit); the
    split tree is certified structurally; exact-LP membership re-checks all
    hull vertices and a random cell sample.
    """
    rng = random.Random(seed)
    checks = 0
    for inst in _instances(beta_max):
        gadget = build_gadget(inst, "rational")
        checks += certify_tagged_hull(gadget.hull)
        for t in range(inst.n):
            hull_t = translate(gadget.hull, gadget.family.offset(t))
            cells = _piece_cell_union(hull_t)
            membership_count = 0
            for cell in cells:
                pt = tuple(Fraction(c) for c in cell)
                hits = sum(
                    1 for _, q in hull_t.pieces if q.halfspaces.contains(pt)
                )
                if hits > 1:
                    _fail("pieces overlap", cell=cell, t=t)
                via_tags = tagged_contains_integer(hull_t, pt)
                if via_tags != (hits == 1):
                    _fail("hull membership disagrees with piece membership", cell=cell, t=t)
                membership_count += via_tags
            piece_sum = count_lattice_points(hull_t)
            if membership_count != piece_sum:
                _fail(
                    "hull-membership count differs from piece sum",
                    instance=(inst.alpha, inst.beta, inst.gamma),
                    t=t,
                    membership=membership_count,
                    pieces=piece_sum,
                )
            checks += len(cells)

            for v in hull_t.vertices:
                if not contains_hull(hull_t, v):
                    _fail("hull vertex rejected by LP membership", t=t)
            checks += len(hull_t.vertices)
        hull0 = translate(gadget.hull, gadget.family.offset(0))
        cells0 = _piece_cell_union(hull0)
        sample = rng.sample(cells0, min(lp_samples, len(cells0)))
        for cell in sample:
            pt = tuple(Fraction(c) for c in cell)
            if contains_hull(hull0, pt) != tagged_contains_integer(hull0, pt):
                _fail("LP membership disagrees with tag-split membership", cell=cell)
            checks += 1
    return {"suite": "disjoint-union", "checks": checks}


def verify_real(beta_max: int = 3, grid_step=None) -> dict:
    """Two-phase behavior of the perturbed gadget on the full default grid.

    The parallelogram alone counts K exactly on wide-phase samples and 0
    elsewhere; the hull scan enforces its per-sample contract and the grid
    minimum must equal the rational minimum (the oracle's).
    """
    checks = 0
    for inst in _instances(beta_max):
        gadget = build_gadget(inst, "real")
        delta = gadget.delta
        step = delta / 8 if grid_step is None else grid_step
        n = gadget.n

        rscan = prepare_e1_scan(gadget.parallelogram, step)
        j_max = int(Fraction(1) / step)
        for j in range(j_max + 1):
            lam = j * step
            frac = lam - Fraction(math.floor(lam * n), n)
            in_y = delta / 8 <= frac <= Fraction(1, n) - delta / 8
            got = rscan.count_at(j)
            expected = gadget.big_k if in_y else 0
            if got != expected:
                _fail(
                    "parallelogram phase count",
                    instance=(inst.alpha, inst.beta, inst.gamma),
                    j=j,
                    got=got,
                    expected=expected,
                )
        checks += j_max + 1

        best, _ = real_min_scan(gadget, step)  # verifies every sample inside
        checks += j_max + 1
        rational_min, _, _ = solve_translation_min(build_gadget(inst, "rational"))
        if best != rational_min:
            _fail(
                "grid minimum differs from rational minimum",
                instance=(inst.alpha, inst.beta, inst.gamma),
            )
        checks += 1
    return {"suite": "real", "checks": checks}


def verify_identity(
    n_values=(2, 3, 4, 5), trials: int = 100, bound: int = 50, seed: int = _DEFAULT_SEED
) -> dict:
    """The product expansion identity holds exactly on random assignments."""
    rng = random.Random(seed)
    checks = 0
    for n in n_values:
        exp = product_identity_expansion(n)
        if len(exp.summands) != 2**n - 1:
            _fail("summand count", n=n)
        for _ in range(trials):
            gs = [rng.randint(-bound, bound) for _ in range(n)]
            hs = [rng.randint(-bound, bound) for _ in range(n)]
            lhs = 3 ** (n - 1) * math.prod(gs) + math.prod(hs)
            if exp.evaluate(gs, hs) != lhs:
                _fail("identity evaluation", n=n, gs=gs, hs=hs)
            checks += 1
    return {"suite": "identity", "checks": checks}


def verify_realize(
    count: int = 20, r_max: int = 6, c_max: int = 10, seed: int = _DEFAULT_SEED
) -> dict:
    """Random sequences realized and re-verified by direct dilation counts."""
    rng = random.Random(seed)
    checks = 0
    for _ in range(count):
        r = rng.randint(1, r_max)
        values = [rng.randint(0, c_max) for _ in range(r)]
        res = realize_sequence(values)
        for i, c in enumerate(values):
            if ehrhart_value(res.q, i + res.m) != c + res.big_k:
                _fail("realized sequence value", values=values, i=i)
            checks += 1
        qp = sequence_to_qp(values)
        n_eff = 2  # one floor factor per term plus the absorbed coefficient
        if res.vertex_count > 2 * r * 4 ** (n_eff + 1):
            _fail("vertex bound", values=values, vertex_count=res.vertex_count)
        r_eff = 2 * r
        dim_bound = 2 * n_eff + 2 + ((r_eff - 1).bit_length() if r_eff > 1 else 0)
        if res.dim > dim_bound:
            _fail("dimension bound", values=values, dim=res.dim)
        checks += len(qp.terms)
    return {"suite": "realize", "checks": checks}


def _random_family(rng: random.Random) -> TranslationFamily:
    n = rng.randint(1, 4)
    eps = Fraction(1, 4 * n * n)
    p = rng.randint(1, 4)
    q = rng.randint(1, 3)
    poly = build_trapezoid("A", {"p": p, "q": q}, n, eps)
    return TranslationFamily(poly, unit_vector(2, 0), n)


def verify_transform(
    beta_max: int = 3, random_count: int = 5, seed: int = _DEFAULT_SEED
) -> dict:
    """Translation-to-dilation conversion re-verified count by count."""
    rng = random.Random(seed)
    checks = 0
    families = [
        (f"gadget{inst.alpha}-{inst.beta}-{inst.gamma}", build_gadget(inst).family)
        for inst in _instances(beta_max)
    ]
    families += [(f"random{i}", _random_family(rng)) for i in range(random_count)]
    for name, fam in families:
        conv = to_dilation_family(fam)
        if conv.m % fam.denominator:
            _fail("M is not a multiple of N", family=name)
        for t in range(fam.denominator):
            if ehrhart_value(conv.q, t + conv.m) != count_translate(fam, t):
                _fail("conversion contract", family=name, t=t)
            checks += 1
    return {"suite": "transform", "checks": checks}


def unit_box(dim: int) -> Polytope:
    verts = tuple(
        tuple(Fraction(b) for b in bits) for bits in itertools.product((0, 1), repeat=dim)
    )
    rows = []
    for i in range(dim):
        up = [Fraction(0)] * dim
        up[i] = Fraction(1)
        rows.append((tuple(up), Fraction(1)))
        down = [Fraction(0)] * dim
        down[i] = Fraction(-1)
        rows.append((tuple(down), Fraction(0)))
    return Polytope(dim, verts, HalfspaceSystem(dim, tuple(rows)))


def standard_simplex(dim: int) -> Polytope:
    verts = [tuple(Fraction(0) for _ in range(dim))]
    for i in range(dim):
        verts.append(tuple(Fraction(1 if j == i else 0) for j in range(dim)))
    rows = []
    for i in range(dim):
        down = [Fraction(0)] * dim
        down[i] = Fraction(-1)
        rows.append((tuple(down), Fraction(0)))
    rows.append((tuple(Fraction(1) for _ in range(dim)), Fraction(1)))
    return Polytope(dim, tuple(verts), HalfspaceSystem(dim, tuple(rows)))


def skew_simplex_example(k: int) -> Polytope:
    """3-D simplex whose half-shift along e1 counts k+1 points (4 unshifted)."""
    verts = (
        (Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(k)),
        (Fraction(1), Fraction(-1), Fraction(k)),
    )
    return Polytope(3, verts)


def verify_anchors(k_max: int = 6) -> dict:
    """The skew simplex family: |P| = 4 while the half-shift counts k+1."""
    checks = 0
    half = (Fraction(1, 2), Fraction(0), Fraction(0))
    for k in range(1, k_max + 1):
        poly = skew_simplex_example(k)
        if count_lattice_points(poly) != 4:
            _fail("unshifted skew simplex count", k=k)
        if count_lattice_points(translate(poly, half)) != k + 1:
            _fail("shifted skew simplex count", k=k)
        checks += 2
    return {"suite": "anchors", "checks": checks}


def verify_interpolation(k_max: int = 30) -> dict:
    """Interpolated counting polynomials match direct counts; the polynomial
    threshold search agrees with a brute-force scan for every small k."""
    checks = 0
    fixtures = [(f"box{d}", unit_box(d)) for d in (1, 2, 3)]
    fixtures += [(f"simplex{d}", standard_simplex(d)) for d in (1, 2, 3)]
    fixtures.append(("skew2", skew_simplex_example(2)))
    for name, poly in fixtures:
        p = ehrhart_poly_interpolate(poly)
        for t in range(poly.dim + 4):
            if p.evaluate_int(t) != ehrhart_value(poly, t):
                _fail("interpolation mismatch", fixture=name, t=t)
            checks += 1
        values = []
        t = 0
        while True:
            values.append(ehrhart_value(poly, t))
            if values[-1] >= k_max:
                break
            t += 1
        for k in range(1, k_max + 1):
            expected = None
            for tt, v in enumerate(values):
                if v < k:
                    expected = tt
            # counts are nondecreasing, so beyond the table f >= k_max >= k
            got = k_etp_integer(poly, k)
            if got != expected:
                _fail("k-ETP mismatch", fixture=name, k=k, got=got, expected=expected)
            checks += 1
    return {"suite": "interpolation", "checks": checks}


def verify_gadget_fixture(gadget: QdeGadget) -> dict:
    """Contract check of a deserialized gadget against its stated constants."""
    checks = 0
    inst = gadget.instance
    for t in range(gadget.n):
        if gadget.mode == "integer" and t % inst.beta == 0:
            continue
        expected = g_reference(inst, t, gadget.big_l)
        if count_translate(gadget.family, t) != expected:
            _fail("fixture count contract", t=t)
        checks += 1
    if gadget.mode in ("rational", "real"):
        expected_total = 64 if gadget.mode == "real" else 60
        if len(gadget.hull.vertices) != expected_total:
            _fail("fixture vertex anchor")
        checks += 1
    return {"suite": "gadget-fixture", "checks": checks}


_SUITE_RUNNERS = {
    "trapezoids": lambda beta_max: [verify_trapezoids()],
    "gadget": lambda beta_max: [
        verify_gadget(beta_max or 4),
        verify_term_contracts(beta_max or 5),
        verify_disjoint_union(min(beta_max or 3, 3)),
    ],
    "real": lambda beta_max: [verify_real(min(beta_max or 3, 3))],
    "identity": lambda beta_max: [verify_identity()],
    "realize": lambda beta_max: [verify_realize()],
    "transform": lambda beta_max: [
        verify_transform(min(beta_max or 3, 3)),
        verify_anchors(),
        verify_interpolation(),
    ],
}


def run_suite(name: str, beta_max: Optional[int] = None) -> list:
    """Run one named suite (or 'all'); returns the list of reports."""
    if name == "all":
        reports = []
        for key in _SUITE_RUNNERS:
            reports.extend(_SUITE_RUNNERS[key](beta_max))
        return reports
    if name not in _SUITE_RUNNERS:
        raise UnsupportedInputError(
            f"unknown suite {name!r}; choose from {sorted(_SUITE_RUNNERS)} or 'all'"
        )
    return _SUITE_RUNNERS[name](beta_max)
