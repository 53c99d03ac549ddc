"""Acceptance criteria, one test per criterion, at their stated scales.

Each test prints a single PASS line on success (run with -s to see them);
any contract violation raises and fails the test. Exact arithmetic
throughout: every tolerance is zero.
"""

import time

import pytest

from ehrhart_forge.qde import QdeInstance, build_gadget
from ehrhart_forge.verify import (
    verify_anchors,
    verify_disjoint_union,
    verify_gadget,
    verify_identity,
    verify_interpolation,
    verify_real,
    verify_realize,
    verify_term_contracts,
    verify_transform,
    verify_trapezoids,
)


def _report(num, label, report, elapsed):
    print(f"ACCEPTANCE {num}: PASS {label} ({report['checks']} checks, {elapsed:.1f}s)")


def test_criterion_1_trapezoid_contracts():
    t0 = time.time()
    report = verify_trapezoids(n_max=24, val_max=8)
    elapsed = time.time() - t0
    _report(1, "trapezoid contracts (N up to 24, values up to 8)", report, elapsed)
    assert elapsed < 60.0


def test_criterion_2_reduction_soundness():
    t0 = time.time()
    report = verify_gadget(beta_max=4)
    report_terms = verify_term_contracts(beta_max=5)
    elapsed = time.time() - t0
    combined = {"checks": report["checks"] + report_terms["checks"]}
    _report(2, "reduction soundness (beta <= 4 exhaustive, both modes)", combined, elapsed)
    assert elapsed < 300.0


def test_criterion_3_vertex_anchors():
    t0 = time.time()
    checks = 0
    for beta in range(2, 5):
        for gamma in range(1, beta):
            for alpha in range(beta):
                inst = QdeInstance(alpha, beta, gamma)
                assert len(build_gadget(inst, "rational").hull.vertices) == 60
                assert len(build_gadget(inst, "real").hull.vertices) == 64
                checks += 2
    _report(3, "vertex-count anchors 60/64", {"checks": checks}, time.time() - t0)


def test_criterion_4_disjoint_union():
    t0 = time.time()
    report = verify_disjoint_union(beta_max=3)
    _report(4, "hull membership equals piece sum (beta <= 3)", report, time.time() - t0)


def test_criterion_5_real_translation():
    t0 = time.time()
    report = verify_real(beta_max=3)
    _report(5, "two-phase real translation grid (beta <= 3)", report, time.time() - t0)


def test_criterion_6_dilation_conversion():
    t0 = time.time()
    report = verify_transform(beta_max=3, random_count=5)
    _report(6, "translation-to-dilation conversion", report, time.time() - t0)


def test_criterion_7_product_identity():
    t0 = time.time()
    report = verify_identity(n_values=(2, 3, 4, 5), trials=100, bound=50)
    _report(7, "product identity n in 2..5", report, time.time() - t0)


def test_criterion_8_sequence_realization():
    t0 = time.time()
    report = verify_realize(count=20, r_max=6, c_max=10)
    elapsed = time.time() - t0
    _report(8, "20 random sequence realizations", report, elapsed)
    assert elapsed < 600.0


def test_criterion_9_skew_simplex_anchors():
    t0 = time.time()
    report = verify_anchors(k_max=6)
    _report(9, "skew simplex counts 4 and k+1", report, time.time() - t0)


def test_criterion_10_interpolation():
    t0 = time.time()
    report = verify_interpolation(k_max=30)
    _report(10, "interpolated polynomials and threshold search", report, time.time() - t0)
