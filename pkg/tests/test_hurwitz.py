import math

import numpy as np
import pytest

from dissipstab.hurwitz import (
    ASYMPTOTICALLY_STABLE,
    MARGINALLY_STABLE,
    UNSTABLE,
    NonPositiveA4,
    classify,
    hurwitz_H,
    limit_discontinuity,
    scale_normalize,
    surface_V_sample,
    tangent_cone_contains,
    verdict_from_roots,
)
from dissipstab.msystem import QuarticPoly
from dissipstab.smallalg import poly_roots


def batched_quartic_roots(coeffs):
    """Independent root oracle: stacked companion matrices through LAPACK."""
    n = coeffs.shape[0]
    comp = np.zeros((n, 4, 4))
    comp[:, 1, 0] = comp[:, 2, 1] = comp[:, 3, 2] = 1.0
    comp[:, 0, 3] = -coeffs[:, 3]
    comp[:, 1, 3] = -coeffs[:, 2]
    comp[:, 2, 3] = -coeffs[:, 1]
    comp[:, 3, 3] = -coeffs[:, 0]
    return np.linalg.eigvals(comp)


def verdict_from_eigs(eigs, tol=1e-7):
    mx = eigs.real.max()
    scale = 1.0 + np.abs(eigs).max()
    if mx < -tol * scale:
        return ASYMPTOTICALLY_STABLE
    if mx > tol * scale:
        return UNSTABLE
    axis = eigs[np.abs(eigs.real) <= tol * scale]
    for i in range(len(axis)):
        for j in range(i + 1, len(axis)):
            if abs(axis[i] - axis[j]) <= 1e-6 * scale:
                return UNSTABLE
    return MARGINALLY_STABLE


def boundary_margin(a1, a2, a3, a4, h):
    margins = [abs(a1), abs(a2), abs(a3), abs(a4), abs(h)]
    if a4 > 0:
        margins.append(abs(a2 - 2.0 * math.sqrt(a4)))
    return min(margins)


def test_hurwitz_H_values():
    assert hurwitz_H(QuarticPoly(4, 6, 4, 1)) == pytest.approx(-64.0)
    # with a1 = 0 or a3 = 0 the product term drops and H >= 0
    assert hurwitz_H(QuarticPoly(0, 5, 2, 3)) == pytest.approx(4.0)
    assert hurwitz_H(QuarticPoly(2, 5, 0, 3)) == pytest.approx(12.0)
    # ruled-surface point at m = 2, a1 = 1: (1, 2.5, 2, 1)
    assert hurwitz_H(QuarticPoly(1, 2.5, 2, 1)) == pytest.approx(0.0)


def test_classify_examples():
    assert classify(QuarticPoly(1, 3, 1, 6)).stability == UNSTABLE
    assert classify(QuarticPoly(4, 6, 4, 1)).stability == ASYMPTOTICALLY_STABLE
    b = classify(QuarticPoly(0, 3, 0, 1))
    assert b.stability == MARGINALLY_STABLE
    assert "condition B" in b.certificate
    degenerate = classify(QuarticPoly(0, 2, 0, 1))
    assert degenerate.stability == UNSTABLE
    assert "degenerate" in degenerate.certificate


def test_classify_boundary_subcases():
    # a4 = 0 with H < 0: simple root at zero, rest strictly left
    v = classify(QuarticPoly(4, 6, 4, 0))
    assert v.stability == MARGINALLY_STABLE
    assert "zero" in v.certificate
    # H = 0 with positive coefficients: one imaginary pair at mu = sqrt(a3/a1)
    v = classify(QuarticPoly(1, 2.5, 2, 1))
    assert v.stability == MARGINALLY_STABLE
    assert "imaginary pair" in v.certificate
    mu = math.sqrt(2.0)
    assert f"{mu:.6g}"[:6] in v.certificate


def test_classify_oracle_equivalence_bulk():
    rng = np.random.default_rng(2024)
    n = 20000
    coeffs = rng.uniform(-2.0, 8.0, size=(n, 4))
    eigs = batched_quartic_roots(coeffs)
    mismatches = 0
    for k in range(n):
        a1, a2, a3, a4 = coeffs[k]
        h = a1 * a1 * a4 + a3 * a3 - a1 * a2 * a3
        if boundary_margin(a1, a2, a3, a4, h) <= 1e-8:
            continue
        verdict = classify(QuarticPoly(a1, a2, a3, a4)).stability
        oracle = verdict_from_eigs(eigs[k])
        if verdict != oracle:
            mismatches += 1
    assert mismatches == 0


def test_classify_agrees_with_own_root_kernel():
    rng = np.random.default_rng(77)
    for _ in range(2000):
        a = rng.uniform(-2.0, 8.0, size=4)
        h = a[0] ** 2 * a[3] + a[2] ** 2 - a[0] * a[1] * a[2]
        if boundary_margin(*a, h) <= 1e-8:
            continue
        q = QuarticPoly(*a)
        assert classify(q).stability == verdict_from_roots(poly_roots(q.as_poly()))


def test_factorized_H_identity():
    # for (l^2 + p1 l + q1)(l^2 + p2 l + q2): H = -p1 p2 (a1 a3 + (q1 - q2)^2)
    rng = np.random.default_rng(13)
    for _ in range(500):
        p1, p2, q1, q2 = rng.uniform(0.1, 5.0, size=4)
        a1 = p1 + p2
        a2 = p1 * p2 + q1 + q2
        a3 = p1 * q2 + p2 * q1
        a4 = q1 * q2
        h = hurwitz_H(QuarticPoly(a1, a2, a3, a4))
        expected = -p1 * p2 * (a1 * a3 + (q1 - q2) ** 2)
        assert h == pytest.approx(expected, rel=1e-9)


def test_scale_normalize():
    q, c = scale_normalize(QuarticPoly(1, 2, 3, 16))
    assert c == pytest.approx(2.0)
    assert q.a4 == pytest.approx(1.0)
    q1, c1 = scale_normalize(QuarticPoly(3, 1, 2, 1))
    assert c1 == 1.0 and q1.as_tuple() == (3, 1, 2, 1)
    with pytest.raises(NonPositiveA4):
        scale_normalize(QuarticPoly(1, 1, 1, 0))


def test_scale_normalize_preserves_verdict():
    rng = np.random.default_rng(19)
    checked = 0
    for _ in range(500):
        a = rng.uniform(0.05, 8.0, size=4)
        q = QuarticPoly(*a)
        scaled, _ = scale_normalize(q)
        assert classify(q).stability == classify(scaled).stability
        checked += 1
    assert checked == 500


def test_limit_discontinuity_identity():
    rng = np.random.default_rng(37)
    for _ in range(10000):
        b1, b3, a4 = rng.uniform(0.05, 5.0, size=3)
        g1, g2, gap = limit_discontinuity(b1, b3, a4)
        assert g1 - g2 == pytest.approx(gap, rel=1e-10)
        assert gap >= 0
    # the gap closes only on the matched ray
    _, _, gap = limit_discontinuity(2.0, 2.0 * math.sqrt(3.0), 3.0)
    assert gap == pytest.approx(0.0, abs=1e-12)


def test_surface_sample_H_zero_and_double_line():
    points = surface_V_sample((0.5, 4.0), (0.0, 3.0), (15, 11))
    assert any(p.on_double_line for p in points)
    for p in points:
        if p.on_double_line:
            assert p.a1 == 0.0 and p.a3 == 0.0 and p.a2 >= 2.0
            continue
        h = hurwitz_H(QuarticPoly(p.a1, p.a2, p.a3, 1.0))
        assert abs(h) < 1e-12
    # umbrella spine endpoint: generators coincide at a2 = 2 when m = 1
    spine = surface_V_sample((1.0, 1.0), (0.0, 1.0), (1, 2))
    assert all(p.a2 == pytest.approx(2.0) for p in spine if not p.on_double_line)
    # m = 2 ruling sits at a2 = 2.5
    line = surface_V_sample((2.0, 2.0), (0.0, 1.0), (1, 2))
    assert all(p.a2 == pytest.approx(2.5) for p in line if not p.on_double_line)


def test_tangent_cone_membership():
    assert tangent_cone_contains((1.0, 1.0, 3.0))
    assert not tangent_cone_contains((1.0, 2.0, 3.0))
    assert not tangent_cone_contains((1.0, 1.0, 2.0))
    assert not tangent_cone_contains((0.0, 0.0, 3.0))
