import math

import numpy as np
import pytest

from dissipstab.paradox import (
    NegativeRadicand,
    NoOnsetFound,
    circulatory_thresholds,
    finite_damping_threshold,
    onset_search,
    umbrella_approximation,
    vanishing_damping_scan,
)
from dissipstab.models.ziegler import ZieglerParams, ziegler_criticals, ziegler_family
from dissipstab.models.maclaurin import maclaurin_criticals, maclaurin_family
from dissipstab.msystem import system_abscissa


def test_circulatory_thresholds_reference_case():
    report = circulatory_thresholds(np.diag([3.0, 1.0]), np.diag([1.0, 2.0]))
    assert report.nu0_sq == pytest.approx(1.0)
    assert report.nucr_sq == pytest.approx(8.0 / 9.0)
    assert report.gap == pytest.approx(1.0 / 9.0)
    assert report.nucr <= report.nu0


def test_equal_damping_ray_no_paradox():
    report = circulatory_thresholds(np.diag([3.0, 1.0]), np.eye(2))
    assert report.gap == pytest.approx(0.0, abs=1e-15)
    assert report.nucr == pytest.approx(report.nu0)


def test_matched_ray_closes_gap():
    # 2 tr(K D) = tr K tr D annihilates the correction
    K = np.diag([3.0, 1.0])
    # for diagonal D = diag(d1, d2): need 2(3 d1 + d2) = 4(d1 + d2) -> d1 = d2 is
    # one solution; a skewed K gives a nontrivial ray
    K = np.array([[3.0, 0.5], [0.5, 1.0]])
    # solve 2 tr(K D) = tr K tr D over diagonal rays: 6 d1 + 2 d2 = 4 d1 + 4 d2
    D = np.diag([1.0, 1.0])
    report = circulatory_thresholds(K, D)
    assert report.gap == pytest.approx(0.0, abs=1e-14)


def test_undamped_threshold_is_a_sum_of_squares():
    # (tr K / 2)^2 - det K = ((k11 - k22)/2)^2 + k12^2 for symmetric K, so the
    # undamped radicand can never go negative; the guard stays defensive
    rng = np.random.default_rng(99)
    for _ in range(200):
        K = rng.standard_normal((2, 2))
        K = 0.5 * (K + K.T)
        report = circulatory_thresholds(K, np.eye(2) + np.diag([0.0, 1.0]))
        expected = ((K[0, 0] - K[1, 1]) / 2.0) ** 2 + K[0, 1] ** 2
        assert report.nu0_sq == pytest.approx(expected, abs=1e-12)
        assert report.nu0_sq >= 0


def test_umbrella_needs_positive_threshold():
    # isotropic stiffness has nu0 = 0 and no first-order umbrella model
    with pytest.raises(NegativeRadicand):
        umbrella_approximation(np.eye(2), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))


def test_gap_identity_random():
    rng = np.random.default_rng(101)
    count = 0
    for _ in range(2000):
        K = rng.standard_normal((2, 2))
        K = 0.5 * (K + K.T)
        D = rng.standard_normal((2, 2))
        D = 0.5 * (D + D.T)
        if np.trace(D) <= 0.1:
            continue
        tr_k = np.trace(K)
        nu0_sq = (tr_k / 2.0) ** 2 - np.linalg.det(K)
        if nu0_sq < 1e-3:
            continue
        report = circulatory_thresholds(K, D)
        expected = ((2.0 * np.trace(K @ D) - tr_k * np.trace(D)) / (2.0 * np.trace(D))) ** 2
        assert report.gap == pytest.approx(expected, rel=1e-10, abs=1e-12)
        count += 1
    assert count > 500


def test_umbrella_approximation_matches_exact_to_first_order():
    K = np.diag([3.0, 1.0])
    basis = (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    approx = umbrella_approximation(K, basis)
    exact = circulatory_thresholds(K, np.diag([1.0, 2.0]))
    correction = approx.correction(1.0, 2.0)
    # approximation error is second order in the correction
    assert approx(1.0, 2.0) == pytest.approx(exact.nucr, abs=correction**2)
    assert correction == pytest.approx(exact.gap, rel=1e-12)


def test_umbrella_rays_are_level_sets():
    K = np.array([[4.0, 1.0], [1.0, 1.5]])
    basis = (np.array([[1.0, 0.2], [0.2, 0.1]]), np.diag([0.3, 1.0]))
    approx = umbrella_approximation(K, basis)
    rng = np.random.default_rng(5)
    for _ in range(100):
        d1, d2 = rng.uniform(0.1, 2.0, size=2)
        base = approx(d1, d2)
        for s in (0.25, 0.5, 3.0, 17.0):
            assert approx(s * d1, s * d2) == pytest.approx(base, rel=1e-12)


def test_umbrella_matched_ray_keeps_threshold():
    K = np.diag([3.0, 1.0])
    basis = (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    approx = umbrella_approximation(K, basis)
    # equal-damping ray zeroes the correction for this K
    assert approx(1.0, 1.0) == pytest.approx(approx.nu0)


def test_finite_damping_threshold_matches_neutral_level():
    # the closed form must equal the nu^2 level where H vanishes
    rng = np.random.default_rng(4)
    for _ in range(500):
        k11, k22 = rng.uniform(0.2, 5.0, size=2)
        d11, d22 = rng.uniform(0.2, 3.0, size=2)
        d12 = rng.uniform(-0.4, 0.4)
        D = np.array([[d11, d12], [d12, d22]])
        a1 = d11 + d22
        a2 = k11 + k22 + d11 * d22 - d12 * d12
        a3 = k11 * d22 + k22 * d11
        from_h = (a1 * a2 * a3 - a3 * a3 - a1 * a1 * k11 * k22) / (a1 * a1)
        assert finite_damping_threshold(k11, k22, D) == pytest.approx(from_h, rel=1e-12)


def test_finite_damping_threshold_vanishing_limit():
    # scaling D to zero recovers the vanishing-damping circulatory threshold
    K = np.diag([3.0, 1.0])
    D = np.array([[1.0, 0.2], [0.2, 2.0]])
    limit = circulatory_thresholds(K, D).nucr_sq
    eps_values = (1e-2, 1e-4, 1e-6)
    errors = [
        abs(finite_damping_threshold(3.0, 1.0, eps * D) - limit) for eps in eps_values
    ]
    assert errors[-1] < 1e-5
    assert errors[0] > errors[1] > errors[2]


def test_onset_search_brackets_sign_change():
    onsets = onset_search(lambda x: x * x - 4.0, 0.0, 5.0)
    assert len(onsets) == 1
    assert onsets[0] == pytest.approx(2.0, abs=1e-7)
    with pytest.raises(NoOnsetFound):
        onset_search(lambda x: 1.0 + x * x, 0.0, 1.0)


def test_onset_search_reports_multiple_crossings():
    onsets = onset_search(lambda x: math.sin(x), 1.0, 8.0)
    assert len(onsets) == 2  # pi and 2 pi
    assert onsets[0] == pytest.approx(math.pi, abs=1e-6)


def test_ziegler_scan_reproduces_paradox():
    scan = vanishing_damping_scan(
        ziegler_family(), (1.0, 2.4), [1e-2, 1e-3, 1e-4]
    )
    pk, _, pk_limit = ziegler_criticals(ZieglerParams())
    assert scan.undamped_onset == pytest.approx(pk, abs=1e-6)
    assert scan.limit == pytest.approx(pk_limit, abs=1e-4)
    assert scan.raw_limit == pytest.approx(pk_limit, abs=1e-4)
    # discontinuity witness: finite gap in the vanishing-damping limit
    assert scan.gap > 0.5
    for eps, onset in scan.rows:
        assert onset == pytest.approx(pk_limit + 0.5 * eps * eps, abs=1e-5)


def test_ziegler_onset_is_bracketed_sign_change():
    family = ziegler_family()
    scan = vanishing_damping_scan(family, (1.0, 2.4), [1e-2])
    onset = scan.rows[0][1]
    h = 1e-5
    assert system_abscissa(family(1e-2, onset - h)) < 0
    assert system_abscissa(family(1e-2, onset + h)) > 0


def test_maclaurin_scan_limit_is_secular_point():
    scan = vanishing_damping_scan(
        maclaurin_family(), (0.7, 0.999), [1e-2, 1e-3, 1e-4]
    )
    e_secular, e_dynamical = maclaurin_criticals()
    assert scan.limit == pytest.approx(e_secular, abs=1e-3)
    assert scan.undamped_onset == pytest.approx(e_dynamical, abs=1e-5)
    assert scan.gap > 0.1


def test_eps_list_validation():
    with pytest.raises(ValueError):
        vanishing_damping_scan(ziegler_family(), (1.0, 2.4), [1e-3, 1e-2])
    with pytest.raises(ValueError):
        vanishing_damping_scan(ziegler_family(), (1.0, 2.4), [0.0])
