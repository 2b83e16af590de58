import math

import numpy as np
import pytest

from dissipstab import models
from dissipstab.hurwitz import classify, ASYMPTOTICALLY_STABLE, MARGINALLY_STABLE, UNSTABLE
from dissipstab.krein import negative_square_count
from dissipstab.msystem import char_quartic, spectrum, system_abscissa
from dissipstab.paradox import onset_search
from dissipstab.smallalg import matrix_eigen


# ---------------------------------------------------------------- ziegler

def test_ziegler_blocks():
    sys = models.build_ziegler(models.ZieglerParams(P=1.5, b=0.2))
    assert np.allclose(sys.M, [[3.0, 1.0], [1.0, 1.0]])
    assert np.allclose(sys.D + sys.G, [[0.4, -0.2], [-0.2, 0.2]])
    assert np.allclose(sys.K + sys.N, [[0.5, 0.5], [-1.0, 1.0]])


def test_ziegler_conservative_limit():
    sys = models.build_ziegler(models.ZieglerParams(P=0.0, b=0.0))
    assert abs(system_abscissa(sys)) < 1e-9


def test_ziegler_flutter_above_threshold():
    sys = models.build_ziegler(models.ZieglerParams(P=2.2, b=0.0))
    assert system_abscissa(sys) > 1e-3
    # conjugate quadruple with positive real part
    vals = [e.value for e in spectrum(sys) for _ in range(e.algebraic_multiplicity)]
    assert sum(1 for v in vals if v.real > 0) == 2


def test_ziegler_criticals_reference_values():
    pk, pk_damped, pk_limit = models.ziegler_criticals(models.ZieglerParams(b=1.0))
    assert pk == pytest.approx(2.085786437626905, abs=1e-12)
    assert pk_limit == pytest.approx(41.0 / 28.0, abs=1e-12)
    assert pk_damped == pytest.approx(41.0 / 28.0 + 0.5, abs=1e-12)
    # b = 0 in the damped formula does not recover the undamped threshold
    _, pk_b0, _ = models.ziegler_criticals(models.ZieglerParams(b=0.0))
    assert pk_b0 == pytest.approx(41.0 / 28.0)
    assert pk - pk_b0 > 0.62


def test_ziegler_onset_matches_damped_formula():
    for b in (0.05, 0.1, 0.2):
        family = models.ziegler_family()
        onset = onset_search(
            lambda P: system_abscissa(family(b, P)), 1.0, 2.4, 0.0
        )[0]
        _, pk_damped, _ = models.ziegler_criticals(models.ZieglerParams(b=b))
        assert onset == pytest.approx(pk_damped, abs=1e-6)


# ---------------------------------------------------------------- brouwer

def test_brouwer_quartic_coefficients():
    rng = np.random.default_rng(2)
    for _ in range(200):
        g = rng.uniform(0.5, 2.0)
        k1, k2 = rng.uniform(-2, 2, size=2)
        om = rng.uniform(0, 2)
        c1, c2 = rng.uniform(0, 1, size=2)
        p = models.BrouwerParams(g=g, k1=k1, k2=k2, omega=om, c1=c1, c2=c2)
        q = char_quartic(models.build_brouwer(p))
        assert q.a1 == pytest.approx(c1 + c2, abs=1e-12)
        assert q.a2 == pytest.approx(g * (k1 + k2) + 2 * om**2 + c1 * c2, abs=1e-10)
        assert q.a3 == pytest.approx(
            c1 * (g * k2 - om**2) + c2 * (g * k1 - om**2), abs=1e-10
        )
        assert q.a4 == pytest.approx(
            (g * k1 - om**2) * (g * k2 - om**2), abs=1e-10
        )


def test_brouwer_single_well_branches():
    # single well: slow rotation and fast rotation stable, in between not
    def p(om):
        return models.BrouwerParams(g=1.0, k1=2.0, k2=1.0, omega=om)

    assert models.brouwer_undamped_verdict(p(0.5)).stable
    assert not models.brouwer_undamped_verdict(p(1.2)).stable
    assert models.brouwer_undamped_verdict(p(1.5)).stable
    # any damping removes the fast branch
    damped = models.BrouwerParams(g=1.0, k1=2.0, k2=1.0, omega=1.5, c1=0.1, c2=0.2)
    assert classify(char_quartic(models.build_brouwer(damped))).stability == UNSTABLE
    slow = models.BrouwerParams(g=1.0, k1=2.0, k2=1.0, omega=0.5, c1=0.1, c2=0.2)
    assert classify(char_quartic(models.build_brouwer(slow))).stability == ASYMPTOTICALLY_STABLE


def test_brouwer_saddle_with_damping_always_unstable():
    for om in (0.5, 1.05, 1.2, 2.0, 5.0):
        sys = models.build_brouwer(
            models.BrouwerParams(g=1.0, k1=1.0, k2=-2.0, omega=om, c1=0.3, c2=0.2)
        )
        assert classify(char_quartic(sys)).stability == UNSTABLE


def test_brouwer_rotating_saddle_window():
    # k1 = 1, k2 = -2, g = 1: stability window 1 < omega^2 < 9/8
    verdict = models.brouwer_undamped_verdict(
        models.BrouwerParams(k1=1.0, k2=-2.0, omega=math.sqrt(1.05))
    )
    assert verdict.stable
    assert verdict.window[0] == pytest.approx(1.0)
    assert verdict.window[1] == pytest.approx(9.0 / 8.0)
    assert not models.brouwer_undamped_verdict(
        models.BrouwerParams(k1=1.0, k2=-2.0, omega=0.9)
    ).stable
    assert not models.brouwer_undamped_verdict(
        models.BrouwerParams(k1=1.0, k2=-2.0, omega=1.1)
    ).stable


def test_brouwer_steep_saddle_and_dome_unstable():
    assert not models.brouwer_undamped_verdict(
        models.BrouwerParams(k1=1.0, k2=-4.0, omega=1.3)
    ).stable
    assert not models.brouwer_undamped_verdict(
        models.BrouwerParams(k1=-0.5, k2=-0.5, omega=1.0)
    ).stable


def test_brouwer_case_list_matches_spectrum():
    rng = np.random.default_rng(8)
    checked = 0
    for _ in range(4000):
        k1, k2 = rng.uniform(-2.0, 2.0, size=2)
        om = rng.uniform(0.0, 2.0)
        p = models.BrouwerParams(g=1.0, k1=k1, k2=k2, omega=om)
        verdict = models.brouwer_undamped_verdict(p)
        q = char_quartic(models.build_brouwer(p))
        margin = min(
            abs(q.a2), abs(q.a4), abs(q.a2**2 - 4 * q.a4), abs(q.a2 - 2 * math.sqrt(q.a4)) if q.a4 > 0 else 1.0
        )
        if margin < 1e-6:
            continue
        spectral = classify(q).stability
        assert verdict.stable == (spectral == MARGINALLY_STABLE), (k1, k2, om)
        checked += 1
    assert checked > 3000


def test_brouwer_pt_symmetric_spectrum():
    # c1 = -c2: eigenvalues invariant under negated conjugation
    sys = models.build_brouwer(
        models.BrouwerParams(g=1.0, k1=1.0, k2=1.0, omega=0.3, c1=0.4, c2=-0.4)
    )
    vals = [e.value for e in spectrum(sys) for _ in range(e.algebraic_multiplicity)]
    for v in vals:
        assert min(abs(-v.conjugate() - w) for w in vals) < 1e-8


def test_lagrange_points():
    p, gascheau = models.lagrange_point_params(0.0)
    assert p.k1 == pytest.approx(1.0) and p.k2 == pytest.approx(-2.0)
    assert gascheau == pytest.approx(1.0)
    p, gascheau = models.lagrange_point_params(0.5)
    assert gascheau == pytest.approx(1.0 - 27.0 / 4.0)
    mu_star = models.GASCHEAU_CRITICAL_RATIO
    assert mu_star == pytest.approx(0.0385209, abs=1e-7)
    _, g0 = models.lagrange_point_params(mu_star)
    assert g0 == pytest.approx(0.0, abs=1e-12)
    # constraint g k1 + g k2 = -1 holds exactly
    for mu in (0.0, 0.01, 0.3, 0.5):
        p, _ = models.lagrange_point_params(mu)
        assert p.k1 + p.k2 == pytest.approx(-1.0, abs=1e-15)


def test_lagrange_stability_agrees_with_closed_form():
    for mu in (0.01, 0.03, 0.0385, 0.039, 0.2, 0.5):
        p, gascheau = models.lagrange_point_params(mu)
        verdict = models.brouwer_undamped_verdict(p)
        if abs(gascheau) < 1e-3:
            continue
        assert verdict.stable == (gascheau > 0)


# ---------------------------------------------------------------- maclaurin

def test_profile_small_e_series():
    om2, b = models.maclaurin_profile(1e-4)
    assert om2 == pytest.approx(8.0 / 15.0 * 1e-8, rel=1e-6)
    assert b == pytest.approx(4.0 / 15.0, rel=1e-8)
    # series and direct formula agree through the switch point
    for e in (0.12, 0.19, 0.2, 0.21, 0.3):
        om2, b = models.maclaurin_profile(e)
        s = math.sqrt(1 - e * e)
        direct_om2 = 2 * e**-3 * (3 - 2 * e * e) * math.asin(e) * s - 6 * e**-2 * (1 - e * e)
        direct_b = s / (4 * e**5) * (e * (3 - 2 * e * e) * s + (4 * e * e - 3) * math.asin(e))
        assert om2 == pytest.approx(direct_om2, rel=1e-9, abs=1e-12)
        assert b == pytest.approx(direct_b, rel=1e-9)


def test_critical_eccentricities():
    e_secular, e_dynamical = models.maclaurin_criticals()
    assert e_secular == pytest.approx(0.8127, abs=1e-3)
    assert e_dynamical == pytest.approx(0.9529, abs=1e-3)
    om2, b = models.maclaurin_profile(e_secular)
    assert 4 * b == pytest.approx(2 * om2, rel=1e-8)
    om2, b = models.maclaurin_profile(e_dynamical)
    assert 4 * b == pytest.approx(om2, rel=1e-8)


def test_riemann_sine_form_agrees():
    from dissipstab.models.maclaurin import _bisect, riemann_sine_equation

    _, e_dynamical = models.maclaurin_criticals()
    root = _bisect(riemann_sine_equation, 0.9, 0.99, 1e-12)
    assert root == pytest.approx(e_dynamical, abs=1e-8)


def test_inviscid_spectrum_closed_form():
    for e in (0.3, 0.7, 0.85, 0.94):
        om2, b = models.maclaurin_profile(e)
        om = math.sqrt(om2)
        root = complex(4 * b - om2) ** 0.5
        expected = {
            1j * om + 1j * root,
            1j * om - 1j * root,
            -1j * om + 1j * root,
            -1j * om - 1j * root,
        }
        sys = models.build_maclaurin(models.MaclaurinParams(e=e), "inviscid")
        vals = [e_.value for e_ in spectrum(sys) for _ in range(e_.algebraic_multiplicity)]
        for v in vals:
            assert min(abs(v - w) for w in expected) < 1e-9


def test_inviscid_small_e_pure_imaginary():
    sys = models.build_maclaurin(models.MaclaurinParams(e=1e-4), "inviscid")
    for entry in spectrum(sys):
        assert abs(entry.value.real) < 1e-10


def test_inviscid_gyroscopic_split():
    sys = models.build_maclaurin(models.MaclaurinParams(e=0.9), "inviscid")
    om = math.sqrt(models.maclaurin_profile(0.9)[0])
    assert sys.Omega == pytest.approx(-2.5 * om)
    assert sys.D[0, 1] == pytest.approx(-1.5 * om)
    assert np.abs(sys.N).max() == 0.0


def test_viscous_destroys_gyroscopic_stabilization():
    e_secular, e_dynamical = models.maclaurin_criticals()
    e_mid = 0.9  # inside the stabilized window
    assert e_secular < e_mid < e_dynamical
    inviscid = models.build_maclaurin(models.MaclaurinParams(e=e_mid), "inviscid")
    assert abs(system_abscissa(inviscid)) < 1e-9
    viscous = models.build_maclaurin(models.MaclaurinParams(e=e_mid, mu=0.01), "viscous")
    assert system_abscissa(viscous) > 0


def test_viscous_growth_rate_relation():
    # 25 Om^2 mu^2 + (x + 5 mu)^2 (Om^2 - x^2 - 10 x mu - 4b) = 0 with x = Re l
    for mu in (1e-3, 1e-2, 0.1):
        for e in (0.75, 0.82, 0.9, 0.96):
            om2, b = models.maclaurin_profile(e)
            sys = models.build_maclaurin(models.MaclaurinParams(e=e, mu=mu), "viscous")
            for entry in spectrum(sys):
                x = entry.value.real
                res = 25 * om2 * mu * mu + (x + 5 * mu) ** 2 * (
                    om2 - x * x - 10 * x * mu - 4 * b
                )
                assert abs(res) < 1e-6


def test_viscous_onset_at_secular_point():
    e_secular, e_dynamical = models.maclaurin_criticals()
    for mu in (1e-1, 1e-2, 1e-4):
        assert models.viscous_onset(mu) == pytest.approx(e_secular, abs=1e-3)
    assert models.viscous_onset(0.0) == pytest.approx(e_dynamical, abs=1e-5)


def test_radiative_assembly():
    p = models.MaclaurinParams(e=0.9, delta=0.05, q1=0.3, q2=0.7)
    sys = models.build_maclaurin(p, "radiative")
    om2, b = models.maclaurin_profile(0.9)
    om = math.sqrt(om2)
    d = 16 * 0.05 * om2 * (6 * b - om2)
    assert np.allclose(np.diag(sys.D), [d, d])
    assert sys.D[0, 1] == pytest.approx(-1.5 * om)
    assert sys.Omega == pytest.approx(-2.5 * om)
    assert np.allclose(np.diag(sys.K), 4 * b - om2 + 2 * 0.05 * 0.3)
    # positional split of delta [[2 q1, 2 q2], [-q2/2, 2 q1]]
    assert sys.nu == pytest.approx(0.05 * (2 * 0.7 + 0.5 * 0.7) / 2)
    assert sys.K[0, 1] == pytest.approx(0.05 * (2 * 0.7 - 0.5 * 0.7) / 2)


def test_radiative_requires_coefficients():
    with pytest.raises(models.MissingRadiativeCoefficients):
        models.build_maclaurin(models.MaclaurinParams(e=0.9, delta=0.05), "radiative")


def test_radiative_table_interpolation(tmp_path):
    table = tmp_path / "q1.txt"
    table.write_text("0.5 1.0\n0.9 5.0\n0.7 3.0\n")
    q1 = models.load_radiative_table(table)
    assert q1(0.7) == pytest.approx(3.0)
    assert q1(0.8) == pytest.approx(4.0)
    p = models.MaclaurinParams(e=0.8, delta=0.1, q1=q1, q2=0.0)
    sys = models.build_maclaurin(p, "radiative")
    om2, b = models.maclaurin_profile(0.8)
    assert np.allclose(np.diag(sys.K), 4 * b - om2 + 2 * 0.1 * 4.0)


def test_damping_ratio_bookkeeping():
    p = models.MaclaurinParams(e=0.9, mu=0.01, delta=0.02)
    expected = 25.0 / (2.0 * models.OMEGA0_DYNAMICAL**4) * 0.5
    assert p.damping_ratio == pytest.approx(expected)
    assert models.MaclaurinParams(e=0.9, mu=0.01).damping_ratio == math.inf


# ---------------------------------------------------------------- sobolev

def test_sobolev_massless_reference_spectrum():
    B, metric = models.build_sobolev(models.SobolevParams(a=1.0, c=2.0))
    vals = [v for v, _ in matrix_eigen(B)]
    lam1, lam2p, lam2m = models.sobolev_massless_spectrum(1.0, 2.0)
    assert lam2p == pytest.approx(-0.5 + 0.5j * math.sqrt(5.0 / 3.0))
    for w in (lam1, lam2p, lam2m):
        assert min(abs(v - w) for v in vals) < 1e-9
    assert negative_square_count(metric) == 1


def test_sobolev_closed_form_matches_matrix_everywhere():
    for c in (0.4, 0.8, 1.3, 2.5, 3.5, 6.0):
        B, _ = models.build_sobolev(models.SobolevParams(a=1.0, c=c))
        vals = [v for v, _ in matrix_eigen(B)]
        for lam in models.sobolev_massless_spectrum(1.0, c):
            assert min(abs(lam - v) for v in vals) < 1e-9


def test_sobolev_band_boundaries():
    for c, complex_expected in ((0.99, False), (1.01, True), (2.99, True), (3.01, False)):
        lam1, lam2p, lam2m = models.sobolev_massless_spectrum(1.0, c)
        is_complex = abs(lam2p.imag) > 1e-12
        assert is_complex == complex_expected
    lo, hi = models.greenhill_band(1.0)
    assert (lo, hi) == (1.0, 3.0)


def test_sobolev_defective_at_band_edge():
    B, _ = models.build_sobolev(models.SobolevParams(a=1.0, c=3.0))
    from dissipstab.smallalg import cluster_values, geometric_multiplicity

    vals = [v for v, _ in matrix_eigen(B)]
    clusters = cluster_values(vals)
    double = [c for c in clusters if c[1] == 2]
    assert len(double) == 1
    assert double[0][0] == pytest.approx(-0.5, abs=1e-7)
    assert geometric_multiplicity(B, -0.5) == 1


def test_sobolev_oblate_definite_metric():
    p = models.SobolevParams(a=1.0, c=0.5)
    assert p.L > 0
    B, metric = models.build_sobolev(p)
    assert negative_square_count(metric) == 0
    assert max(abs(v.imag) for v, _ in matrix_eigen(B)) < 1e-10


def test_sobolev_self_adjointness_in_metric():
    rng = np.random.default_rng(12)
    for _ in range(50):
        p = models.SobolevParams(
            a=rng.uniform(0.5, 2.0),
            c=rng.uniform(0.3, 4.0),
            rho=rng.uniform(0.5, 2.0),
            A1=rng.uniform(0.0, 1.0),
            C1=rng.uniform(0.0, 1.0),
            M1=rng.uniform(0.0, 1.0),
            l1=rng.uniform(0.0, 0.5),
            l2=rng.uniform(0.0, 0.5),
            Omega=rng.uniform(0.5, 2.0),
        )
        B, metric = models.build_sobolev(p)
        gb = metric.gram @ B
        assert np.abs(gb - gb.conj().T).max() <= 1e-10 * max(np.abs(gb).max(), 1e-30)


def test_sobolev_pontryagin_bound():
    for c in (0.5, 1.5, 2.0, 2.9, 3.5):
        B, metric = models.build_sobolev(models.SobolevParams(a=1.0, c=c))
        vals = [v for v, _ in matrix_eigen(B)]
        pairs = sum(1 for v in vals if v.imag > 1e-8) # one per conjugate pair
        assert pairs <= negative_square_count(metric)


def test_sobolev_singular_reduction_rejected():
    with pytest.raises(models.SingularA):
        models.build_sobolev(models.SobolevParams(a=1.0, c=1.0))


# ---------------------------------------------------------------- combres

def test_combres_autonomous_frequencies():
    p = models.CombResParams(Omega=0.5, eps=0.0)
    sys = models.build_combres(p)
    a0 = sys.matrix(0.0)
    vals = np.linalg.eigvals(a0)
    expected = {1j * p.omega1, -1j * p.omega1, 1j * p.omega2, -1j * p.omega2}
    for v in vals:
        assert min(abs(v - w) for w in expected) < 1e-12
    assert p.omega1 * p.omega2 == pytest.approx(1.0)


def test_combres_degenerate_at_zero_rotation():
    p = models.CombResParams(Omega=0.0, eps=0.0)
    vals = np.linalg.eigvals(models.build_combres(p).matrix(0.0))
    assert np.allclose(np.sort(np.abs(vals.imag)), 1.0)


def test_combres_damped_autonomous_decays():
    p = models.CombResParams(Omega=0.5, eps=0.1, mu=0.2)
    # eps > 0 with mu > 0: autonomous part of the flow is damped
    a0 = models.build_combres(p).matrix(0.0)
    assert np.linalg.eigvals(a0).real.max() < 0


def test_monodromy_units_and_damping():
    # unforced and undamped: multipliers on the unit circle
    p = models.CombResParams(Omega=0.5, eps=0.0)
    _, mult = models.monodromy(models.build_combres(p), steps=1500)
    assert max(abs(abs(m) - 1.0) for m in mult) < 1e-8
    # damping pulls the multipliers strictly inside
    p = models.CombResParams(Omega=0.5, eps=0.05, mu=0.4, delta_plus=3.0)
    _, mult = models.monodromy(models.build_combres(p), steps=1500)
    assert max(abs(m) for m in mult) < 1.0
    with pytest.raises(ValueError):
        models.monodromy(models.build_combres(p), steps=100)


def test_combres_unstable_at_exact_resonance():
    p = models.CombResParams(Omega=0.5, eps=0.05, mu=0.0, delta_plus=0.0)
    assert models.floquet_unstable(models.build_combres(p))


def test_combres_interval_closed_forms():
    iv = models.combres_interval(0.0, 2.236)
    assert iv.undamped_half_width == 1.0
    assert iv.damped_half_width == pytest.approx(2.236 / 2.0)
    # half width at omega0 = 2 stays continuous as mu -> 0
    iv = models.combres_interval(1e-9, 2.0)
    assert iv.damped_half_width == pytest.approx(1.0, abs=1e-8)
    assert iv.damped_zero_damping_limit == pytest.approx(1.0)
    # window closes at mu = omega0 / 2
    iv = models.combres_interval(0.6, 1.2)
    assert iv.damped_half_width == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(models.OverdampedWindowClosed):
        models.combres_interval(0.7, 1.2)


def test_combres_discontinuity_witness():
    p = models.CombResParams(Omega=0.5)
    iv = models.combres_interval(1e-6, p.omega_sum)
    assert iv.damped_zero_damping_limit == pytest.approx(p.omega_sum / 2.0)
    assert abs(iv.damped_zero_damping_limit - iv.undamped_half_width) > 0.1


def test_floquet_endpoints_match_closed_form():
    # the heavier acceptance sweep covers more cases; one spot check here
    Omega = 0.5
    p = models.CombResParams(Omega=Omega)
    eps, mu = 0.05, 0.05
    lo, hi = models.floquet_interval(Omega, eps, mu, steps=1400)
    width = models.combres_interval(mu, p.omega_sum).damped_half_width
    assert abs(hi - width) <= 5 * eps
    assert abs(-lo - width) <= 5 * eps
