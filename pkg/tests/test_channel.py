import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdiqkd import ChannelParams, GainPoint, IntensityTriple, bessel_i0, build_gain_table
from mdiqkd.channel import gains, gains_x, gains_z

mpmath.mp.dps = 40


def series_i0(x, terms=30):
    x = mpmath.mpf(x)
    return mpmath.fsum((x / 2) ** (2 * k) / mpmath.factorial(k) ** 2 for k in range(terms))


def reference_gains(p, mu, nu):
    """Gain formulas exactly as written (decaying y), in 40-digit arithmetic."""
    mp = mpmath
    Pd, ed, e0 = mp.mpf(p.P_d), mp.mpf(p.e_d), mp.mpf(p.e_0)
    ma, nb = mp.mpf(p.eta_a) * mu, mp.mpf(p.eta_b) * nu
    mup = ma + nb
    s = mp.sqrt(ma * nb) / 2
    y = (1 - Pd) * mp.exp(-mup / 4)
    I0 = lambda v: mp.besseli(0, v)
    Qx = 2 * y**2 * (1 + 2 * y**2 - 4 * y * I0(s) + I0(2 * s))
    EQx = e0 * Qx - 2 * (e0 - ed) * y**2 * (I0(2 * s) - 1)
    QC = 2 * (1 - Pd) ** 2 * mp.exp(-mup / 2) * (1 - (1 - Pd) * mp.exp(-ma / 2)) * (1 - (1 - Pd) * mp.exp(-nb / 2))
    QE = 2 * Pd * (1 - Pd) ** 2 * mp.exp(-mup / 2) * (I0(2 * s) - (1 - Pd) * mp.exp(-mup / 2))
    return (Qx, EQx), (QC + QE, ed * QC + (1 - ed) * QE)


class TestBessel:
    def test_zero(self):
        assert bessel_i0(0.0) == 1.0

    @pytest.mark.parametrize("x, expected", [(2.0, 2.2795853023360673), (0.1, 1.0025015629340956)])
    def test_frozen_values(self, x, expected):
        assert bessel_i0(x) == pytest.approx(expected, abs=1e-14)

    def test_matches_series(self):
        xs = np.linspace(0.0, 5.0, 100)
        ours = bessel_i0(xs)
        ref = np.array([float(series_i0(x)) for x in xs])
        assert np.max(np.abs(ours - ref)) <= 1e-12

    def test_large_argument_relative(self):
        assert bessel_i0(30.0) == pytest.approx(float(mpmath.besseli(0, 30)), rel=1e-14)

    @pytest.mark.parametrize("bad", [-1e-9, math.nan, math.inf, 31.0])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            bessel_i0(bad)


class TestParams:
    @pytest.mark.parametrize("kw", [dict(e_d=0.6), dict(P_d=1.0), dict(eta_a=0.0),
                                    dict(eta_b=1.5), dict(f=0.9), dict(e_0=0.3)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ChannelParams(**kw)

    @pytest.mark.parametrize("mu1, mu2", [(0.0, 0.3), (0.3, 0.3), (0.4, 0.3), (-0.1, 0.3)])
    def test_intensity_ordering(self, mu1, mu2):
        with pytest.raises(ValueError):
            IntensityTriple(mu1, mu2)

    def test_vacuum_fixed(self):
        with pytest.raises(ValueError):
            IntensityTriple(0.1, 0.3, mu0=0.01)

    def test_gain_point_invariant(self):
        with pytest.raises(ValueError):
            GainPoint(0.1, 0.2)


class TestGains:
    def test_x_double_vacuum_without_dark_counts(self):
        p = ChannelParams(P_d=0.0)
        assert gains_x(p, 0.0, 0.0).Q == 0.0

    def test_z_double_vacuum_without_dark_counts(self):
        p = ChannelParams(P_d=0.0)
        assert gains_z(p, 0.0, 0.0).Q == 0.0

    def test_z_dark_count_floor(self, ref_params):
        g = gains_z(ref_params, 0.0, 0.0)
        Pd = ref_params.P_d
        # Q_C and Q_E each contribute 2 P_d^2 (1 - P_d)^2 at double vacuum
        assert g.Q == pytest.approx(4 * Pd**2 * (1 - Pd) ** 2, rel=1e-12)
        assert g.Q < 2 * Pd

    def test_x_reference_point(self, ref_params):
        g = gains_x(ref_params, 0.36, 0.36)
        assert 0.0 < g.Q < 1.0
        assert ref_params.e_d < g.E < ref_params.e_0

    def test_z_reference_point(self, ref_params):
        g = gains_z(ref_params, 0.36, 0.36)
        assert g.Q > 0.0
        assert g.E == pytest.approx(ref_params.e_d, abs=1e-3)

    def test_z_error_tends_to_misalignment(self):
        g = gains_z(ChannelParams(P_d=0.0), 0.3, 0.2)
        assert g.E == pytest.approx(0.015, rel=1e-13)

    @pytest.mark.parametrize("mu, nu", [(0.0, 0.3), (0.45, 0.0)])
    def test_x_vacuum_error_is_background(self, ref_params, mu, nu):
        assert gains_x(ref_params, mu, nu).E == 0.5

    @pytest.mark.parametrize("mu, nu", [(0.0, 0.0), (1e-3, 0.0), (0.01, 0.05), (0.36, 0.36),
                                        (0.6, 0.01), (2.0, 3.0)])
    @pytest.mark.parametrize("eta", [0.1, 1.0])
    def test_against_high_precision_formulas(self, mu, nu, eta):
        p = ChannelParams(eta_a=eta, eta_b=eta * 0.7)
        (Qx, EQx), (Qz, EQz) = reference_gains(p, mu, nu)
        gx, gz = gains_x(p, mu, nu), gains_z(p, mu, nu)
        for ours, ref in ((gx.Q, Qx), (gx.EQ, EQx), (gz.Q, Qz), (gz.EQ, EQz)):
            assert ours == pytest.approx(float(ref), rel=1e-11, abs=1e-300)

    def test_unknown_basis(self, ref_params):
        with pytest.raises(ValueError):
            gains(ref_params, 0.1, 0.1, "y")

    def test_negative_intensity(self, ref_params):
        with pytest.raises(ValueError):
            gains_z(ref_params, -0.1, 0.1)

    def test_z_monotone_without_dark_counts(self):
        p = ChannelParams(P_d=0.0)
        grid = np.round(np.arange(0.0, 0.6001, 0.05), 2)
        Q = np.array([[gains_z(p, a, b).Q for b in grid] for a in grid])
        assert np.all(np.diff(Q, axis=0) >= 0.0)
        assert np.all(np.diff(Q, axis=1) >= 0.0)


@settings(max_examples=200, deadline=None)
@given(mu=st.floats(0.0, 5.0), nu=st.floats(0.0, 5.0),
       eta_a=st.floats(1e-4, 1.0), eta_b=st.floats(1e-4, 1.0),
       e_d=st.floats(0.0, 0.5), P_d=st.floats(0.0, 0.5))
def test_gain_point_bounds(mu, nu, eta_a, eta_b, e_d, P_d):
    p = ChannelParams(e_d=e_d, P_d=P_d, eta_a=eta_a, eta_b=eta_b)
    for basis in ("x", "z"):
        g = gains(p, mu, nu, basis)
        assert -1e-300 <= g.Q <= 1.0
        assert -1e-15 <= g.EQ <= g.Q + 1e-15


@settings(max_examples=100, deadline=None)
@given(mu=st.floats(0.0, 1.0), nu=st.floats(0.0, 1.0),
       eta_a=st.floats(1e-3, 1.0), eta_b=st.floats(1e-3, 1.0))
def test_party_exchange_symmetry(mu, nu, eta_a, eta_b):
    p = ChannelParams(eta_a=eta_a, eta_b=eta_b)
    for basis in ("x", "z"):
        g1 = gains(p, mu, nu, basis)
        g2 = gains(p.swapped(), nu, mu, basis)
        assert g1.Q == pytest.approx(g2.Q, rel=1e-14, abs=0)
        assert g1.EQ == pytest.approx(g2.EQ, rel=1e-14, abs=0)


class TestGainTable:
    def test_entries_match_single_calls(self, ref_params):
        a = IntensityTriple(0.05, 0.36)
        t = build_gain_table(ref_params, a, a)
        for (i, j, basis), gp in t.items():
            direct = gains(ref_params, a[i], a[j], basis)
            assert gp.Q == pytest.approx(direct.Q, rel=1e-15)
            assert gp.EQ == pytest.approx(direct.EQ, rel=1e-15)

    def test_all_entries_valid(self, ref_params):
        t = build_gain_table(ref_params, IntensityTriple(0.05, 0.36), IntensityTriple(0.1, 0.5))
        points = list(t.items())
        assert len(points) == 18
        for _, gp in points:
            assert 0.0 <= gp.EQ <= gp.Q <= 1.0

    def test_swap_symmetry(self):
        p = ChannelParams(eta_a=0.2, eta_b=0.05)
        a, b = IntensityTriple(0.05, 0.36), IntensityTriple(0.1, 0.5)
        t = build_gain_table(p, a, b)
        ts = build_gain_table(p.swapped(), b, a)
        for basis in ("x", "z"):
            np.testing.assert_allclose(t.Q[basis], ts.Q[basis].T, rtol=1e-14)
            np.testing.assert_allclose(t.EQ[basis], ts.EQ[basis].T, rtol=1e-14)

    def test_rejects_bad_shape(self):
        a = IntensityTriple(0.1, 0.2)
        with pytest.raises(ValueError):
            from mdiqkd import GainTable
            GainTable(a, a, {"x": np.zeros((2, 2)), "z": np.zeros((3, 3))},
                      {"x": np.zeros((2, 2)), "z": np.zeros((3, 3))})
