import math

import numpy as np
import pytest
from scipy.integrate import simpson

from nearwave.aperture import GaussianProfile, SingleSlitProfile
from nearwave.nearfield import (
    cw_fraction_profile,
    field_at,
    field_dx_at,
    probability_current_x,
)
from nearwave.quadrature import adaptive_quad


def cosine_transform_oracle(profile, x, k_max, n=2**22 + 1):
    """Uniform-grid cosine-transform of the amplitude: 2*int_0^inf F cos(kx) dk.

    Composite Simpson on a dense grid, independent of the adaptive panel
    machinery used by the implementation.
    """
    k = np.linspace(0.0, k_max, n)
    return 2.0 * simpson(profile.amplitude(k) * np.cos(k * x), x=k)


class TestFieldAtZ0:
    def test_gaussian_against_closed_form(self):
        w = 1.3
        profile = GaussianProfile(w=w)
        for x in (0.0, 0.5, 2.0):
            got = field_at(x, 0.0, profile).psi_total
            want = 2.0 * math.sqrt(math.pi) / w * math.exp(-((x / w) ** 2))
            assert got.real == pytest.approx(want, rel=1e-10)
            assert abs(got.imag) < 1e-12

    def test_gaussian_against_grid_oracle(self):
        profile = GaussianProfile(w=1.3)
        for x in (0.0, 0.8):
            got = field_at(x, 0.0, profile).psi_total.real
            want = cosine_transform_oracle(profile, x, k_max=16.0, n=2**16 + 1)
            assert got == pytest.approx(want, rel=1e-8)

    def test_slit_against_grid_oracle(self):
        profile = SingleSlitProfile(a=1.0)
        for x in (0.0, 0.2, 0.35):
            got = field_at(x, 0.0, profile).psi_total.real
            want = cosine_transform_oracle(profile, x, k_max=1e5)
            assert got == pytest.approx(want, rel=1e-8)

    def test_slit_reconstructs_aperture_mode(self):
        # at the screen the superposition reproduces the slit mode itself:
        # 2*sqrt(pi/a)*cos(pi x/a) inside, zero outside
        a = 1.0
        profile = SingleSlitProfile(a=a)
        for x in (0.0, 0.2, 0.4):
            want = 2.0 * math.sqrt(math.pi / a) * math.cos(math.pi * x / a)
            got = field_at(x, 0.0, profile).psi_total
            assert got.real == pytest.approx(want, rel=1e-9)
        outside = field_at(1.7, 0.0, profile).psi_total
        assert abs(outside) < 1e-9

    def test_even_in_x(self):
        profile = SingleSlitProfile(a=1.0)
        for x, z in ((0.7, 0.0), (1.3, 0.6)):
            plus = field_at(x, z, profile)
            minus = field_at(-x, z, profile)
            assert plus.psi_rw == minus.psi_rw
            assert plus.psi_cw == minus.psi_cw

    def test_negative_z_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            field_at(0.0, -0.1, SingleSlitProfile(a=1.0))


class TestFieldStructure:
    def test_linearity_in_amplitude(self):
        class Doubled(SingleSlitProfile):
            def amplitude(self, kx):
                return 2.0 * super().amplitude(kx)

            def field_tail(self, k_hi, x, z):
                return 2.0 * super().field_tail(k_hi, x, z)

            def field_tail_dx(self, k_hi, x, z):
                return 2.0 * super().field_tail_dx(k_hi, x, z)

        base = field_at(0.7, 0.3, SingleSlitProfile(a=1.0)).psi_total
        twice = field_at(0.7, 0.3, Doubled(a=1.0)).psi_total
        assert twice == pytest.approx(2.0 * base, rel=1e-12)

    def test_cw_suppressed_with_height(self):
        profile = SingleSlitProfile(a=1.0)
        low = field_at(0.0, 0.1, profile)
        high = field_at(0.0, 5.0, profile)
        frac_low = abs(low.psi_cw) / abs(low.psi_total)
        frac_high = abs(high.psi_cw) / abs(high.psi_total)
        assert frac_high < frac_low

    def test_cw_envelope_bound(self):
        # |psi_cw| <= 2 * int_1^inf |F| e^{-chi z} dk
        profile = SingleSlitProfile(a=1.0)
        for x, z in ((0.0, 0.5), (1.5, 0.5), (0.3, 2.0)):
            sample = field_at(x, z, profile)

            def envelope(k):
                chi = np.sqrt((k - 1.0) * (k + 1.0))
                return np.abs(profile.amplitude(k)) * np.exp(-z * chi)

            # |cos| corners in |F| limit the attainable tolerance; a coarse
            # absolute target is ample for an upper bound
            bound = 2.0 * adaptive_quad(envelope, 1.0, 400.0, abs_tol=1e-9, rel_tol=1e-8).value
            assert abs(sample.psi_cw) <= bound * (1.0 + 1e-9)

    def test_far_field_cw_to_rw_ratio(self):
        # the evanescent set dies off only algebraically (like z^-3/2
        # relative to the running part) because decay constants extend
        # down to zero at the threshold; document the measured scaling
        profile = SingleSlitProfile(a=1.0)
        ratios = {}
        for z in (10.0, 50.0, 200.0):
            s = field_at(0.0, z, profile)
            ratios[z] = abs(s.psi_cw) / abs(s.psi_rw)
        assert ratios[50.0] < 3e-3
        assert ratios[50.0] / ratios[200.0] == pytest.approx(4.0**1.5, rel=0.15)
        assert ratios[10.0] / ratios[50.0] == pytest.approx(5.0**1.5, rel=0.15)

    def test_cw_fraction_profile(self):
        profile = SingleSlitProfile(a=1.0)
        scan = cw_fraction_profile(0.0, (0.0, 0.3, 3.0), profile)
        zs = [z for z, _ in scan]
        fracs = [f for _, f in scan]
        assert zs == [0.0, 0.3, 3.0]
        # entry at z = 0 equals the ratio from two direct field calls
        direct = field_at(0.0, 0.0, profile)
        assert fracs[0] == pytest.approx(
            abs(direct.psi_cw) ** 2 / abs(direct.psi_total) ** 2, rel=1e-12
        )
        assert fracs[2] < fracs[1]

    def test_cw_fraction_grid_validation(self):
        profile = SingleSlitProfile(a=1.0)
        with pytest.raises(ValueError, match="strictly increasing"):
            cw_fraction_profile(0.0, (0.5, 0.5), profile)
        with pytest.raises(ValueError, match="non-negative"):
            cw_fraction_profile(0.0, (-1.0, 0.5), profile)


class TestSlitAnalyticTails:
    def test_tail_difference_matches_direct_integration(self):
        # tail(K) - tail(K3) equals the directly integrated window [K, K3],
        # with no truncation ambiguity on the oracle side; this pins the
        # exponential-integral continuation used beyond a*k = 1e4
        profile = SingleSlitProfile(a=1.0)
        k_lo, k_hi = 1e4, 3e5
        k = np.linspace(k_lo, k_hi, 2**22 + 1)
        chi = np.sqrt(k * k - 1.0)
        for x, z in ((0.0, 0.0), (0.5, 0.0), (2.0, 0.0), (0.2, 1e-3)):
            f = profile.amplitude(k) * np.exp(-z * chi) * np.cos(k * x)
            brute = 2.0 * simpson(f, x=k)
            ana = profile.field_tail(k_lo, x, z) - profile.field_tail(k_hi, x, z)
            assert ana == pytest.approx(brute, abs=5e-14, rel=1e-7)

    def test_dx_tail_difference_matches_direct_integration(self):
        profile = SingleSlitProfile(a=1.0)
        k_lo, k_hi = 1e4, 3e5
        k = np.linspace(k_lo, k_hi, 2**22 + 1)
        chi = np.sqrt(k * k - 1.0)
        for x, z in ((0.3, 0.0), (0.5, 0.0), (2.0, 0.0)):
            f = profile.amplitude(k) * np.exp(-z * chi) * (-k * np.sin(k * x))
            brute = 2.0 * simpson(f, x=k)
            ana = profile.field_tail_dx(k_lo, x, z) - profile.field_tail_dx(k_hi, x, z)
            assert ana == pytest.approx(brute, abs=5e-10, rel=1e-5)


class TestProbabilityCurrent:
    def test_zero_on_axis(self):
        assert probability_current_x(0.0, 0.5, SingleSlitProfile(a=1.0)) == 0.0

    def test_odd_in_x(self):
        profile = SingleSlitProfile(a=1.0)
        jp = probability_current_x(1.5, 0.5, profile)
        jm = probability_current_x(-1.5, 0.5, profile)
        assert jm == pytest.approx(-jp, rel=1e-10)
        assert jp != 0.0

    def test_against_finite_difference(self):
        profile = SingleSlitProfile(a=1.0)
        x, z, h = 2.0, 0.5, 1e-4
        psi = field_at(x, z, profile).psi_total
        dnum = (field_at(x + h, z, profile).psi_total - field_at(x - h, z, profile).psi_total) / (2 * h)
        want = (psi.conjugate() * dnum).imag
        got = probability_current_x(x, z, profile)
        assert got == pytest.approx(want, rel=1e-5)
        assert got != 0.0

    def test_derivative_field_against_finite_difference(self):
        profile = SingleSlitProfile(a=1.0)
        x, z, h = 1.2, 0.8, 1e-4
        dana = field_dx_at(x, z, profile).psi_total
        dnum = (field_at(x + h, z, profile).psi_total - field_at(x - h, z, profile).psi_total) / (2 * h)
        assert dana == pytest.approx(dnum, rel=1e-6)

    def test_gaussian_profile_current(self):
        # works for profiles without analytic tails too
        profile = GaussianProfile(w=1.0)
        j = probability_current_x(1.0, 0.5, profile)
        assert math.isfinite(j)
        assert probability_current_x(0.0, 0.5, profile) == 0.0
