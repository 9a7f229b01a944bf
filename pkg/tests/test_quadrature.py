import math

import numpy as np
import pytest

from nearwave.errors import QuadratureError
from nearwave.quadrature import adaptive_quad, oscillation_breakpoints


class TestAdaptiveQuad:
    def test_polynomial_exact(self):
        res = adaptive_quad(lambda x: 3.0 * x * x, 0.0, 2.0)
        assert res.value == pytest.approx(8.0, rel=1e-14)
        assert res.error < 1e-12

    def test_reversed_limits_flip_sign(self):
        fwd = adaptive_quad(np.exp, 0.0, 1.0).value
        rev = adaptive_quad(np.exp, 1.0, 0.0).value
        assert rev == pytest.approx(-fwd, rel=1e-14)
        assert fwd == pytest.approx(math.e - 1.0, rel=1e-13)

    def test_empty_interval(self):
        res = adaptive_quad(np.exp, 1.0, 1.0)
        assert res.value == 0.0 and res.error == 0.0

    def test_complex_integrand(self):
        # int_0^pi e^{i t} dt = 2i
        res = adaptive_quad(lambda t: np.exp(1j * t), 0.0, math.pi)
        assert res.value == pytest.approx(2j, rel=1e-13)

    def test_oscillatory_with_breakpoints(self):
        # int_0^20pi cos(40 t) dt = 0, needs seeding to converge quickly
        omega = 40.0
        hi = 20.0 * math.pi
        res = adaptive_quad(
            lambda t: np.cos(omega * t),
            0.0,
            hi,
            breakpoints=oscillation_breakpoints(0.0, hi, omega),
        )
        assert abs(res.value) < 1e-11

    def test_narrow_spike_found_by_refinement(self):
        # gaussian of width 1e-3 centered mid-interval, no seeding
        res = adaptive_quad(
            lambda x: np.exp(-0.5 * ((x - 0.37) / 1e-3) ** 2),
            0.0,
            1.0,
            abs_tol=1e-300,
            rel_tol=1e-11,
        )
        want = math.sqrt(2.0 * math.pi) * 1e-3
        assert res.value == pytest.approx(want, rel=1e-10, abs=0)

    def test_failure_reports_value_and_error(self):
        # |x - 1/3| has a kink and the budget below is unreachable fast
        with pytest.raises(QuadratureError) as err:
            adaptive_quad(
                lambda x: np.abs(x - 1.0 / 3.0) ** 0.5,
                0.0,
                1.0,
                abs_tol=1e-300,
                rel_tol=1e-300,
                max_rounds=6,
            )
        assert err.value.achieved is not None and err.value.achieved > 0
        # the partial value is still a sane estimate
        assert err.value.value == pytest.approx(0.455, abs=0.05)

    def test_integrable_decay_on_long_interval(self):
        res = adaptive_quad(lambda x: np.exp(-x), 0.0, 200.0)
        assert res.value == pytest.approx(1.0, rel=1e-12)


class TestOscillationBreakpoints:
    def test_spacing(self):
        pts = oscillation_breakpoints(0.0, 10.0, 2.0)
        assert pts.size > 0
        assert np.allclose(np.diff(pts), math.pi / 2.0)

    def test_zero_rate_gives_nothing(self):
        assert oscillation_breakpoints(0.0, 10.0, 0.0).size == 0

    def test_runaway_rate_raises(self):
        with pytest.raises(QuadratureError, match="panels"):
            oscillation_breakpoints(0.0, 1e9, 1e6)
