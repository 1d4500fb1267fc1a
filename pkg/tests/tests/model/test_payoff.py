import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from taxstop import DomainError
from taxstop import lipschitz_bound
from taxstop import payoff_g
from taxstop import payoff_g_dx
from taxstop import ProblemSpec
from taxstop import running_payoff_f
from taxstop import threshold_f

alphas = st.floats(min_value=0.0, max_value=0.95)
rates = st.floats(min_value=0.0, max_value=0.1)
drifts = st.floats(min_value=-0.1, max_value=0.2)


def _spec(mu=0.026, r=0.03, alpha=0.3, horizon_t=3.0):
    return ProblemSpec.create(
        mu=mu, sigma=0.25, r=r, alpha=alpha, p0=100.0, horizon_t=horizon_t, x0=100.0
    )


class TestPayoff:
    def test_at_horizon(self, ref_spec):
        """At T the payoff is the after-tax sale proceeds."""
        assert payoff_g(3.0, 50.0, ref_spec) == pytest.approx(65.0, rel=1e-14)

    def test_reference_value(self, ref_spec):
        assert payoff_g(0.0, 180.0, ref_spec) == pytest.approx(
            156 * math.exp(0.063), rel=1e-12
        )
        assert payoff_g(0.0, 180.0, ref_spec) == pytest.approx(166.144, abs=5e-4)

    def test_no_tax(self):
        spec = _spec(alpha=0.0)
        assert payoff_g(1.0, 80.0, spec) == pytest.approx(80 * math.exp(0.03 * 2))

    def test_zero_price(self, ref_spec):
        """x = 0 leaves only the tax credit."""
        assert payoff_g(0.0, 0.0, ref_spec) == pytest.approx(30 * math.exp(0.063))

    def test_vectorised(self, ref_spec):
        x = np.linspace(0, 300, 7)
        g = payoff_g(1.0, x, ref_spec)
        assert g.shape == x.shape
        assert np.all(np.diff(g) > 0)

    @pytest.mark.parametrize('t, x', [(-0.1, 100.0), (3.1, 100.0), (1.0, -1.0)])
    def test_domain(self, ref_spec, t, x):
        with pytest.raises(DomainError):
            payoff_g(t, x, ref_spec)
        with pytest.raises(DomainError):
            running_payoff_f(t, x, ref_spec)

    @given(alpha=alphas, r=rates, t=st.floats(0.0, 3.0), x=st.floats(0.0, 1e4))
    def test_lower_bound(self, alpha, r, t, x):
        """G(t, x) >= (1 - alpha) x + alpha p0, with equality at T."""
        spec = _spec(r=r, alpha=alpha)
        floor = (1 - alpha) * x + alpha * 100.0
        assert payoff_g(t, x, spec) >= floor * (1 - 1e-15)
        assert payoff_g(3.0, x, spec) == pytest.approx(floor, rel=1e-14)

    @given(alpha=alphas, r=rates, t=st.floats(0.0, 3.0))
    def test_slope(self, alpha, r, t):
        """The closed-form slope matches a difference quotient."""
        spec = _spec(r=r, alpha=alpha)
        slope = payoff_g(t, 150.0, spec) - payoff_g(t, 50.0, spec)
        assert payoff_g_dx(t, spec) == pytest.approx(slope / 100.0, rel=1e-10)

    def test_slope_nonincreasing_in_time(self, ref_spec):
        t = np.linspace(0, 3, 50)
        assert np.all(np.diff(payoff_g_dx(t, ref_spec)) <= 0)


class TestRunningPayoff:
    def test_reference_value(self):
        spec = _spec()
        assert running_payoff_f(3.0, 360.0, spec) == pytest.approx(0.63, rel=1e-9)

    def test_root(self, ref_spec):
        f = threshold_f(ref_spec)
        assert running_payoff_f(1.2, f, ref_spec) == pytest.approx(0.0, abs=1e-12)

    def test_break_even_drift(self):
        """With mu = (1 - alpha) r only the tax drag remains."""
        spec = _spec(mu=0.021)
        expected = -math.exp(0.021 * 2) * 0.7 * 0.03 * 0.3 * 100
        assert running_payoff_f(1.0, 500.0, spec) == pytest.approx(expected, rel=1e-9)

    def test_sign_around_threshold(self, ref_spec):
        """F < 0 below f and F > 0 above it at every time."""
        f = threshold_f(ref_spec)
        t = np.linspace(0, 3, 101)[:, None]
        low_prices = np.linspace(0, f * 0.999, 40)[None, :]
        high_prices = np.linspace(f * 1.001, 3 * f, 40)[None, :]
        below = running_payoff_f(t, low_prices, ref_spec)
        above = running_payoff_f(t, high_prices, ref_spec)
        assert np.all(below < 0)
        assert np.all(above > 0)

    def test_time_monotonicity(self, ref_spec):
        """F increases in t below f and decreases above it."""
        t = np.linspace(0, 3, 101)
        lo = running_payoff_f(t, 120.0, ref_spec)
        hi = running_payoff_f(t, 240.0, ref_spec)
        assert np.all(np.diff(lo) > 0)
        assert np.all(np.diff(hi) < 0)

    def test_increasing_in_price(self, ref_spec):
        x = np.linspace(0, 400, 100)
        assert np.all(np.diff(running_payoff_f(0.5, x, ref_spec)) > 0)


class TestThreshold:
    def test_reference_value(self, ref_spec):
        assert threshold_f(ref_spec) == pytest.approx(180.0, rel=1e-12)

    def test_no_tax(self, hold_spec):
        assert threshold_f(hold_spec) == 0.0

    def test_sell_regime(self, sell_spec):
        assert threshold_f(sell_spec) == math.inf

    @given(mu=drifts, r=rates, alpha=alphas)
    def test_total(self, mu, r, alpha):
        """f is defined everywhere and nonnegative."""
        f = threshold_f(_spec(mu=mu, r=r, alpha=alpha))
        assert f >= 0
        if mu <= (1 - alpha) * r:
            assert f == math.inf


def test_lipschitz_bound(ref_spec):
    assert lipschitz_bound(ref_spec) == pytest.approx(3 * 0.7 * math.exp(0.056 * 3))
