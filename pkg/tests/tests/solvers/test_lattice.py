import math

import numpy as np
import pytest
from taxstop import DomainError
from taxstop import LatticeConfig
from taxstop import lattice_refinement
from taxstop import payoff_g
from taxstop import ProblemSpec
from taxstop import solve_lattice
from taxstop import threshold_f
from taxstop.errors import ProbabilityRangeError

# p > 1 unless dt < (sigma / mu)^2
STEEP = ProblemSpec.create(
    mu=0.2, sigma=0.01, r=0.03, alpha=0.3, p0=100.0, horizon_t=3.0, x0=100.0
)


class TestValue:
    def test_hold_to_maturity(self, hold_spec):
        """The hold value is the expected terminal price."""
        solution = solve_lattice(hold_spec, LatticeConfig(n_steps=500))
        assert solution.value_root == pytest.approx(100 * math.exp(0.078), rel=1e-9)
        assert solution.value_root == pytest.approx(108.112, rel=1e-3)

    def test_sell_immediately(self, sell_spec):
        solution = solve_lattice(sell_spec, LatticeConfig(n_steps=500))
        assert solution.value_root == pytest.approx(
            payoff_g(0.0, 100.0, sell_spec), rel=1e-12
        )

    def test_dominates_payoff(self, ref_lattice, ref_spec):
        assert ref_lattice.value_root > payoff_g(0.0, 180.0, ref_spec)

    def test_increases_with_volatility(self, ref_spec):
        values = [
            solve_lattice(ref_spec.with_sigma(s), LatticeConfig(1000)).value_root
            for s in (0.1, 0.25, 0.4)
        ]
        assert np.all(np.diff(values) > 0)

    def test_refinement_converges(self, ref_spec):
        study = lattice_refinement(ref_spec, [2000, 250, 1000, 500], workers=2)
        np.testing.assert_array_equal(study.steps, [250, 500, 1000, 2000])
        assert np.all(np.diff(study.differences) < 0)


class TestInputs:
    def test_zero_volatility(self, ref_spec):
        with pytest.raises(DomainError) as exc_info:
            solve_lattice(ref_spec.with_sigma(0.0))
        assert exc_info.value.field == 'market.sigma'

    def test_probability_out_of_range(self):
        with pytest.raises(ProbabilityRangeError) as exc_info:
            solve_lattice(STEEP, LatticeConfig(n_steps=10))
        error = exc_info.value
        assert error.p > 1
        assert error.n_steps == 10
        assert error.min_steps in (1200, 1201)
        solve_lattice(STEEP, LatticeConfig(n_steps=error.min_steps))
        with pytest.raises(ProbabilityRangeError):
            solve_lattice(STEEP, LatticeConfig(n_steps=error.min_steps - 1))

    @pytest.mark.parametrize('n_steps', [0, -5, 2.5])
    def test_step_count(self, n_steps):
        with pytest.raises(DomainError):
            LatticeConfig(n_steps=n_steps)


class TestBoundary:
    def test_hold_to_maturity(self, hold_spec):
        boundary = solve_lattice(hold_spec, LatticeConfig(n_steps=200)).boundary
        assert np.all(boundary.levels == 0)

    def test_sell_immediately(self, sell_spec):
        boundary = solve_lattice(sell_spec, LatticeConfig(n_steps=200)).boundary
        assert np.all(np.isinf(boundary.levels))

    def test_reference_problem(self, ref_lattice, ref_spec):
        boundary = ref_lattice.boundary
        assert boundary.source == 'lattice'
        assert boundary.monotone
        assert len(boundary.times) == 2000
        f = threshold_f(ref_spec)
        assert boundary.final_level() == pytest.approx(f, rel=0.02)
        assert 100 < boundary.level_at(1.5) < f

    def test_stopping_set_grows_in_time(self, ref_spec):
        """Node j sells at step k+1 (price x / u) once it sells at step k, and
        the same price sells again two steps later."""
        flags = solve_lattice(ref_spec, LatticeConfig(n_steps=1000)).exercise_flags
        for k in range(len(flags) - 1):
            assert np.all(flags[k + 1][:-1][flags[k]])
        for k in range(len(flags) - 2):
            assert np.all(flags[k + 2][1:-1][flags[k]])

    def test_below_threshold_at_every_step(self, ref_lattice, ref_spec):
        levels = ref_lattice.boundary.levels
        assert np.all(levels <= threshold_f(ref_spec) * ref_lattice.up**2)

    def test_node_prices(self, ref_lattice):
        prices = ref_lattice.node_prices(2)
        np.testing.assert_allclose(
            prices, 180 * ref_lattice.up ** np.array([-2.0, 0.0, 2.0]), rtol=1e-12
        )
