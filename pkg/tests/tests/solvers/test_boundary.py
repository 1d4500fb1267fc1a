import logging
import math

import numpy as np
import pytest
from taxstop import Boundary
from taxstop import Regime
from taxstop.solvers import sentinel_level

TIMES = np.array([0.0, 0.5, 1.0, 1.5])


class TestBuild:
    def test_monotone_curve(self):
        boundary = Boundary.build(
            TIMES, [100.0, 110.0, 120.0, 130.0], Regime.FREE_BOUNDARY
        )
        assert boundary.monotone
        assert boundary.max_violation == 0.0

    def test_violation_within_tolerance(self, caplog):
        with caplog.at_level(logging.WARNING):
            boundary = Boundary.build(
                TIMES, [100.0, 110.0, 109.5, 130.0], Regime.FREE_BOUNDARY, 1.0
            )
        assert boundary.monotone
        assert boundary.max_violation == pytest.approx(0.5)
        assert not caplog.records

    def test_violation_is_logged_not_repaired(self, caplog):
        levels = [100.0, 110.0, 105.0, 130.0]
        with caplog.at_level(logging.WARNING):
            boundary = Boundary.build(
                TIMES, levels, Regime.FREE_BOUNDARY, 1.0, source='pde'
            )
        assert not boundary.monotone
        assert boundary.max_violation == pytest.approx(5.0)
        np.testing.assert_array_equal(boundary.levels, levels)
        assert 'pde' in caplog.text

    def test_infinite_levels_are_ignored(self):
        boundary = Boundary.build(
            TIMES, [100.0, math.inf, 120.0, math.inf], Regime.FREE_BOUNDARY
        )
        assert boundary.monotone

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Boundary.build(TIMES, [1.0, 2.0], Regime.FREE_BOUNDARY)


class TestLookup:
    @pytest.fixture
    def boundary(self):
        return Boundary.build(TIMES, [100.0, 110.0, 120.0, 130.0], Regime.FREE_BOUNDARY)

    def test_level_at(self, boundary):
        assert boundary.level_at(0.0) == 100.0
        assert boundary.level_at(0.7) == 110.0
        assert boundary.level_at(10.0) == 130.0
        with pytest.raises(ValueError):
            boundary.level_at(-0.1)

    def test_resample(self, boundary):
        np.testing.assert_array_equal(
            boundary.resample([-1.0, 0.25, 1.0, 2.9]), [100.0, 100.0, 120.0, 130.0]
        )

    def test_above(self, boundary):
        assert boundary.above(99.0)
        assert not boundary.above(100.0)
        assert boundary.final_level() == 130.0

    def test_to_dict(self, boundary):
        doc = boundary.to_dict(p0=105.0)
        assert doc['regime'] == 'free_boundary'
        assert doc['monotone']
        assert doc['above_purchase_price'] is False
        assert 'above_purchase_price' not in boundary.to_dict()


class TestSentinels:
    def test_levels(self):
        assert sentinel_level(Regime.SELL_IMMEDIATELY) == math.inf
        assert sentinel_level(Regime.HOLD_TO_MATURITY) == 0.0
        assert sentinel_level(Regime.FREE_BOUNDARY) is None

    def test_constant(self):
        boundary = Boundary.constant(TIMES, math.inf, Regime.SELL_IMMEDIATELY)
        assert boundary.source == 'analytic'
        assert np.all(np.isinf(boundary.levels))
        assert boundary.monotone
