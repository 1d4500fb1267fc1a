import numpy as np
import pytest
from taxstop import Boundary
from taxstop import DomainError
from taxstop import GridConfig
from taxstop import Regime
from taxstop import sigma_sweep
from taxstop import SolveOptions
from taxstop.analysis import SweepPoint
from taxstop.analysis import TimingOptionReport
from taxstop.analysis.sweep import judge

OPTIONS = SolveOptions(grid=GridConfig(n_x=401, n_t=300))


def test_single_volatility(ref_spec):
    report = sigma_sweep(ref_spec, [0.25], OPTIONS)
    assert report.complete
    assert len(report.points) == 1
    verdicts = report.verdicts
    assert verdicts.value_nondecreasing and verdicts.boundary_nonincreasing
    assert verdicts.worst_value_drop == 0.0


def test_volatility_helps(ref_spec):
    """Volatility raises the value and lowers the boundary."""
    report = sigma_sweep(ref_spec, [0.4, 0.1, 0.25], OPTIONS, workers=3)
    assert [p.sigma for p in report.points] == [0.1, 0.25, 0.4]
    assert report.complete
    verdicts = report.verdicts
    assert verdicts.value_strictly_increasing
    assert verdicts.option_increasing
    assert verdicts.boundary_nonincreasing
    for point in report.points:
        np.testing.assert_array_equal(point.boundary.times, report.times)


def test_against_deterministic_stock(ref_spec):
    report = sigma_sweep(ref_spec, [0.0, 0.25], OPTIONS)
    zero, vol = report.points
    assert zero.method == 'sigma0'
    assert vol.method == 'pde'
    assert vol.v0 > zero.v0
    assert report.verdicts.boundary_nonincreasing


def test_failed_points_are_reported(ref_spec):
    grid = GridConfig(n_x=2001, n_t=1)
    report = sigma_sweep(ref_spec, [0.0, 0.25], SolveOptions(grid=grid))
    assert not report.complete
    assert report.points[0].ok
    assert 'diagonally dominant' in report.points[1].error
    assert report.to_dict()['points'][1]['error'] == report.points[1].error


@pytest.mark.parametrize('sigmas', [[], [-0.1, 0.2]])
def test_rejects(ref_spec, sigmas):
    with pytest.raises(DomainError) as exc_info:
        sigma_sweep(ref_spec, sigmas, OPTIONS)
    assert exc_info.value.field == 'sweep.sigma'


def _point(sigma, v0, levels):
    boundary = Boundary.build(
        [0.0, 1.0], levels, Regime.FREE_BOUNDARY, tolerance=0.5
    )
    timing = TimingOptionReport(v0=v0, benchmark=100.0, option_value=v0 - 100.0)
    return SweepPoint(sigma=sigma, v0=v0, boundary=boundary, timing=timing)


def test_judge_flags_violations():
    points = [
        _point(0.1, 110.0, [150.0, 160.0]),
        _point(0.2, 109.0, [152.0, 159.0]),
        SweepPoint(sigma=0.3, error='failed'),
    ]
    verdicts = judge(points)
    assert not verdicts.value_nondecreasing
    assert not verdicts.option_increasing
    assert verdicts.worst_value_drop == pytest.approx(1.0)
    assert verdicts.worst_boundary_rise == pytest.approx(1.5)
    assert not verdicts.boundary_nonincreasing
