import pytest
from taxstop import DomainError
from taxstop import dynkin_check
from taxstop import ProblemSpec
from taxstop import simulate_paths


def test_start_is_exact(ref_spec):
    batch = simulate_paths(ref_spec, 100, 30, seed=0)
    residual = dynkin_check(ref_spec, 0.0, batch)
    assert residual.mean == 0.0
    assert residual.std_error == 0.0
    assert residual.studentized == 0.0


def test_deterministic_stock(ref_spec):
    """Without noise only the quadrature error is left."""
    spec = ref_spec.with_sigma(0.0)
    batch = simulate_paths(spec, 4, 300, seed=0)
    residual = dynkin_check(spec, 3.0, batch)
    assert residual.std_error == 0.0
    assert abs(residual.relative) < 1e-6


@pytest.mark.parametrize('x0', [100.0, 180.0])
def test_martingale_residual(x0):
    spec = ProblemSpec.create(
        mu=0.026, sigma=0.25, r=0.03, alpha=0.3, p0=100.0, horizon_t=3.0, x0=x0
    )
    batch = simulate_paths(spec, 100_000, 60, seed=31, workers=4)
    residual = dynkin_check(spec, 1.5, batch)
    assert abs(residual.studentized) < 3
    assert residual.to_dict()['std_error'] > 0


def test_off_grid_time(ref_spec):
    batch = simulate_paths(ref_spec, 10, 10, seed=0)
    with pytest.raises(DomainError):
        dynkin_check(ref_spec, 0.1, batch)
