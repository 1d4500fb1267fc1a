"""
pytest fixtures
"""
from pathlib import Path

import pytest
from taxstop import LatticeConfig
from taxstop import ProblemSpec
from taxstop import solve
from taxstop import solve_lattice

HERE = Path(__file__).parent
CONFIGS = HERE / 'fixtures' / 'configs'

# reference problem: a large unrealised gain, mu slightly below r
REFERENCE = ProblemSpec.create(
    mu=0.026, sigma=0.25, r=0.03, alpha=0.3, p0=100.0, horizon_t=3.0, x0=180.0
)
# mu <= (1 - alpha) r
SELL = ProblemSpec.create(
    mu=0.02, sigma=0.25, r=0.03, alpha=0.3, p0=100.0, horizon_t=3.0, x0=100.0
)
# alpha = 0 and mu > r
HOLD = ProblemSpec.create(
    mu=0.026, sigma=0.25, r=0.02, alpha=0.0, p0=100.0, horizon_t=3.0, x0=100.0
)


@pytest.fixture
def configs():
    return CONFIGS


@pytest.fixture
def ref_spec():
    return REFERENCE


@pytest.fixture
def sell_spec():
    return SELL


@pytest.fixture
def hold_spec():
    return HOLD


@pytest.fixture(scope='session')
def ref_solution():
    """Reference problem solved on the default grid."""
    return solve(REFERENCE)


@pytest.fixture(scope='session')
def ref_lattice():
    return solve_lattice(REFERENCE, LatticeConfig(n_steps=2000))
