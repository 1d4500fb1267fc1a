"""
Regime-aware entry point: pick the cheapest method that is exact or
converged for a given problem.
"""
import logging
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Optional

import numpy as np

from ..model.payoff import payoff_g
from ..model.spec import classify_regime
from ..model.spec import ProblemSpec
from ..model.spec import Regime
from ..oracle.sigma0 import Sigma0Solution
from ..oracle.sigma0 import sigma0_solution
from ..solvers.boundary import Boundary
from ..solvers.boundary import sentinel_level
from ..solvers.pde import DEFAULT_EPS_STOP
from ..solvers.pde import extract_boundary
from ..solvers.pde import GridConfig
from ..solvers.pde import SIGMA_MIN_PDE
from ..solvers.pde import solve_pde
from ..solvers.pde import ValueSurface

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveOptions:
    grid: GridConfig = field(default_factory=GridConfig)
    eps_stop: float = DEFAULT_EPS_STOP
    """Relative premium below which a grid node counts as selling."""


@dataclass(frozen=True)
class Solution:
    """Result of :py:func:`solve`."""

    spec: ProblemSpec
    regime: Regime
    method: str
    """'analytic', 'pde' or 'sigma0'."""
    v0: float
    """V(0, x0)."""
    boundary: Boundary
    surface: Optional[ValueSurface] = None
    """The grid solution; None when the sigma = 0 closed form was used."""
    oracle: Optional[Sigma0Solution] = None

    def value_at(self, t: float, x: float) -> float:
        if self.surface is not None:
            return self.surface.value_at(t, x)
        return float(self.oracle.value_at(t, x))


def _hold_value(spec: ProblemSpec) -> float:
    """Closed-form V(0, x0) when the stock is always held: G(T, E[X_T])."""
    grown = spec.x0 * math.exp(spec.market.mu * spec.horizon_t)
    return float(payoff_g(spec.horizon_t, grown, spec))


def solve(spec: ProblemSpec, options: SolveOptions = SolveOptions()) -> Solution:
    """Solve a problem with the method its regime calls for.

    - sell immediately: V = G, boundary +inf;
    - hold to maturity: V(t, x) = G(T, x e^{mu (T - t)}), boundary 0;
    - free boundary, sigma >= :py:data:`SIGMA_MIN_PDE`: finite differences;
    - free boundary, smaller sigma: the sigma = 0 closed form.

    The degenerate regimes still come with a value surface on the requested
    grid, filled in from the closed form.

    Raises:
        SolverError: The finite-difference solver failed.
    """
    regime = classify_regime(spec)
    grid = options.grid
    times = np.linspace(0.0, spec.horizon_t, grid.n_t + 1)[:-1]

    if regime is not Regime.FREE_BOUNDARY:
        surface = solve_pde(spec, grid)
        boundary = Boundary.constant(times, sentinel_level(regime), regime)
        if regime is Regime.SELL_IMMEDIATELY:
            v0 = float(payoff_g(0.0, spec.x0, spec))
        else:
            v0 = _hold_value(spec)
        solution = Solution(
            spec=spec,
            regime=regime,
            method='analytic',
            v0=v0,
            boundary=boundary,
            surface=surface,
        )
    elif spec.market.sigma < SIGMA_MIN_PDE:
        oracle = sigma0_solution(spec)
        solution = Solution(
            spec=spec,
            regime=regime,
            method='sigma0',
            v0=float(oracle.value_at(0.0, spec.x0)),
            boundary=oracle.boundary(times),
            oracle=oracle,
        )
    else:
        surface = solve_pde(spec, grid)
        solution = Solution(
            spec=spec,
            regime=regime,
            method='pde',
            v0=surface.value_at(0.0, spec.x0),
            boundary=extract_boundary(surface, options.eps_stop),
            surface=surface,
        )
    _logger.info(
        f'Solved regime [{regime.value}] with [{solution.method}]: '
        f'V(0, {spec.x0}) = [{solution.v0:.10g}].'
    )
    return solution
