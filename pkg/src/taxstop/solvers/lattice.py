"""
Recombining binomial lattice for the selling problem.

The price moves up by u = e^{sigma sqrt(dt)} or down by d = 1/u per step,
going up with probability p = (e^{mu dt} - d) / (u - d) so that the one-step
mean matches the stock. Backward induction then reads

    V_N(x) = G(T, x),
    V_k(x) = max(G(t_k, x), p V_{k+1}(x u) + (1 - p) V_{k+1}(x d)).

There is no discount factor in the recursion: the payoff G already
compounds the sale proceeds to the horizon, so V is measured in horizon
wealth throughout.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError
from ..errors import ProbabilityRangeError
from ..model.payoff import payoff_g
from ..model.spec import classify_regime
from ..model.spec import ProblemSpec
from ..model.spec import Regime
from .boundary import Boundary

_logger = logging.getLogger(__name__)

DEFAULT_LATTICE_STEPS = 2000
"""Default number of lattice time steps."""

_MAX_STEPS_SEARCH = 2**40


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice discretisation; the lattice is anchored at x0."""

    n_steps: int = DEFAULT_LATTICE_STEPS

    def __post_init__(self):
        if not isinstance(self.n_steps, int) or self.n_steps < 1:
            raise DomainError(
                f'[lattice.n_steps] must be a positive integer, '
                f'got [{self.n_steps}]',
                field='lattice.n_steps',
            )


@dataclass(frozen=True)
class LatticeSolution:
    """Output of :py:func:`solve_lattice`."""

    spec: ProblemSpec
    config: LatticeConfig
    value_root: float
    """V(0, x0) estimate."""
    up: float
    """Up factor u."""
    probability: float
    """Up-move probability p."""
    exercise_flags: tuple
    """exercise_flags[k][j] is True if selling is chosen at node j of step k
    (node price x0 u^{2j - k}). Steps 0..N-1; at the horizon everything sells."""
    boundary: Optional[Boundary] = None

    @property
    def dt(self) -> float:
        return self.spec.horizon_t / self.config.n_steps

    def node_prices(self, step: int) -> np.ndarray:
        """Prices of the nodes of a time step, lowest first."""
        j = np.arange(step + 1)
        return self.spec.x0 * np.exp(
            self.spec.market.sigma * math.sqrt(self.dt) * (2 * j - step)
        )


def _probability(spec: ProblemSpec, n_steps: int) -> float:
    dt = spec.horizon_t / n_steps
    up = math.exp(spec.market.sigma * math.sqrt(dt))
    down = 1 / up
    return (math.exp(spec.market.mu * dt) - down) / (up - down)


def _valid(p: float) -> bool:
    return 0 < p < 1


def _min_valid_steps(spec: ProblemSpec, n_steps: int) -> Optional[int]:
    """Smallest step count with a probability inside (0, 1), searching upward
    from the rejected one."""
    hi = n_steps
    while not _valid(_probability(spec, hi)):
        hi *= 2
        if hi > _MAX_STEPS_SEARCH:
            return None
    lo = n_steps
    # invariant: lo is invalid, hi is valid
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _valid(_probability(spec, mid)):
            hi = mid
        else:
            lo = mid
    return hi


def solve_lattice(
    spec: ProblemSpec, config: LatticeConfig = LatticeConfig()
) -> LatticeSolution:
    """Value the selling problem by backward induction on a binomial lattice.

    Args:
        spec: The problem; sigma must be positive.
        config: Lattice size.

    Returns:
        Root value, exercise decisions at every node and the extracted
        boundary.

    Raises:
        DomainError: sigma is 0 (use the closed-form sigma = 0 solution).
        ProbabilityRangeError: p is outside (0, 1); the error carries the
            smallest step count that fixes it.
    """
    sigma = spec.market.sigma
    if sigma <= 0:
        raise DomainError(
            '[market.sigma] the lattice needs a positive volatility; use the '
            'sigma=0 closed form instead.',
            field='market.sigma',
        )
    n = config.n_steps
    p = _probability(spec, n)
    if not _valid(p):
        raise ProbabilityRangeError(p, n, _min_valid_steps(spec, n))

    dt = spec.horizon_t / n
    up = math.exp(sigma * math.sqrt(dt))
    step_log = sigma * math.sqrt(dt)

    j = np.arange(n + 1)
    values = payoff_g(spec.horizon_t, spec.x0 * np.exp(step_log * (2 * j - n)), spec)
    flags = [None] * n
    for k in range(n - 1, -1, -1):
        prices = spec.x0 * np.exp(step_log * (2 * np.arange(k + 1) - k))
        hold = p * values[1:] + (1 - p) * values[:-1]
        sell = payoff_g(k * dt, prices, spec)
        stop = sell >= hold
        flags[k] = stop
        values = np.where(stop, sell, hold)

    solution = LatticeSolution(
        spec=spec,
        config=config,
        value_root=float(values[0]),
        up=up,
        probability=p,
        exercise_flags=tuple(flags),
    )
    boundary = extract_boundary_lattice(solution)
    solution = dataclasses.replace(solution, boundary=boundary)
    _logger.info(
        f'Lattice with [{n}] steps: V(0, {spec.x0}) = [{solution.value_root:.10g}], '
        f'p = [{p:.6f}].'
    )
    return solution


def extract_boundary_lattice(solution: LatticeSolution) -> Boundary:
    """Read the exercise boundary off the lattice decisions.

    At each step the boundary estimate is the geometric midpoint between the
    highest selling node and the node above it. Steps where nothing sells
    record 0; in the sell-immediately regime every step records +inf.
    """
    spec = solution.spec
    regime = classify_regime(spec)
    n = solution.config.n_steps
    times = np.arange(n) * solution.dt
    if regime is Regime.SELL_IMMEDIATELY:
        return Boundary.constant(times, math.inf, regime, source='lattice')

    levels = np.zeros(n)
    for k, stop in enumerate(solution.exercise_flags):
        selling = np.flatnonzero(stop)
        if selling.size:
            top = selling[-1]
            levels[k] = solution.node_prices(k)[top] * solution.up
    # adjacent steps sit on interleaved node sets, so one node spacing of
    # wobble is inherent to the extraction
    spacing = levels.max() * (solution.up**2 - 1)
    return Boundary.build(times, levels, regime, tolerance=spacing, source='lattice')
