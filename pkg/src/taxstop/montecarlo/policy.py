"""
Monte Carlo value of a selling rule.

A rule picks, path by path, the first grid time at which to sell; the stock
is sold at the horizon at the latest. Its value is the mean of G(tau, X_tau)
over the paths. Checking against a boundary only at grid times can only
delay the sale, so a boundary policy is biased low by the monitoring gap,
and never above the true optimum.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional
from typing import Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..errors import DomainError
from ..misc.parallel import ordered_map
from ..model.payoff import payoff_g
from ..model.payoff import running_payoff_f
from ..model.spec import ProblemSpec
from ..solvers.boundary import Boundary
from .paths import check_simulation_args
from .paths import BLOCK_ROWS
from .paths import PathBatch
from .paths import rows_for
from .paths import simulate_rows
from .paths import time_grid

_logger = logging.getLogger(__name__)

ESTIMATORS = ('payoff', 'running')

CHUNK_BLOCKS = 8
"""Random blocks handed to one worker at a time by :py:func:`estimate_policy`."""


@dataclass(frozen=True)
class StopAt:
    """Sell at a fixed time (rounded up to the next grid time)."""

    t_star: float

    @property
    def name(self) -> str:
        return f'stop_at({self.t_star:g})'

    def stop_indices(self, times: np.ndarray, prices: np.ndarray) -> np.ndarray:
        horizon = times[-1]
        if not 0 <= self.t_star <= horizon:
            raise DomainError(
                f'Stopping time [{self.t_star}] is outside [0, {horizon}].'
            )
        # tolerate round-off in the caller's time
        k = int(np.searchsorted(times, self.t_star - 1e-12 * horizon, side='left'))
        return np.full(prices.shape[0], min(k, len(times) - 1))


@dataclass(frozen=True)
class BoundaryPolicy:
    """Sell the first grid time the price is at or below the boundary."""

    boundary: Boundary

    @property
    def name(self) -> str:
        return f'boundary({self.boundary.source})'

    def stop_indices(self, times: np.ndarray, prices: np.ndarray) -> np.ndarray:
        levels = np.append(self.boundary.resample(times[:-1]), math.inf)
        # the last column always sells, so argmax finds a hit on every row
        return np.argmax(prices <= levels[None, :], axis=1)


StoppingPolicy = Union[StopAt, BoundaryPolicy]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    """Standard error of the mean; antithetic pairs count as one sample."""
    n_paths: int
    seed: int
    antithetic: bool = True
    estimator: str = 'payoff'
    policy: str = ''

    def to_dict(self) -> dict:
        return {
            'mean': self.mean,
            'std_error': self.std_error,
            'n_paths': self.n_paths,
            'seed': self.seed,
            'antithetic': self.antithetic,
            'estimator': self.estimator,
            'policy': self.policy,
        }


def _path_values(
    times: np.ndarray,
    prices: np.ndarray,
    policy: StoppingPolicy,
    spec: ProblemSpec,
    estimator: str,
) -> np.ndarray:
    if estimator not in ESTIMATORS:
        raise ValueError(
            f'Unknown estimator [{estimator}], expected one of {ESTIMATORS}.'
        )
    idx = policy.stop_indices(times, prices)
    rows = np.arange(prices.shape[0])
    if estimator == 'payoff':
        return payoff_g(times[idx], prices[rows, idx], spec)
    # G(tau, X_tau) = G(0, x0) + int_0^tau F du + martingale
    drift = running_payoff_f(times[None, :], prices, spec)
    integral = cumulative_trapezoid(drift, times, axis=1, initial=0.0)
    return payoff_g(0.0, spec.x0, spec) + integral[rows, idx]


def pair_samples(values: np.ndarray, antithetic: bool) -> np.ndarray:
    if antithetic:
        return 0.5 * (values[0::2] + values[1::2])
    return values


def summarize(samples: np.ndarray):
    """Mean and standard error; a constant sample is returned exactly."""
    if np.all(samples == samples[0]):
        return float(samples[0]), 0.0
    se = np.std(samples, ddof=1) / math.sqrt(samples.size)
    return float(np.mean(samples)), float(se)


def evaluate_policy(
    batch: PathBatch,
    policy: StoppingPolicy,
    spec: Optional[ProblemSpec] = None,
    estimator: str = 'payoff',
) -> McEstimate:
    """Estimate the value of a selling rule on simulated paths.

    Args:
        batch: Paths.
        policy: The rule. A boundary on another time grid is resampled onto
            the batch grid (previous node wins).
        spec: The problem; defaults to the one the paths were simulated for.
        estimator: 'payoff' averages G(tau, X_tau); 'running' averages
            G(0, x0) + int_0^tau F(u, X_u) du (trapezoidal along the path),
            which has the same expectation.

    Returns:
        Mean and standard error, antithetic pairs averaged first.
    """
    spec = batch.spec if spec is None else spec
    values = _path_values(batch.times, batch.prices, policy, spec, estimator)
    mean, se = summarize(pair_samples(values, batch.antithetic))
    return McEstimate(
        mean=mean,
        std_error=se,
        n_paths=batch.n_paths,
        seed=batch.seed,
        antithetic=batch.antithetic,
        estimator=estimator,
        policy=policy.name,
    )


def estimate_policy(
    spec: ProblemSpec,
    policy: StoppingPolicy,
    n_paths: int,
    n_steps: int,
    seed: int,
    antithetic: bool = True,
    estimator: str = 'payoff',
    workers: Optional[int] = None,
) -> McEstimate:
    """Same as :py:func:`evaluate_policy` on :py:func:`simulate_paths`
    output, but streams the paths in chunks so that memory stays bounded.

    The result is bit-identical to the in-memory evaluation and does not
    depend on :code:`workers`.
    """
    check_simulation_args(n_paths, n_steps, seed, antithetic)
    times = time_grid(spec, n_steps)
    n_rows = rows_for(n_paths, antithetic)
    chunk = CHUNK_BLOCKS * BLOCK_ROWS

    def run(start):
        prices = simulate_rows(
            spec, start, min(start + chunk, n_rows), n_steps, seed, antithetic
        )
        values = _path_values(times, prices, policy, spec, estimator)
        return pair_samples(values, antithetic)

    samples = np.concatenate(ordered_map(run, range(0, n_rows, chunk), workers))
    mean, se = summarize(samples)
    _logger.info(
        f'Policy [{policy.name}] over [{n_paths}] paths: [{mean:.8g}] +- [{se:.3g}].'
    )
    return McEstimate(
        mean=mean,
        std_error=se,
        n_paths=n_paths,
        seed=seed,
        antithetic=antithetic,
        estimator=estimator,
        policy=policy.name,
    )
