"""
Statistical check of the decomposition

    G(t, X_t) = G(0, x0) + int_0^t F(u, X_u) du + M_t

where M is a martingale started at 0. Averaging over paths, the residual
G(t*, X_t*) - G(0, x0) - int_0^t* F du must vanish up to Monte Carlo noise
and time quadrature error.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from ..errors import DomainError
from ..model.payoff import payoff_g
from ..model.payoff import running_payoff_f
from ..model.spec import ProblemSpec
from .paths import PathBatch
from .policy import pair_samples
from .policy import summarize

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DynkinResidual:
    mean: float
    """Sample mean of the residual."""
    std_error: float
    studentized: float
    """mean / std_error; 0 for an identically zero residual."""
    relative: float
    """mean / G(0, x0); the meaningful number when the paths carry no noise."""

    def to_dict(self) -> dict:
        return {
            'mean': self.mean,
            'std_error': self.std_error,
            'studentized': self.studentized,
            'relative': self.relative,
        }


def dynkin_check(
    spec: ProblemSpec, t_star: float, batch: PathBatch
) -> DynkinResidual:
    """Residual of the payoff decomposition at a fixed time.

    Args:
        spec: The problem.
        t_star: A time on the batch grid.
        batch: Simulated paths of the same problem.

    Raises:
        DomainError: t_star is not a grid time of the batch.
    """
    times = batch.times
    k = int(np.argmin(np.abs(times - t_star)))
    if abs(times[k] - t_star) > 1e-9 * spec.horizon_t:
        raise DomainError(f'Time [{t_star}] is not on the path grid.')
    prices = batch.prices[:, : k + 1]
    start = payoff_g(0.0, spec.x0, spec)
    drift = running_payoff_f(times[None, : k + 1], prices, spec)
    integral = trapezoid(drift, times[: k + 1], axis=1)
    residual = payoff_g(times[k], prices[:, -1], spec) - start - integral
    mean, se = summarize(pair_samples(residual, batch.antithetic))
    if se > 0:
        studentized = mean / se
    elif mean == 0:
        studentized = 0.0
    else:
        studentized = math.copysign(math.inf, mean)
    result = DynkinResidual(
        mean=mean, std_error=se, studentized=studentized, relative=mean / start
    )
    _logger.info(
        f'Decomposition residual at t=[{times[k]:.6g}]: [{mean:.3e}] '
        f'(studentized [{studentized:.3g}]).'
    )
    return result
