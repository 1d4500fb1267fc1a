"""
Closed-form solution of the selling problem for a deterministic stock
(sigma = 0).

Without noise the price path is x e^{mu s}, and since the payoff drift
changes sign only once along that path the supremum is attained either by
selling now or by holding to the horizon. The boundary is the price at which
both are worth the same:

    G(t, b(t)) = G(T, b(t) e^{mu (T - t)}).

The numerical solvers are validated against these formulas.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import DomainError
from ..errors import RegimeError
from ..model.payoff import payoff_g
from ..model.payoff import threshold_f
from ..model.spec import classify_regime
from ..model.spec import ProblemSpec
from ..model.spec import Regime
from ..solvers.boundary import Boundary
from ..solvers.boundary import sentinel_level

_logger = logging.getLogger(__name__)

NEAR_HORIZON = 1e-8
"""Below this time to maturity the boundary is reported as its limit f."""

ArrayOrFloat = Union[float, np.ndarray]


class StopDecision(enum.Enum):
    STOP_NOW = 'stop_now'
    HOLD_TO_T = 'hold_to_t'


def _boundary_values(tau: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    alpha = spec.tax.alpha
    mu = spec.market.mu
    a = spec.market.r * (1 - alpha)
    # e^{mu tau} - e^{a tau} = e^{a tau} expm1((mu - a) tau) avoids cancellation
    numerator = alpha * spec.tax.p0 * np.expm1(a * tau)
    denominator = (1 - alpha) * np.exp(a * tau) * np.expm1((mu - a) * tau)
    with np.errstate(divide='ignore', invalid='ignore'):
        levels = numerator / denominator
    return np.where(tau < NEAR_HORIZON, threshold_f(spec), levels)


def boundary_sigma0(t: ArrayOrFloat, spec: ProblemSpec) -> ArrayOrFloat:
    """Exercise boundary of the deterministic problem.

    Args:
        t: Time(s) in [0, T).
        spec: A problem in the free-boundary regime; its volatility is
            ignored.

    Returns:
        alpha p0 (e^{r (1 - alpha) (T - t)} - 1) /
        [(1 - alpha) (e^{mu (T - t)} - e^{r (1 - alpha) (T - t)})],
        or f when T - t is below :py:data:`NEAR_HORIZON`.

    Raises:
        RegimeError: The problem is not in the free-boundary regime.
        DomainError: t outside [0, T).
    """
    regime = classify_regime(spec)
    if regime is not Regime.FREE_BOUNDARY:
        raise RegimeError(
            f'The sigma=0 boundary formula needs the free-boundary regime, '
            f'not [{regime.value}].'
        )
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr >= spec.horizon_t):
        raise DomainError(f'Time [{t}] is outside [0, {spec.horizon_t}).')
    levels = _boundary_values(spec.horizon_t - t_arr, spec)
    if levels.ndim == 0:
        return float(levels)
    return levels


def _boundary_or_sentinel(t: ArrayOrFloat, spec: ProblemSpec) -> ArrayOrFloat:
    level = sentinel_level(classify_regime(spec))
    if level is not None:
        return level
    # the horizon itself: every price is a stopping price
    t_arr = np.asarray(t, dtype=float)
    inside = np.minimum(t_arr, math.nextafter(spec.horizon_t, 0.0))
    levels = np.where(
        t_arr >= spec.horizon_t, math.inf, boundary_sigma0(inside, spec)
    )
    return float(levels) if levels.ndim == 0 else levels


def value_sigma0(t: ArrayOrFloat, x: ArrayOrFloat, spec: ProblemSpec) -> ArrayOrFloat:
    """Value of the deterministic problem: the better of selling now and
    selling at the horizon.

    Args:
        t: Time(s) in [0, T].
        x: Positive price(s).
        spec: The problem; its volatility is ignored.

    Returns:
        max(G(t, x), G(T, x e^{mu (T - t)})).
    """
    tau = spec.horizon_t - np.asarray(t, dtype=float)
    now = payoff_g(t, x, spec)
    later = payoff_g(
        spec.horizon_t, np.asarray(x, dtype=float) * np.exp(spec.market.mu * tau), spec
    )
    value = np.maximum(now, later)
    return float(value) if np.ndim(value) == 0 else value


def stop_time_sigma0(t: float, x: float, spec: ProblemSpec) -> float:
    """Optimal time to wait before selling: 0 if x <= b(t), else T - t.

    A price exactly on the boundary sells immediately.
    """
    if not 0 <= t <= spec.horizon_t:
        raise DomainError(f'Time [{t}] is outside [0, {spec.horizon_t}].')
    if x <= _boundary_or_sentinel(t, spec):
        return 0.0
    return spec.horizon_t - t


@dataclass(frozen=True)
class Sigma0Solution:
    """Closed-form solution bundle for one problem."""

    spec: ProblemSpec

    def boundary_at(self, t: ArrayOrFloat) -> ArrayOrFloat:
        """Boundary level(s); sentinels in the degenerate regimes."""
        return _boundary_or_sentinel(t, self.spec)

    def value_at(self, t: ArrayOrFloat, x: ArrayOrFloat) -> ArrayOrFloat:
        return value_sigma0(t, x, self.spec)

    def stop_decision(self, t: float, x: float) -> StopDecision:
        if stop_time_sigma0(t, x, self.spec) == 0.0:
            return StopDecision.STOP_NOW
        return StopDecision.HOLD_TO_T

    def boundary(self, times: np.ndarray) -> Boundary:
        """The boundary sampled on a time grid that excludes the horizon."""
        times = np.asarray(times, dtype=float)
        regime = classify_regime(self.spec)
        return Boundary.build(
            times,
            np.broadcast_to(self.boundary_at(times), times.shape),
            regime,
            tolerance=1e-9 * self.spec.tax.p0,
            source='sigma0',
        )


def sigma0_solution(spec: ProblemSpec) -> Sigma0Solution:
    """Bundle the closed-form boundary, value and stopping rule."""
    regime = classify_regime(spec)
    _logger.debug(f'Building sigma=0 solution for regime [{regime.value}].')
    return Sigma0Solution(spec)
