"""
The payoff of selling, its Itô drift (the running payoff) and the root of
the running payoff.

Selling at time t at price x leaves (1 - alpha) x + alpha p0 after tax,
which then earns the after-tax bank rate r (1 - alpha) until the horizon T.
Every function here accepts scalars or numpy arrays for the price (and the
time where it makes sense) and returns a float or an array to match.
"""
import math
from typing import Union

import numpy as np

from ..errors import DomainError
from .spec import ProblemSpec

ArrayOrFloat = Union[float, np.ndarray]


def _check_domain(t: ArrayOrFloat, x: ArrayOrFloat, spec: ProblemSpec):
    t_arr = np.asarray(t, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > spec.horizon_t) or np.any(np.isnan(t_arr)):
        raise DomainError(f'Time [{t}] is outside [0, {spec.horizon_t}].')
    if np.any(x_arr < 0) or np.any(np.isnan(x_arr)):
        raise DomainError(f'Price [{x}] must be nonnegative.')


def _as_output(value):
    if np.ndim(value) == 0:
        return float(value)
    return value


def _growth(t: ArrayOrFloat, spec: ProblemSpec):
    """exp(r (1 - alpha) (T - t)), the after-tax bank growth from t to T."""
    r = spec.market.r
    alpha = spec.tax.alpha
    return np.exp(r * (1 - alpha) * (spec.horizon_t - np.asarray(t, dtype=float)))


def payoff_g(t: ArrayOrFloat, x: ArrayOrFloat, spec: ProblemSpec) -> ArrayOrFloat:
    """Wealth at the horizon when the stock is sold at time t at price x.

    Args:
        t: Selling time(s) in [0, T].
        x: Selling price(s), nonnegative.
        spec: The problem.

    Returns:
        [(1 - alpha) x + alpha p0] exp(r (1 - alpha) (T - t)).

    Raises:
        DomainError: t outside [0, T] or x negative.
    """
    _check_domain(t, x, spec)
    alpha = spec.tax.alpha
    after_tax = (1 - alpha) * np.asarray(x, dtype=float) + alpha * spec.tax.p0
    return _as_output(after_tax * _growth(t, spec))


def payoff_g_dx(t: ArrayOrFloat, spec: ProblemSpec) -> ArrayOrFloat:
    """Closed-form price sensitivity of the payoff,
    (1 - alpha) exp(r (1 - alpha) (T - t))."""
    _check_domain(t, 0.0, spec)
    return _as_output((1 - spec.tax.alpha) * _growth(t, spec))


def running_payoff_f(
    t: ArrayOrFloat, x: ArrayOrFloat, spec: ProblemSpec
) -> ArrayOrFloat:
    """Drift of the payoff process G(t, X_t).

    By Itô's formula G(s, X_s) = G(t, x) + int F du + martingale, with

        F(t, x) = exp(r (1 - alpha) (T - t)) (1 - alpha)
                  (-r alpha p0 + x [mu - r (1 - alpha)]).

    Holding is locally profitable exactly where F > 0. The sign of F does not
    depend on t.

    Raises:
        DomainError: t outside [0, T] or x negative.
    """
    _check_domain(t, x, spec)
    mu = spec.market.mu
    r = spec.market.r
    alpha = spec.tax.alpha
    p0 = spec.tax.p0
    rate = -r * alpha * p0 + np.asarray(x, dtype=float) * (mu - r * (1 - alpha))
    return _as_output(_growth(t, spec) * (1 - alpha) * rate)


def threshold_f(spec: ProblemSpec) -> float:
    """Root of the running payoff, f = r alpha p0 / (mu - r (1 - alpha)).

    The exercise boundary never exceeds f and tends to f at the horizon.

    Returns:
        f when mu > (1 - alpha) r, else :code:`math.inf` (F <= 0 for every
        price, so there is no root to speak of).
    """
    mu = spec.market.mu
    r = spec.market.r
    alpha = spec.tax.alpha
    excess = mu - r * (1 - alpha)
    if excess <= 0:
        return math.inf
    return r * alpha * spec.tax.p0 / excess


def lipschitz_bound(spec: ProblemSpec) -> float:
    """A (loose) Lipschitz constant of x -> V(t, x), uniform in t.

    The value changes by at most (1 - alpha) e^{(mu + r) T} E[sup of the
    stochastic exponential] per unit of price. The expectation is bounded by
    3 here, which is generous for any horizon this tool is used with.
    """
    market = spec.market
    return 3 * (1 - spec.tax.alpha) * math.exp(
        (abs(market.mu) + market.r) * spec.horizon_t
    )
