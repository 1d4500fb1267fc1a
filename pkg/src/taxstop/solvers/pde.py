"""
Finite-difference solver for the variational inequality of the selling
problem

    max(dV/dt + mu x dV/dx + (sigma^2 / 2) x^2 d2V/dx2, G - V) = 0,
    V(T, x) = G(T, x).

The equation is solved in log price y = ln x, where it has constant
coefficients, with a theta scheme in time (Crank-Nicolson by default,
started with a few fully implicit steps to damp the kink of the obstacle)
and projected SOR for the obstacle at every step.

Boundary conditions:

- lower edge: V = G, the edge lies deep inside the stopping region;
- upper edge: d2V/dx2 = 0, i.e. V is continued affinely in x from the two
  nodes below. Above f the stock is always held and the value is
  asymptotically affine in x, like G.
"""
import dataclasses
import logging
import math
import time as _time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError
from ..errors import GridTooCoarseError
from ..errors import OutOfGridError
from ..errors import PsorConvergenceError
from ..errors import RegimeError
from ..model.payoff import payoff_g
from ..model.payoff import payoff_g_dx
from ..model.payoff import threshold_f
from ..model.spec import classify_regime
from ..model.spec import ProblemSpec
from ..model.spec import Regime
from ._psor import psor_sweeps
from .boundary import Boundary

_logger = logging.getLogger(__name__)

DEFAULT_N_X = 801
DEFAULT_N_T = 600
DEFAULT_THETA = 0.5
DEFAULT_PSOR_TOL = 1e-10
DEFAULT_PSOR_OMEGA = 1.2
DEFAULT_PSOR_MAX_ITER = 20_000
DEFAULT_RANNACHER_STEPS = 4
DEFAULT_EPS_STOP = 1e-7

SIGMA_MIN_PDE = 1e-4
"""Below this volatility the closed-form sigma = 0 solution is used instead."""

TRUNCATION_STDDEVS = 6.0
"""Half-width of the price domain in standard deviations of ln X_T."""

PECLET_UPWIND = 2.0
"""Cell Péclet number above which the drift is upwinded."""


@dataclass(frozen=True)
class GridConfig:
    """Discretisation of the PDE. :code:`s_lo`/:code:`s_hi` of None mean
    "derive from the problem" (see :py:func:`price_domain`)."""

    n_x: int = DEFAULT_N_X
    """Number of log-price nodes, edges included."""
    n_t: int = DEFAULT_N_T
    """Number of time steps."""
    s_lo: Optional[float] = None
    s_hi: Optional[float] = None
    theta: float = DEFAULT_THETA
    psor_tol: float = DEFAULT_PSOR_TOL
    psor_omega: float = DEFAULT_PSOR_OMEGA
    psor_max_iter: int = DEFAULT_PSOR_MAX_ITER
    rannacher_steps: int = DEFAULT_RANNACHER_STEPS

    def __post_init__(self):
        def check(ok, name, message):
            if not ok:
                raise DomainError(f'[grid.{name}] {message}', field=f'grid.{name}')

        check(
            isinstance(self.n_x, int) and self.n_x >= 3,
            'n_x',
            'must be an integer >= 3',
        )
        check(
            isinstance(self.n_t, int) and self.n_t >= 1,
            'n_t',
            'must be a positive integer',
        )
        check(0 <= self.theta <= 1, 'theta', 'must lie in [0, 1]')
        check(self.psor_tol > 0, 'psor_tol', 'must be positive')
        check(0 < self.psor_omega < 2, 'psor_omega', 'must lie in (0, 2)')
        check(
            isinstance(self.psor_max_iter, int) and self.psor_max_iter >= 1,
            'psor_max_iter',
            'must be a positive integer',
        )
        check(
            isinstance(self.rannacher_steps, int) and self.rannacher_steps >= 0,
            'rannacher_steps',
            'must be a nonnegative integer',
        )
        check(self.s_lo is None or self.s_lo > 0, 's_lo', 'must be positive')
        check(
            self.s_lo is None or self.s_hi is None or self.s_lo < self.s_hi,
            's_hi',
            'must exceed s_lo',
        )

    def refined(self, factor: int = 2) -> 'GridConfig':
        """The same grid with :code:`factor` times the resolution in both
        directions (same price domain)."""
        return dataclasses.replace(
            self, n_x=(self.n_x - 1) * factor + 1, n_t=self.n_t * factor
        )


def _anchors(spec: ProblemSpec):
    f = threshold_f(spec)
    lows = [spec.tax.p0, spec.x0]
    highs = [spec.x0]
    if 0 < f < math.inf:
        lows.append(f)
        highs.append(f)
    return min(lows), max(highs)


def price_domain(spec: ProblemSpec, grid: GridConfig) -> tuple:
    """Truncated price domain [s_lo, s_hi] of the grid.

    Unless given explicitly, the edges sit
    TRUNCATION_STDDEVS sigma sqrt(T) + |mu| T in log price beyond the
    interesting prices (f, p0, x0).

    Raises:
        DomainError: Explicit edges do not enclose the interesting prices.
    """
    lo_anchor, hi_anchor = _anchors(spec)
    market = spec.market
    margin = TRUNCATION_STDDEVS * market.sigma * math.sqrt(spec.horizon_t) + abs(
        market.mu
    ) * spec.horizon_t
    # keep a little room even for a deterministic, driftless stock
    margin = max(margin, 0.05)
    s_lo = grid.s_lo if grid.s_lo is not None else lo_anchor * math.exp(-margin)
    s_hi = grid.s_hi if grid.s_hi is not None else hi_anchor * math.exp(margin)
    if not s_lo < lo_anchor:
        raise DomainError(
            f'[grid.s_lo] must lie below [{lo_anchor}], got [{s_lo}]', field='grid.s_lo'
        )
    if not s_hi > hi_anchor:
        raise DomainError(
            f'[grid.s_hi] must lie above [{hi_anchor}], got [{s_hi}]', field='grid.s_hi'
        )
    return s_lo, s_hi


@dataclass(frozen=True)
class SolverDiagnostics:
    method: str
    """'pde' or the name of the analytic short cut that produced the surface."""
    psor_iterations: np.ndarray
    """Sweeps used at each time step, ordered like the time grid (last entry 0)."""
    upwinded: bool = False
    peclet: float = 0.0
    runtime: float = 0.0
    """Wall-clock seconds."""

    def to_dict(self) -> dict:
        its = self.psor_iterations
        return {
            'method': self.method,
            'psor_iterations_total': int(its.sum()),
            'psor_iterations_max': int(its.max()) if its.size else 0,
            'upwinded': self.upwinded,
            'peclet': self.peclet,
        }


@dataclass(frozen=True)
class ValueSurface:
    """V(t, x) on a time x log-price grid."""

    times: np.ndarray
    """Ascending times t_0 = 0, ..., t_{n_t} = T."""
    log_prices: np.ndarray
    """Ascending log prices."""
    values: np.ndarray
    """values[i, j] = V(times[i], exp(log_prices[j]))."""
    spec: ProblemSpec
    grid: GridConfig
    diagnostics: SolverDiagnostics

    @property
    def prices(self) -> np.ndarray:
        return np.exp(self.log_prices)

    @property
    def dy(self) -> float:
        return float(self.log_prices[1] - self.log_prices[0])

    def obstacle(self) -> np.ndarray:
        """G on the grid."""
        return payoff_g(self.times[:, None], self.prices[None, :], self.spec)

    def premium(self) -> np.ndarray:
        """V - G on the grid: zero where selling is optimal."""
        return self.values - self.obstacle()

    def value_at(self, t: float, x: float) -> float:
        """V(t, x) by interpolation.

        The premium V - G is interpolated bilinearly in (t, ln x) and G is
        added back exactly, so nodes are reproduced and V(T, x) = G(T, x)
        for every x.

        Raises:
            OutOfGridError: (t, x) outside the grid.
        """
        if not (self.times[0] <= t <= self.times[-1]):
            raise OutOfGridError(f'Time [{t}] is outside the grid.')
        if not x > 0:
            raise OutOfGridError(f'Price [{x}] is outside the grid.')
        y = math.log(x)
        lp = self.log_prices
        # tolerate round-off at the edges
        if not (lp[0] - 1e-12 <= y <= lp[-1] + 1e-12):
            raise OutOfGridError(
                f'Price [{x}] is outside [{math.exp(lp[0])}, {math.exp(lp[-1])}].'
            )
        y = min(max(y, lp[0]), lp[-1])
        i = np.searchsorted(self.times, t, side='right') - 1
        i = int(np.clip(i, 0, len(self.times) - 2))
        j = int(np.clip(np.searchsorted(lp, y, side='right') - 1, 0, len(lp) - 2))
        wt = (t - self.times[i]) / (self.times[i + 1] - self.times[i])
        wy = (y - lp[j]) / (lp[j + 1] - lp[j])
        ts = self.times[i : i + 2]
        xs = np.exp(lp[j : j + 2])
        obstacle = payoff_g(ts[:, None], xs[None, :], self.spec)
        prem = self.values[i : i + 2, j : j + 2] - obstacle
        p = (
            (1 - wt) * ((1 - wy) * prem[0, 0] + wy * prem[0, 1])
            + wt * ((1 - wy) * prem[1, 0] + wy * prem[1, 1])
        )
        return float(payoff_g(t, x, self.spec) + p)


def _operator(spec: ProblemSpec, dy: float):
    """Three-point stencil (l, c, u) of the log-price generator and whether
    the drift was upwinded."""
    a = 0.5 * spec.market.sigma**2
    b = spec.market.mu - a
    peclet = abs(b) * dy / a if a > 0 else math.inf
    if peclet <= PECLET_UPWIND:
        lo = a / dy**2 - b / (2 * dy)
        up = a / dy**2 + b / (2 * dy)
        return lo, -(lo + up), up, False, peclet
    if b > 0:
        lo, up = a / dy**2, a / dy**2 + b / dy
    else:
        lo, up = a / dy**2 - b / dy, a / dy**2
    return lo, -(lo + up), up, True, peclet


def _implicit_matrix(m: int, theta_dt: float, stencil, kappa: float):
    lo, c, up = stencil
    lower = np.full(m, -theta_dt * lo)
    diag = np.full(m, 1 - theta_dt * c)
    upper = np.full(m, -theta_dt * up)
    # eliminate the affinely extrapolated top node from the last row
    lower[-1] = lower[-1] - kappa * upper[-1]
    diag[-1] = diag[-1] + (1 + kappa) * upper[-1]
    upper[-1] = 0.0
    # diagonal dominance keeps PSOR convergent and the scheme monotone
    off = np.abs(upper)
    off[1:] += np.abs(lower[1:])
    if m == 1:
        off[0] = 0.0
    if np.any(diag <= 0) or np.any(diag < off):
        raise GridTooCoarseError(
            f'Implicit operator is not diagonally dominant '
            f'(theta*dt = {theta_dt:.3g}); '
            'increase n_t or decrease n_x.'
        )
    return lower, diag, upper


def _analytic_surface(
    spec: ProblemSpec, grid: GridConfig, times, log_prices, regime: Regime, start: float
) -> ValueSurface:
    prices = np.exp(log_prices)
    if regime is Regime.SELL_IMMEDIATELY:
        values = payoff_g(times[:, None], prices[None, :], spec)
        method = 'sell_immediately'
    else:
        tau = spec.horizon_t - times
        grown = prices[None, :] * np.exp(spec.market.mu * tau)[:, None]
        values = payoff_g(spec.horizon_t, grown, spec)
        method = 'hold_to_maturity'
    _logger.info(f'Regime [{regime.value}] solved in closed form on the grid.')
    return ValueSurface(
        times=times,
        log_prices=log_prices,
        values=values,
        spec=spec,
        grid=grid,
        diagnostics=SolverDiagnostics(
            method=method,
            psor_iterations=np.zeros(len(times), dtype=int),
            runtime=_time.perf_counter() - start,
        ),
    )


def solve_pde(spec: ProblemSpec, grid: GridConfig = GridConfig()) -> ValueSurface:
    """Solve the obstacle problem on a log-price grid.

    Args:
        spec: The problem.
        grid: Discretisation.

    Returns:
        The value surface. The degenerate regimes are filled in from their
        closed forms without any linear algebra.

    Raises:
        DomainError: Free-boundary problem with sigma below
            :py:data:`SIGMA_MIN_PDE`; use the sigma = 0 closed form.
        GridTooCoarseError: The implicit operator is not diagonally dominant.
        PsorConvergenceError: PSOR failed at some time step.
    """
    start = _time.perf_counter()
    regime = classify_regime(spec)
    s_lo, s_hi = price_domain(spec, grid)
    times = np.linspace(0.0, spec.horizon_t, grid.n_t + 1)
    log_prices = np.linspace(math.log(s_lo), math.log(s_hi), grid.n_x)

    if regime is not Regime.FREE_BOUNDARY:
        return _analytic_surface(spec, grid, times, log_prices, regime, start)
    if spec.market.sigma < SIGMA_MIN_PDE:
        raise DomainError(
            f'[market.sigma] [{spec.market.sigma}] is below [{SIGMA_MIN_PDE}]; '
            'use the sigma=0 closed form.',
            field='market.sigma',
        )

    prices = np.exp(log_prices)
    dy = float(log_prices[1] - log_prices[0])
    dt = spec.horizon_t / grid.n_t
    lo, c, up, upwinded, peclet = _operator(spec, dy)
    stencil = (lo, c, up)
    # x_N - x_{N-1} = kappa (x_{N-1} - x_{N-2}) on a uniform log grid
    kappa = math.exp(dy)
    m = grid.n_x - 2
    if upwinded:
        _logger.info(
            f'Cell Péclet number [{peclet:.3g}] > {PECLET_UPWIND}; '
            'upwinding the drift.'
        )

    matrices = {}

    def matrix(theta):
        if theta not in matrices:
            matrices[theta] = _implicit_matrix(m, theta * dt, stencil, kappa)
        return matrices[theta]

    values = np.empty((grid.n_t + 1, grid.n_x))
    values[-1] = payoff_g(spec.horizon_t, prices, spec)
    iterations = np.zeros(grid.n_t + 1, dtype=int)

    for step in range(grid.n_t):
        i = grid.n_t - 1 - step
        theta = 1.0 if step < grid.rannacher_steps else grid.theta
        lower, diag, upper = matrix(theta)
        old = values[i + 1]
        obstacle = payoff_g(times[i], prices, spec)

        rhs = old[1:-1].copy()
        if theta < 1:
            explicit = lo * old[:-2] + c * old[1:-1] + up * old[2:]
            rhs += (1 - theta) * dt * explicit
        rhs[0] -= lower[0] * obstacle[0]

        scale = max(1.0, float(np.max(np.abs(obstacle))))
        v = np.maximum(old[1:-1], obstacle[1:-1])
        sweeps, change = psor_sweeps(
            lower,
            diag,
            upper,
            rhs,
            obstacle[1:-1],
            v,
            grid.psor_omega,
            grid.psor_tol * scale,
            grid.psor_max_iter,
        )
        if not (change <= grid.psor_tol * scale):
            raise PsorConvergenceError(change, sweeps, float(times[i]))
        if sweeps > 0.8 * grid.psor_max_iter:
            _logger.warning(
                f'PSOR needed [{sweeps}] of [{grid.psor_max_iter}] sweeps '
                f'at t=[{times[i]:.6g}].'
            )
        iterations[i] = sweeps

        row = values[i]
        row[0] = obstacle[0]
        row[1:-1] = v
        below = v[-2] if m > 1 else obstacle[0]
        row[-1] = max((1 + kappa) * v[-1] - kappa * below, obstacle[-1])

    runtime = _time.perf_counter() - start
    _logger.info(
        f'PDE solved on [{grid.n_x}]x[{grid.n_t}] grid in [{runtime:.3f}] s '
        f'with [{int(iterations.sum())}] PSOR sweeps.'
    )
    return ValueSurface(
        times=times,
        log_prices=log_prices,
        values=values,
        spec=spec,
        grid=grid,
        diagnostics=SolverDiagnostics(
            method='pde',
            psor_iterations=iterations,
            upwinded=upwinded,
            peclet=peclet,
            runtime=runtime,
        ),
    )


def extract_boundary(
    surface: ValueSurface, eps_stop: float = DEFAULT_EPS_STOP
) -> Boundary:
    """Locate the exercise boundary on every time slice before the horizon.

    A node sells if V - G <= eps_stop (1 + |G|). The boundary is the top of
    the contiguous selling block that starts at the lower grid edge, refined
    by linear interpolation of V - G against the threshold between the last
    selling node and the first holding one. Slices where nothing sells
    record 0 and slices where everything sells record +inf.

    A decrease of the curve in time by more than one node spacing is logged
    and recorded in the returned boundary, not repaired.
    """
    regime = classify_regime(surface.spec)
    prices = surface.prices
    times = surface.times[:-1]
    levels = np.empty(len(times))
    for i, t in enumerate(times):
        g = payoff_g(t, prices, surface.spec)
        excess = surface.values[i] - g - eps_stop * (1 + np.abs(g))
        holding = np.flatnonzero(excess > 0)
        if holding.size == 0:
            levels[i] = math.inf
            continue
        k = holding[0]
        if k == 0:
            levels[i] = 0.0
            continue
        d0, d1 = excess[k - 1], excess[k]
        levels[i] = prices[k - 1] + (prices[k] - prices[k - 1]) * (-d0) / (d1 - d0)
    finite = levels[np.isfinite(levels)]
    spacing = (finite.max() if finite.size else 0.0) * math.expm1(surface.dy)
    return Boundary.build(times, levels, regime, tolerance=spacing, source='pde')


@dataclass(frozen=True)
class SmoothFit:
    """Smooth-fit residuals |dV/dx / dG/dx - 1| at the boundary, per time."""

    times: np.ndarray
    residuals: np.ndarray

    def at(self, t: float) -> float:
        """Residual interpolated to time t."""
        return float(np.interp(t, self.times, self.residuals))

    def summary(self) -> dict:
        return {
            'max': float(np.max(self.residuals)),
            'median': float(np.median(self.residuals)),
            'mean': float(np.mean(self.residuals)),
        }


def _slope_at_first_point(x0, f0, x1, f1, x2, f2):
    """Derivative at x0 of the parabola through three points."""
    return (
        f0 * (2 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + f1 * (x0 - x2) / ((x1 - x0) * (x1 - x2))
        + f2 * (x0 - x1) / ((x2 - x0) * (x2 - x1))
    )


def smooth_fit_residual(surface: ValueSurface, boundary: Boundary) -> SmoothFit:
    """Compare dV/dx at the boundary, taken from the holding side, with the
    closed-form dG/dx = (1 - alpha) e^{r (1 - alpha) (T - t)}.

    The derivative is that of the parabola through (b, G(t, b)) and the two
    nearest nodes above b, which is second-order accurate at b. Only interior
    times are reported: t = 0 is dropped.

    Raises:
        RegimeError: There is no free boundary.
        OutOfGridError: The boundary is not inside the grid interior.
    """
    regime = classify_regime(surface.spec)
    if regime is not Regime.FREE_BOUNDARY:
        raise RegimeError(f'No free boundary in regime [{regime.value}].')
    prices = surface.prices
    times = np.asarray(boundary.times, dtype=float)
    interior = times > 0
    times = times[interior]
    levels = np.asarray(boundary.levels, dtype=float)[interior]
    residuals = np.empty(len(times))
    for n, (t, b) in enumerate(zip(times, levels)):
        i = int(np.argmin(np.abs(surface.times - t)))
        k = int(np.searchsorted(prices, b, side='right'))
        if not (math.isfinite(b) and 1 <= k and k + 2 < len(prices)):
            raise OutOfGridError(f'Boundary [{b}] at t=[{t}] is not inside the grid.')
        if prices[k] - b < 1e-3 * (prices[k] - prices[k - 1]):
            k += 1
        row = surface.values[i]
        slope = _slope_at_first_point(
            b,
            payoff_g(t, b, surface.spec),
            prices[k],
            row[k],
            prices[k + 1],
            row[k + 1],
        )
        residuals[n] = abs(slope / payoff_g_dx(t, surface.spec) - 1)
    return SmoothFit(times=times, residuals=residuals)
