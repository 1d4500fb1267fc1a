"""
Volatility sweeps. More volatility can only help the investor (losses are
realised when they occur, gains are deferred), so the value must rise with
sigma and the exercise boundary must fall.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..errors import TaxstopError
from ..misc.parallel import ordered_map
from ..model.spec import ProblemSpec
from ..solvers.boundary import Boundary
from ..solvers.pde import price_domain
from .dispatch import solve
from .dispatch import SolveOptions
from .timing import timing_option_value
from .timing import TimingOptionReport

_logger = logging.getLogger(__name__)

STRICT_MARGIN = 1e-6
"""Relative increase of V between consecutive sigmas required for "strictly"."""


@dataclass(frozen=True)
class SweepPoint:
    sigma: float
    v0: Optional[float] = None
    boundary: Optional[Boundary] = None
    timing: Optional[TimingOptionReport] = None
    method: str = ''
    error: Optional[str] = None
    """Message of the failure if this point could not be solved."""

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        doc = {'sigma': self.sigma, 'method': self.method, 'error': self.error}
        if self.ok:
            doc.update(
                v0=self.v0,
                option_value=self.timing.option_value,
                boundary=self.boundary.levels,
            )
        return doc


@dataclass(frozen=True)
class SweepVerdicts:
    value_nondecreasing: bool
    value_strictly_increasing: bool
    option_increasing: bool
    boundary_nonincreasing: bool
    worst_value_drop: float
    """Largest decrease of V(0, x0) between consecutive sigmas (0 if none)."""
    worst_boundary_rise: float
    """Largest pointwise rise of the boundary beyond its tolerance (0 if none)."""

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SweepReport:
    spec: ProblemSpec
    axis: str
    times: np.ndarray
    """Time grid shared by every boundary."""
    points: List[SweepPoint]
    """Sorted by sigma."""
    verdicts: SweepVerdicts

    @property
    def complete(self) -> bool:
        return all(p.ok for p in self.points)

    def to_dict(self) -> dict:
        return {
            'axis': self.axis,
            'spec': self.spec.to_dict(),
            't': self.times,
            'points': [p.to_dict() for p in self.points],
            'verdicts': self.verdicts.to_dict(),
        }


def _boundary_rise(lower: Boundary, upper: Boundary) -> float:
    """How far the curve for the larger sigma rises above the other one,
    beyond the coarser of the two extraction tolerances."""
    with np.errstate(invalid='ignore'):
        rise = upper.levels - lower.levels
    # equal infinite levels are equal
    rise = np.where(upper.levels == lower.levels, 0.0, rise)
    excess = float(np.max(rise)) - max(lower.tolerance, upper.tolerance)
    return max(excess, 0.0)


def judge(points: Sequence[SweepPoint]) -> SweepVerdicts:
    """Monotonicity verdicts over the successfully solved points."""
    good = [p for p in points if p.ok]
    value_drop = 0.0
    strict = True
    option_up = True
    boundary_rise = 0.0
    for a, b in zip(good, good[1:]):
        value_drop = max(value_drop, a.v0 - b.v0)
        strict &= b.v0 - a.v0 > STRICT_MARGIN * abs(a.v0)
        option_up &= b.timing.option_value > a.timing.option_value
        boundary_rise = max(boundary_rise, _boundary_rise(a.boundary, b.boundary))
    return SweepVerdicts(
        value_nondecreasing=value_drop <= 0.0,
        value_strictly_increasing=strict,
        option_increasing=option_up,
        boundary_nonincreasing=boundary_rise == 0.0,
        worst_value_drop=value_drop,
        worst_boundary_rise=boundary_rise,
    )


def sigma_sweep(
    spec: ProblemSpec,
    sigmas: Sequence[float],
    options: SolveOptions = SolveOptions(),
    workers: Optional[int] = None,
) -> SweepReport:
    """Solve the problem for several volatilities on one shared grid.

    The price domain is fixed by the largest sigma so that every surface and
    boundary lives on the same nodes. sigma = 0 (and anything below the
    finite-difference limit) is served by the closed form.

    Args:
        spec: The problem; its own sigma is ignored.
        sigmas: Volatilities; they are sorted.
        options: Solver options shared by all points.
        workers: Threads for solving points in parallel.

    Returns:
        The report. A point that fails carries its error message and is
        left out of the verdicts.

    Raises:
        DomainError: Empty list or a negative sigma.
    """
    sigmas = sorted(float(s) for s in sigmas)
    if not sigmas:
        raise DomainError(
            '[sweep.sigma] needs at least one volatility', field='sweep.sigma'
        )
    if sigmas[0] < 0:
        raise DomainError(
            f'[sweep.sigma] volatilities must be nonnegative, got [{sigmas[0]}]',
            field='sweep.sigma',
        )
    s_lo, s_hi = price_domain(spec.with_sigma(sigmas[-1]), options.grid)
    shared = dataclasses.replace(
        options, grid=dataclasses.replace(options.grid, s_lo=s_lo, s_hi=s_hi)
    )

    def run(sigma: float) -> SweepPoint:
        point_spec = spec.with_sigma(sigma)
        try:
            solution = solve(point_spec, shared)
        except TaxstopError as exc:
            _logger.error(f'Sweep point sigma=[{sigma}] failed: {exc}')
            return SweepPoint(sigma=sigma, error=str(exc))
        return SweepPoint(
            sigma=sigma,
            v0=solution.v0,
            boundary=solution.boundary,
            timing=timing_option_value(point_spec, solution),
            method=solution.method,
        )

    points = ordered_map(run, sigmas, workers)
    verdicts = judge(points)
    _logger.info(
        f'Swept [{len(points)}] volatilities: value nondecreasing '
        f'[{verdicts.value_nondecreasing}], boundary nonincreasing '
        f'[{verdicts.boundary_nonincreasing}].'
    )
    times = np.linspace(0.0, spec.horizon_t, options.grid.n_t + 1)[:-1]
    return SweepReport(
        spec=spec, axis='sigma', times=times, points=points, verdicts=verdicts
    )
