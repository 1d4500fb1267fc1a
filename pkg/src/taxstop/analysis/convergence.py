"""
Refinement studies for the two deterministic solvers.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Sequence

import numpy as np

from ..errors import RegimeError
from ..misc.parallel import ordered_map
from ..model.spec import classify_regime
from ..model.spec import ProblemSpec
from ..model.spec import Regime
from ..solvers.lattice import LatticeConfig
from ..solvers.lattice import solve_lattice
from ..solvers.pde import DEFAULT_EPS_STOP
from ..solvers.pde import extract_boundary
from ..solvers.pde import GridConfig
from ..solvers.pde import price_domain
from ..solvers.pde import SmoothFit
from ..solvers.pde import smooth_fit_residual
from ..solvers.pde import solve_pde

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridLevel:
    grid: GridConfig
    v0: float
    final_boundary: float
    """Boundary at the last time node before the horizon."""
    smooth_fit: Optional[SmoothFit]
    """None outside the free-boundary regime."""

    def to_dict(self) -> dict:
        return {
            'n_x': self.grid.n_x,
            'n_t': self.grid.n_t,
            'v0': self.v0,
            'final_boundary': self.final_boundary,
            'smooth_fit': self.smooth_fit.summary() if self.smooth_fit else None,
        }


def grid_refinement(
    spec: ProblemSpec,
    grids: Sequence[GridConfig],
    eps_stop: float = DEFAULT_EPS_STOP,
    workers: Optional[int] = None,
) -> List[GridLevel]:
    """Solve the same problem on several grids.

    All grids are put on the price domain of the first one so that only the
    resolution changes.
    """
    s_lo, s_hi = price_domain(spec, grids[0])
    grids = [dataclasses.replace(g, s_lo=s_lo, s_hi=s_hi) for g in grids]
    free = classify_regime(spec) is Regime.FREE_BOUNDARY

    def run(grid: GridConfig) -> GridLevel:
        surface = solve_pde(spec, grid)
        boundary = extract_boundary(surface, eps_stop)
        fit = None
        if free:
            try:
                fit = smooth_fit_residual(surface, boundary)
            except RegimeError:
                fit = None
        return GridLevel(
            grid=grid,
            v0=surface.value_at(0.0, spec.x0),
            final_boundary=boundary.final_level(),
            smooth_fit=fit,
        )

    levels = ordered_map(run, grids, workers)
    for level in levels:
        _logger.info(
            f'Grid [{level.grid.n_x}]x[{level.grid.n_t}]: V0 [{level.v0:.10g}], '
            f'final boundary [{level.final_boundary:.6g}].'
        )
    return levels


@dataclass(frozen=True)
class LatticeRefinement:
    steps: np.ndarray
    values: np.ndarray
    """V(0, x0) per step count."""

    @property
    def differences(self) -> np.ndarray:
        """|V(N_{k+1}) - V(N_k)| between successive step counts."""
        return np.abs(np.diff(self.values))

    def to_dict(self) -> dict:
        return {
            'steps': self.steps,
            'values': self.values,
            'differences': self.differences,
        }


def lattice_refinement(
    spec: ProblemSpec, steps: Sequence[int], workers: Optional[int] = None
) -> LatticeRefinement:
    """Lattice values for increasing step counts."""
    steps = sorted(int(n) for n in steps)
    values = ordered_map(
        lambda n: solve_lattice(spec, LatticeConfig(n_steps=n)).value_root,
        steps,
        workers,
    )
    return LatticeRefinement(steps=np.array(steps), values=np.array(values))
