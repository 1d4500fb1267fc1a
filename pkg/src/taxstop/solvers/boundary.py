"""
The exercise boundary b(t): sell the first time the price is at or below it.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..model.spec import Regime

_logger = logging.getLogger(__name__)


def _largest_drop(levels: np.ndarray) -> float:
    """Largest amount by which the curve falls below its running maximum."""
    finite = levels[np.isfinite(levels)]
    if finite.size < 2:
        return 0.0
    drops = np.maximum.accumulate(finite) - finite
    return float(drops.max())


@dataclass(frozen=True)
class Boundary:
    """Time-indexed exercise curve.

    :code:`levels[i]` is b(times[i]). A level of 0 means "never sell" at that
    time and :code:`math.inf` means "always sell". The horizon itself is not
    part of the curve, since everything is sold there.
    """

    times: np.ndarray
    levels: np.ndarray
    regime: Regime
    max_violation: float = 0.0
    """Largest decrease of the curve in time. The true boundary is increasing."""
    tolerance: float = 0.0
    """Decreases up to this size are attributed to discretisation."""
    source: str = ''
    """Which method produced the curve (pde, lattice, sigma0, analytic)."""

    @classmethod
    def build(
        cls,
        times: np.ndarray,
        levels: np.ndarray,
        regime: Regime,
        tolerance: float = 0.0,
        source: str = '',
    ) -> 'Boundary':
        """Create a boundary and record how well it respects monotonicity.

        Violations beyond :code:`tolerance` are logged, not repaired.
        """
        times = np.asarray(times, dtype=float)
        levels = np.asarray(levels, dtype=float)
        if times.shape != levels.shape:
            raise ValueError(
                f'times {times.shape} and levels {levels.shape} must match.'
            )
        violation = _largest_drop(levels)
        if violation > tolerance:
            _logger.warning(
                f'[{source}] boundary decreases by [{violation:.6g}] in time, '
                f'more than the tolerance [{tolerance:.6g}].'
            )
        return cls(
            times=times,
            levels=levels,
            regime=regime,
            max_violation=violation,
            tolerance=tolerance,
            source=source,
        )

    @classmethod
    def constant(
        cls, times: np.ndarray, level: float, regime: Regime, source: str = 'analytic'
    ) -> 'Boundary':
        """A flat curve, used for the sentinels of the degenerate regimes."""
        times = np.asarray(times, dtype=float)
        return cls(
            times=times,
            levels=np.full(times.shape, level, dtype=float),
            regime=regime,
            source=source,
        )

    @property
    def monotone(self) -> bool:
        """True if the curve is nondecreasing up to the tolerance."""
        return self.max_violation <= self.tolerance

    def level_at(self, t: float) -> float:
        """Boundary level in force at time t (the last node at or before t)."""
        idx = int(np.searchsorted(self.times, t, side='right')) - 1
        if idx < 0:
            raise ValueError(f'Time [{t}] is before the first boundary node.')
        return float(self.levels[idx])

    def resample(self, times: np.ndarray) -> np.ndarray:
        """Step-interpolate the curve onto other times (previous node wins).

        Times before the first node take the first level.
        """
        idx = np.searchsorted(self.times, np.asarray(times, dtype=float), side='right')
        idx = np.clip(idx - 1, 0, len(self.times) - 1)
        return self.levels[idx]

    def above(self, level: float) -> bool:
        """True if the curve lies strictly above a price level at every node."""
        return bool(np.all(self.levels > level))

    def final_level(self) -> float:
        """Level at the last node before the horizon."""
        return float(self.levels[-1])

    def to_dict(self, p0: Optional[float] = None) -> dict:
        doc = {
            'source': self.source,
            'regime': self.regime.value,
            't': self.times,
            'boundary': self.levels,
            'monotone': self.monotone,
            'max_violation': self.max_violation,
        }
        if p0 is not None:
            doc['above_purchase_price'] = self.above(p0)
        return doc


def sentinel_level(regime: Regime) -> Optional[float]:
    """Boundary level implied by a degenerate regime, or None for a free
    boundary."""
    if regime is Regime.SELL_IMMEDIATELY:
        return math.inf
    if regime is Regime.HOLD_TO_MATURITY:
        return 0.0
    return None
