"""
Value of being free to choose when the capital gain is taxed.

The benchmark investor pays the tax now and then holds the better of the
stock and the bank, with the tax on all later gains financed by reducing
the position. Its expected horizon wealth is

    [(1 - alpha) x0 + alpha p0] e^{(1 - alpha) max(mu, r) T},

and the timing option is the discounted excess of V(0, x0) over it.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Union

from ..errors import SpecMismatchError
from ..model.payoff import payoff_g
from ..model.spec import ProblemSpec
from .dispatch import Solution

_logger = logging.getLogger(__name__)

NEGATIVE_TOLERANCE = 1e-6
"""Relative size of a negative option value that is put down to numerics."""


@dataclass(frozen=True)
class TimingOptionReport:
    v0: float
    benchmark: float
    option_value: float
    """e^{-r (1 - alpha) T} (v0 - benchmark)."""
    method: str = ''
    """Where v0 came from."""

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def benchmark_wealth(spec: ProblemSpec) -> float:
    """Expected horizon wealth of the immediate-taxation benchmark."""
    market = spec.market
    # same arithmetic as G with the bank rate replaced by max(mu, r), so the
    # degenerate cases cancel exactly
    better = dataclasses.replace(
        spec, market=dataclasses.replace(market, r=max(market.mu, market.r))
    )
    return float(payoff_g(0.0, spec.x0, better))


def timing_option_value(
    spec: ProblemSpec, v0: Union[float, Solution], method: str = ''
) -> TimingOptionReport:
    """Value of the timing option.

    Args:
        spec: The problem.
        v0: V(0, x0), or a :py:class:`Solution` of the same problem.
        method: Provenance label for a bare number.

    Raises:
        SpecMismatchError: The solution belongs to another problem.
    """
    if isinstance(v0, Solution):
        if v0.spec != spec:
            raise SpecMismatchError(
                'The solution was computed for a different problem than the one '
                'given.'
            )
        method = v0.method
        v0 = v0.v0
    benchmark = benchmark_wealth(spec)
    discount = math.exp(-spec.market.r * (1 - spec.tax.alpha) * spec.horizon_t)
    option = discount * (v0 - benchmark)
    if option < -NEGATIVE_TOLERANCE * benchmark:
        _logger.warning(
            f'Timing option [{option:.6g}] is negative beyond tolerance '
            f'(v0 [{v0:.10g}] from [{method}]).'
        )
    return TimingOptionReport(
        v0=float(v0), benchmark=benchmark, option_value=option, method=method
    )
