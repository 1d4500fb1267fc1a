"""
Parameter types for the selling-time problem and the classification of a
problem into one of its three regimes.

All rates are annualised and continuously compounded. Times are in years.
"""
import dataclasses
import enum
import math
from dataclasses import dataclass

from ..errors import DomainError


def _require(condition: bool, field: str, message: str):
    if not condition:
        raise DomainError(f'[{field}] {message}', field=field)


@dataclass(frozen=True)
class MarketParams:
    """Stock and bank account: dX = mu X dt + sigma X dB, bank rate r."""

    mu: float
    """Drift of the stock (per year)."""
    sigma: float
    """Volatility of the stock (per square-root year)."""
    r: float
    """Riskless rate (per year), before tax."""

    def __post_init__(self):
        _require(math.isfinite(self.mu), 'market.mu', 'must be finite')
        _require(
            math.isfinite(self.sigma) and self.sigma >= 0,
            'market.sigma',
            f'must be a nonnegative number, got [{self.sigma}]',
        )
        _require(
            math.isfinite(self.r) and self.r >= 0,
            'market.r',
            f'must be a nonnegative number, got [{self.r}]',
        )


@dataclass(frozen=True)
class TaxParams:
    """Linear capital gains tax: selling at price x costs alpha (x - p0)."""

    alpha: float
    """Tax rate in [0, 1). Losses earn a credit at the same rate."""
    p0: float
    """Purchase price, i.e. the tax basis."""

    def __post_init__(self):
        _require(
            0 <= self.alpha < 1,
            'tax.alpha',
            f'must lie in [0, 1), got [{self.alpha}]',
        )
        _require(
            math.isfinite(self.p0) and self.p0 > 0,
            'tax.p0',
            f'must be positive, got [{self.p0}]',
        )


@dataclass(frozen=True)
class ProblemSpec:
    """One fully parameterised stopping problem."""

    market: MarketParams
    tax: TaxParams
    horizon_t: float
    """Time horizon T (years); the stock is liquidated at T anyway."""
    x0: float
    """Stock price at time 0."""

    def __post_init__(self):
        _require(
            math.isfinite(self.horizon_t) and self.horizon_t > 0,
            'horizon_t',
            f'must be positive, got [{self.horizon_t}]',
        )
        _require(
            math.isfinite(self.x0) and self.x0 > 0,
            'x0',
            f'must be positive, got [{self.x0}]',
        )

    @classmethod
    def create(
        cls,
        mu: float,
        sigma: float,
        r: float,
        alpha: float,
        p0: float,
        horizon_t: float,
        x0: float,
    ) -> 'ProblemSpec':
        """Build a spec from flat values."""
        return cls(
            market=MarketParams(mu=mu, sigma=sigma, r=r),
            tax=TaxParams(alpha=alpha, p0=p0),
            horizon_t=horizon_t,
            x0=x0,
        )

    def with_sigma(self, sigma: float) -> 'ProblemSpec':
        """Return a copy of this spec with a different volatility."""
        return dataclasses.replace(
            self, market=dataclasses.replace(self.market, sigma=sigma)
        )

    def to_dict(self) -> dict:
        return {
            'market': dataclasses.asdict(self.market),
            'tax': dataclasses.asdict(self.tax),
            'horizon_t': self.horizon_t,
            'x0': self.x0,
        }


class Regime(enum.Enum):
    """Shape of the stopping region."""

    SELL_IMMEDIATELY = 'sell_immediately'
    """mu <= (1 - alpha) r: the running payoff is never positive."""
    HOLD_TO_MATURITY = 'hold_to_maturity'
    """alpha = 0 and mu > r: never sell before T."""
    FREE_BOUNDARY = 'free_boundary'
    """alpha > 0 and mu > (1 - alpha) r: sell once the price falls to b(t)."""


def classify_regime(spec: ProblemSpec) -> Regime:
    """Classify a problem into its regime.

    Args:
        spec: The problem.

    Returns:
        :py:attr:`Regime.SELL_IMMEDIATELY` if mu <= (1 - alpha) r,
        otherwise :py:attr:`Regime.HOLD_TO_MATURITY` when there is no tax and
        :py:attr:`Regime.FREE_BOUNDARY` when there is.
    """
    mu = spec.market.mu
    alpha = spec.tax.alpha
    if mu <= (1 - alpha) * spec.market.r:
        return Regime.SELL_IMMEDIATELY
    if alpha == 0:
        return Regime.HOLD_TO_MATURITY
    return Regime.FREE_BOUNDARY
