from .payoff import lipschitz_bound
from .payoff import payoff_g
from .payoff import payoff_g_dx
from .payoff import running_payoff_f
from .payoff import threshold_f
from .spec import classify_regime
from .spec import MarketParams
from .spec import ProblemSpec
from .spec import Regime
from .spec import TaxParams
