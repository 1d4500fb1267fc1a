__version__ = '0.1.0'

from .analysis import grid_refinement
from .analysis import lattice_refinement
from .analysis import sigma_sweep
from .analysis import solve
from .analysis import Solution
from .analysis import SolveOptions
from .analysis import SweepReport
from .analysis import timing_option_value
from .analysis import TimingOptionReport
from .errors import ConfigError
from .errors import DomainError
from .errors import RegimeError
from .errors import SolverError
from .errors import SpecMismatchError
from .errors import TaxstopError
from .misc import ordered_map
from .misc import taxstop_init_logger
from .model import classify_regime
from .model import lipschitz_bound
from .model import MarketParams
from .model import payoff_g
from .model import payoff_g_dx
from .model import ProblemSpec
from .model import Regime
from .model import running_payoff_f
from .model import TaxParams
from .model import threshold_f
from .montecarlo import BoundaryPolicy
from .montecarlo import dynkin_check
from .montecarlo import estimate_policy
from .montecarlo import evaluate_policy
from .montecarlo import McEstimate
from .montecarlo import simulate_paths
from .montecarlo import StopAt
from .oracle import boundary_sigma0
from .oracle import sigma0_solution
from .oracle import stop_time_sigma0
from .oracle import value_sigma0
from .solvers import Boundary
from .solvers import extract_boundary
from .solvers import extract_boundary_lattice
from .solvers import GridConfig
from .solvers import LatticeConfig
from .solvers import smooth_fit_residual
from .solvers import solve_lattice
from .solvers import solve_pde
from .solvers import ValueSurface
