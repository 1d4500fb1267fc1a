from .sigma0 import boundary_sigma0
from .sigma0 import Sigma0Solution
from .sigma0 import sigma0_solution
from .sigma0 import stop_time_sigma0
from .sigma0 import StopDecision
from .sigma0 import value_sigma0
