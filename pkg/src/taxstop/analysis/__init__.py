from .convergence import grid_refinement
from .convergence import GridLevel
from .convergence import lattice_refinement
from .convergence import LatticeRefinement
from .dispatch import solve
from .dispatch import Solution
from .dispatch import SolveOptions
from .sweep import sigma_sweep
from .sweep import SweepPoint
from .sweep import SweepReport
from .sweep import SweepVerdicts
from .timing import benchmark_wealth
from .timing import timing_option_value
from .timing import TimingOptionReport
