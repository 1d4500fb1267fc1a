from .boundary import Boundary
from .boundary import sentinel_level
from .lattice import extract_boundary_lattice
from .lattice import LatticeConfig
from .lattice import LatticeSolution
from .lattice import solve_lattice
from .pde import extract_boundary
from .pde import GridConfig
from .pde import price_domain
from .pde import SmoothFit
from .pde import smooth_fit_residual
from .pde import solve_pde
from .pde import SolverDiagnostics
from .pde import ValueSurface
