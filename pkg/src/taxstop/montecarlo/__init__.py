from .dynkin import dynkin_check
from .dynkin import DynkinResidual
from .paths import PathBatch
from .paths import simulate_paths
from .policy import BoundaryPolicy
from .policy import estimate_policy
from .policy import evaluate_policy
from .policy import McEstimate
from .policy import StopAt
from .policy import StoppingPolicy
