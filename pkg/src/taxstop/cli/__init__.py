from .config import load_run_config
from .config import McConfig
from .config import parse_run_config
from .config import RunConfig
from .output import ResultDocument
from .output import save_boundary_csv
from .output import save_json
