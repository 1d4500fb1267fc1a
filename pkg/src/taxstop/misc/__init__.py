from .logging import LOG_FILE_MAX_SIZE
from .logging import taxstop_init_logger
from .parallel import default_workers
from .parallel import ordered_map
