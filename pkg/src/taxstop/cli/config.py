"""
JSON run configuration.

Example::

    {
        "market": {"mu": 0.026, "sigma": 0.25, "r": 0.03},
        "tax": {"alpha": 0.3, "p0": 100},
        "horizon_t": 3,
        "x0": 180,
        "grid": {"n_x": 801, "n_t": 600},
        "lattice": {"n_steps": 2000},
        "mc": {"n_paths": 1000000, "n_steps": 600, "seed": 1},
        "methods": ["lattice", "mc"]
    }

Only the problem keys are required. Every value is checked when the file
is read, and errors name the offending key by its dotted path.
"""
import dataclasses
import json
import logging
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Optional
from typing import Tuple
from typing import Union

from ..errors import ConfigError
from ..errors import DomainError
from ..model.spec import MarketParams
from ..model.spec import ProblemSpec
from ..model.spec import TaxParams
from ..montecarlo.paths import check_simulation_args
from ..montecarlo.policy import ESTIMATORS
from ..solvers.lattice import LatticeConfig
from ..solvers.pde import DEFAULT_EPS_STOP
from ..solvers.pde import GridConfig

_logger = logging.getLogger(__name__)

METHODS = ('lattice', 'mc')
"""Cross-check methods that can run next to the main solver."""


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 100_000
    n_steps: int = 600
    seed: int = 0
    antithetic: bool = True
    estimator: str = 'payoff'

    def __post_init__(self):
        check_simulation_args(self.n_paths, self.n_steps, self.seed, self.antithetic)
        if self.estimator not in ESTIMATORS:
            raise DomainError(
                f'[mc.estimator] must be one of {list(ESTIMATORS)}, '
                f'got [{self.estimator}]',
                field='mc.estimator',
            )


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation of the command-line tool needs."""

    spec: ProblemSpec
    grid: GridConfig = field(default_factory=GridConfig)
    eps_stop: float = DEFAULT_EPS_STOP
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    mc: McConfig = field(default_factory=McConfig)
    methods: Tuple[str, ...] = ('lattice',)
    sigmas: Tuple[float, ...] = ()
    """Volatilities for the sweep command."""

    def to_dict(self) -> dict:
        """The fully resolved configuration, in the input format."""
        grid = dataclasses.asdict(self.grid)
        grid['eps_stop'] = self.eps_stop
        doc = self.spec.to_dict()
        doc.update(
            grid=grid,
            lattice=dataclasses.asdict(self.lattice),
            mc=dataclasses.asdict(self.mc),
            methods=list(self.methods),
        )
        if self.sigmas:
            doc['sweep'] = {'sigma': list(self.sigmas)}
        return doc


_Schema = Dict[str, Any]

_NUMBER = 'number'
_INT = 'integer'
_BOOL = 'boolean'
_STR = 'string'
_OPT_NUMBER = 'number or null'

_SCHEMA: _Schema = {
    'market': {'mu': _NUMBER, 'sigma': _NUMBER, 'r': _NUMBER},
    'tax': {'alpha': _NUMBER, 'p0': _NUMBER},
    'horizon_t': _NUMBER,
    'x0': _NUMBER,
    'grid': {
        'n_x': _INT,
        'n_t': _INT,
        's_lo': _OPT_NUMBER,
        's_hi': _OPT_NUMBER,
        'theta': _NUMBER,
        'psor_tol': _NUMBER,
        'psor_omega': _NUMBER,
        'psor_max_iter': _INT,
        'rannacher_steps': _INT,
        'eps_stop': _NUMBER,
    },
    'lattice': {'n_steps': _INT},
    'mc': {
        'n_paths': _INT,
        'n_steps': _INT,
        'seed': _INT,
        'antithetic': _BOOL,
        'estimator': _STR,
    },
    'methods': 'list',
    'sweep': {'sigma': 'list'},
}

_REQUIRED = (
    'market.mu',
    'market.sigma',
    'market.r',
    'tax.alpha',
    'tax.p0',
    'horizon_t',
    'x0',
)


def _type_ok(kind: str, value: Any) -> bool:
    is_bool = isinstance(value, bool)
    if kind == _NUMBER:
        return isinstance(value, (int, float)) and not is_bool
    if kind == _OPT_NUMBER:
        return value is None or (isinstance(value, (int, float)) and not is_bool)
    if kind == _INT:
        return isinstance(value, int) and not is_bool
    if kind == _BOOL:
        return is_bool
    if kind == _STR:
        return isinstance(value, str)
    return isinstance(value, list)


def _check(schema: _Schema, doc: Any, prefix: str = ''):
    if not isinstance(doc, dict):
        raise ConfigError(prefix.rstrip('.') or '<root>', 'must be an object')
    for key, value in doc.items():
        path = prefix + key
        if key not in schema:
            raise ConfigError(path, 'unknown key')
        kind = schema[key]
        if isinstance(kind, dict):
            _check(kind, value, path + '.')
        elif not _type_ok(kind, value):
            raise ConfigError(path, f'must be a {kind}, got [{value!r}]')


def _get(doc: dict, path: str, default: Any = None) -> Any:
    node: Any = doc
    for key in path.split('.'):
        if not isinstance(node, dict) or key not in node:
            return default
        node = node[key]
    return node


def _section(doc: dict, name: str) -> dict:
    return dict(doc.get(name, {}))


def _as_config_error(exc: DomainError) -> ConfigError:
    name = exc.field or '<root>'
    return ConfigError(name, str(exc).removeprefix(f'[{name}] '))


def parse_run_config(doc: dict) -> RunConfig:
    """Validate a configuration document and build a :py:class:`RunConfig`.

    Raises:
        ConfigError: Unknown or missing key, wrong type or a value outside
            its domain. :code:`field` holds the dotted key path.
    """
    _check(_SCHEMA, doc)
    for path in _REQUIRED:
        if _get(doc, path) is None:
            raise ConfigError(path, 'is required')
    try:
        spec = ProblemSpec(
            market=MarketParams(**doc['market']),
            tax=TaxParams(**doc['tax']),
            horizon_t=doc['horizon_t'],
            x0=doc['x0'],
        )
        grid_doc = _section(doc, 'grid')
        eps_stop = grid_doc.pop('eps_stop', DEFAULT_EPS_STOP)
        if not eps_stop > 0:
            raise DomainError(
                '[grid.eps_stop] must be positive', field='grid.eps_stop'
            )
        grid = GridConfig(**grid_doc)
        lattice = LatticeConfig(**_section(doc, 'lattice'))
        mc = McConfig(**_section(doc, 'mc'))
    except DomainError as exc:
        raise _as_config_error(exc) from exc

    methods = tuple(doc.get('methods', ('lattice',)))
    for method in methods:
        if method not in METHODS:
            raise ConfigError(
                'methods', f'unknown method [{method}], expected {list(METHODS)}'
            )
    sigmas = tuple(_get(doc, 'sweep.sigma', ()))
    for sigma in sigmas:
        if not _type_ok(_NUMBER, sigma) or sigma < 0:
            raise ConfigError(
                'sweep.sigma', f'must hold nonnegative numbers, got [{sigma!r}]'
            )
    return RunConfig(
        spec=spec,
        grid=grid,
        eps_stop=eps_stop,
        lattice=lattice,
        mc=mc,
        methods=methods,
        sigmas=tuple(float(s) for s in sigmas),
    )


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a JSON configuration file.

    Raises:
        ConfigError: Unreadable file, invalid JSON or invalid content.
    """
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as exc:
        raise ConfigError('<file>', f'cannot read [{path}]: {exc.strerror}') from exc
    except json.JSONDecodeError as exc:
        raise ConfigError('<file>', f'invalid JSON in [{path}]: {exc}') from exc
    config = parse_run_config(doc)
    _logger.debug(f'Loaded configuration [{path}].')
    return config


def override(config: RunConfig, **changes: Optional[Any]) -> RunConfig:
    """Apply command-line overrides; None means "not given"."""
    mc_changes = {
        key: changes.pop(key)
        for key in ('n_paths', 'seed')
        if changes.get(key) is not None
    }
    changes = {k: v for k, v in changes.items() if v is not None}
    try:
        if mc_changes:
            changes['mc'] = dataclasses.replace(config.mc, **mc_changes)
    except DomainError as exc:
        raise _as_config_error(exc) from exc
    return dataclasses.replace(config, **changes)
