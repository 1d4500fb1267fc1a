#!/usr/bin/env python
"""
Command-line front end.

    taxstop solve CONFIG [--out FILE]
    taxstop boundary CONFIG [--csv FILE]
    taxstop simulate CONFIG --policy {now,maturity,boundary} [--paths N] [--seed S]
    taxstop sweep CONFIG --sigma 0.1,0.25,0.4 [--out FILE] [--csv-dir DIR]
    taxstop oracle CONFIG [--out FILE]

Results go to stdout (or the given file), logs to stderr. Exit codes: 0 on
success, 2 for an invalid configuration, 3 when a solver fails and 4 when
the problem is in the wrong regime for the command.
"""
import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List
from typing import Optional

import numpy as np

from .. import __version__
from ..analysis.dispatch import solve
from ..analysis.dispatch import Solution
from ..analysis.dispatch import SolveOptions
from ..analysis.sweep import sigma_sweep
from ..analysis.sweep import SweepReport
from ..analysis.timing import timing_option_value
from ..errors import ConfigError
from ..errors import DomainError
from ..errors import OutOfGridError
from ..errors import ProbabilityRangeError
from ..errors import RegimeError
from ..errors import SolverError
from ..misc.logging import LOG_FILE_MAX_SIZE
from ..misc.logging import taxstop_init_logger
from ..model.payoff import threshold_f
from ..model.spec import classify_regime
from ..model.spec import Regime
from ..montecarlo.policy import BoundaryPolicy
from ..montecarlo.policy import estimate_policy
from ..montecarlo.policy import McEstimate
from ..montecarlo.policy import StopAt
from ..oracle.sigma0 import sigma0_solution
from ..solvers.boundary import Boundary
from ..solvers.boundary import sentinel_level
from ..solvers.lattice import solve_lattice
from ..solvers.pde import SIGMA_MIN_PDE
from ..solvers.pde import smooth_fit_residual
from .config import load_run_config
from .config import override
from .config import RunConfig
from .output import ResultDocument
from .output import save_boundary_csv
from .output import save_json

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_REGIME = 4

POLICIES = ('now', 'maturity', 'boundary')


def _options(config: RunConfig) -> SolveOptions:
    return SolveOptions(grid=config.grid, eps_stop=config.eps_stop)


def _diagnostics(config: RunConfig, solution: Solution) -> dict:
    doc = {'method': solution.method}
    surface = solution.surface
    if surface is not None:
        doc['grid'] = {
            'n_x': config.grid.n_x,
            'n_t': config.grid.n_t,
            's_lo': float(surface.prices[0]),
            's_hi': float(surface.prices[-1]),
        }
        doc['solver'] = surface.diagnostics.to_dict()
    return doc


def cmd_solve(config: RunConfig, workers: Optional[int] = None) -> ResultDocument:
    """Solve the configured problem, cross-check it with the configured
    methods and assemble the result document."""
    spec = config.spec
    runtimes = {}

    start = time.perf_counter()
    solution = solve(spec, _options(config))
    runtimes[solution.method] = time.perf_counter() - start
    v0 = {solution.method: solution.v0}

    smooth_fit = None
    if solution.surface is not None and solution.regime is Regime.FREE_BOUNDARY:
        try:
            smooth_fit = smooth_fit_residual(
                solution.surface, solution.boundary
            ).summary()
        except OutOfGridError as exc:
            _logger.warning(f'No smooth-fit diagnostic: {exc}')

    lattice_skipped = None
    if 'lattice' in config.methods:
        if spec.market.sigma < SIGMA_MIN_PDE:
            _logger.info('Skipping the lattice for a near-deterministic stock.')
            lattice_skipped = {'reason': 'sigma_below_min'}
        else:
            start = time.perf_counter()
            try:
                v0['lattice'] = solve_lattice(spec, config.lattice).value_root
            except ProbabilityRangeError as exc:
                _logger.warning(f'Lattice cross-check skipped: {exc}')
                lattice_skipped = {
                    'reason': 'probability_range',
                    'n_steps': exc.n_steps,
                    'min_steps': exc.min_steps,
                }
            else:
                runtimes['lattice'] = time.perf_counter() - start

    monte_carlo = None
    if 'mc' in config.methods:
        mc = config.mc
        start = time.perf_counter()
        estimate = estimate_policy(
            spec,
            BoundaryPolicy(solution.boundary),
            mc.n_paths,
            mc.n_steps,
            mc.seed,
            antithetic=mc.antithetic,
            estimator=mc.estimator,
            workers=workers,
        )
        runtimes['mc'] = time.perf_counter() - start
        v0['mc'] = estimate.mean
        monte_carlo = estimate.to_dict()

    diagnostics = _diagnostics(config, solution)
    if lattice_skipped is not None:
        diagnostics['lattice_skipped'] = lattice_skipped

    return ResultDocument(
        version=__version__,
        regime=solution.regime.value,
        v0=v0,
        boundary=solution.boundary.to_dict(p0=spec.tax.p0),
        smooth_fit=smooth_fit,
        timing_option=timing_option_value(spec, solution).to_dict(),
        diagnostics=diagnostics,
        config=config.to_dict(),
        runtimes=runtimes,
        monte_carlo=monte_carlo,
    )


def cmd_boundary(config: RunConfig) -> Boundary:
    """The exercise boundary of a free-boundary problem.

    Raises:
        RegimeError: The problem has no free boundary.
    """
    regime = classify_regime(config.spec)
    if regime is not Regime.FREE_BOUNDARY:
        raise RegimeError(
            f'The problem is in regime [{regime.value}], where the boundary is '
            f'the constant [{sentinel_level(regime)}]; there is no free boundary.'
        )
    return solve(config.spec, _options(config)).boundary


def cmd_simulate(
    config: RunConfig, policy: str, workers: Optional[int] = None
) -> McEstimate:
    """Monte Carlo value of selling now, at the horizon or at the solved
    boundary."""
    spec = config.spec
    if policy == 'now':
        rule = StopAt(0.0)
    elif policy == 'maturity':
        rule = StopAt(spec.horizon_t)
    else:
        rule = BoundaryPolicy(solve(spec, _options(config)).boundary)
    mc = config.mc
    return estimate_policy(
        spec,
        rule,
        mc.n_paths,
        mc.n_steps,
        mc.seed,
        antithetic=mc.antithetic,
        estimator=mc.estimator,
        workers=workers,
    )


def cmd_sweep(config: RunConfig, workers: Optional[int] = None) -> SweepReport:
    if not config.sigmas:
        raise ConfigError('sweep.sigma', 'no volatilities given')
    return sigma_sweep(config.spec, config.sigmas, _options(config), workers)


def cmd_oracle(config: RunConfig) -> dict:
    """The sigma = 0 closed form for the configured problem (its sigma is
    ignored)."""
    spec = config.spec
    oracle = sigma0_solution(spec)
    regime = classify_regime(spec)
    times = np.linspace(0.0, spec.horizon_t, config.grid.n_t + 1)[:-1]
    boundary = oracle.boundary(times)
    if regime is Regime.FREE_BOUNDARY:
        terminal = threshold_f(spec)
    else:
        terminal = boundary.final_level()
    return {
        'regime': regime.value,
        'boundary_t0': float(oracle.boundary_at(0.0)),
        'terminal_limit': terminal,
        'v0': float(oracle.value_at(0.0, spec.x0)),
        'stop_decision': oracle.stop_decision(0.0, spec.x0).value,
        'boundary': boundary.to_dict(p0=spec.tax.p0),
        'spec': spec.to_dict(),
    }


def _parse_sigmas(text: str) -> List[float]:
    try:
        return [float(s) for s in text.split(',') if s.strip()]
    except ValueError as exc:
        raise ConfigError('sweep.sigma', f'cannot parse [{text}]') from exc


def _build_parser() -> argparse.ArgumentParser:
    arg_parser = argparse.ArgumentParser(
        prog='taxstop',
        description='Optimal time to sell a stock under linear capital gains '
        'taxes.',
    )
    arg_parser.add_argument(
        '-l',
        '--log',
        default=None,
        help='log to the provided file/directory',
    )
    arg_parser.add_argument(
        '-q', '--quiet', action='store_true', help='disable logging'
    )
    arg_parser.add_argument(
        '-v',
        '--verbosity',
        default='info',
        help='the verbosity of logging to stderr - options are: '
        'debug, info, warning, error',
    )
    arg_parser.add_argument(
        '-w',
        '--workers',
        default=None,
        type=int,
        help='threads for Monte Carlo blocks and sweep points',
    )
    arg_parser.add_argument('--version', action='version', version=__version__)
    commands = arg_parser.add_subparsers(dest='command', required=True)

    solve_parser = commands.add_parser('solve', help='solve and cross-check')
    solve_parser.add_argument('config', help='JSON configuration file')
    solve_parser.add_argument('-o', '--out', default=None, help='output JSON file')

    boundary_parser = commands.add_parser('boundary', help='write b(t) as CSV')
    boundary_parser.add_argument('config', help='JSON configuration file')
    boundary_parser.add_argument('--csv', default=None, help='output CSV file')

    simulate_parser = commands.add_parser(
        'simulate', help='Monte Carlo value of a selling rule'
    )
    simulate_parser.add_argument('config', help='JSON configuration file')
    simulate_parser.add_argument('--policy', choices=POLICIES, default='boundary')
    simulate_parser.add_argument('--paths', type=int, default=None)
    simulate_parser.add_argument('--seed', type=int, default=None)
    simulate_parser.add_argument('-o', '--out', default=None, help='output JSON file')

    sweep_parser = commands.add_parser('sweep', help='volatility sweep')
    sweep_parser.add_argument('config', help='JSON configuration file')
    sweep_parser.add_argument(
        '--sigma', default=None, help='comma separated volatilities'
    )
    sweep_parser.add_argument('-o', '--out', default=None, help='output JSON file')
    sweep_parser.add_argument(
        '--csv-dir', default=None, help='directory for one boundary CSV per sigma'
    )

    oracle_parser = commands.add_parser('oracle', help='sigma = 0 closed form')
    oracle_parser.add_argument('config', help='JSON configuration file')
    oracle_parser.add_argument('-o', '--out', default=None, help='output JSON file')
    return arg_parser


def _init_logging(cmd_args: argparse.Namespace):
    if cmd_args.quiet:
        return
    levels = {
        'debug': logging.DEBUG,
        'info': logging.INFO,
        'warning': logging.WARNING,
        'error': logging.ERROR,
    }
    try:
        log_level = levels[cmd_args.verbosity.lower()]
    except KeyError as exc:
        raise ConfigError(
            'verbosity', f'didn\'t recognize logging level [{cmd_args.verbosity}]'
        ) from exc
    if cmd_args.log:
        taxstop_init_logger(
            log_level,
            log_path=Path(cmd_args.log),
            log_path_level=logging.DEBUG,
            prefix='taxstop',
            file_size=LOG_FILE_MAX_SIZE,
        )
    else:
        taxstop_init_logger(log_level)


def _run(cmd_args: argparse.Namespace):
    config = load_run_config(cmd_args.config)
    workers = cmd_args.workers
    command = cmd_args.command
    if command == 'solve':
        save_json(cmd_args.out, cmd_solve(config, workers).to_dict())
    elif command == 'boundary':
        save_boundary_csv(cmd_args.csv, cmd_boundary(config))
    elif command == 'simulate':
        config = override(config, n_paths=cmd_args.paths, seed=cmd_args.seed)
        estimate = cmd_simulate(config, cmd_args.policy, workers)
        doc = estimate.to_dict()
        doc['spec'] = config.spec.to_dict()
        save_json(cmd_args.out, doc)
    elif command == 'sweep':
        if cmd_args.sigma is not None:
            config = override(config, sigmas=tuple(_parse_sigmas(cmd_args.sigma)))
        report = cmd_sweep(config, workers)
        save_json(cmd_args.out, report.to_dict())
        if cmd_args.csv_dir:
            out_dir = Path(cmd_args.csv_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            for point in report.points:
                if point.ok:
                    name = f'boundary-sigma-{point.sigma:g}.csv'
                    save_boundary_csv(out_dir / name, point.boundary)
    else:
        save_json(cmd_args.out, cmd_oracle(config))


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line.

    Returns:
        The process exit code.
    """
    cmd_args = _build_parser().parse_args(argv)
    try:
        _init_logging(cmd_args)
        _run(cmd_args)
    except (ConfigError, DomainError) as exc:
        print(f'taxstop: configuration error: {exc}', file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f'taxstop: solver failure: {exc}', file=sys.stderr)
        return EXIT_SOLVER
    except RegimeError as exc:
        print(f'taxstop: wrong regime: {exc}', file=sys.stderr)
        return EXIT_REGIME
    return EXIT_OK


def _main():
    sys.exit(main())


if __name__ == '__main__':
    _main()
