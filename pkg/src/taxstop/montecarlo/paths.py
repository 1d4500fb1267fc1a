"""
Exact simulation of geometric Brownian motion on a uniform time grid.

Randomness comes in fixed blocks of :py:data:`BLOCK_ROWS` rows of standard
normals. Block k is drawn from its own counter-based Philox stream keyed by
(k, seed), so any range of rows can be generated without touching the rows
before it, and a batch comes out bit-identical however it is split between
threads. With antithetic sampling a row feeds a pair of paths, path 2j using
+Z and path 2j+1 using -Z; otherwise a row is a single path.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..misc.parallel import ordered_map
from ..model.spec import ProblemSpec

_logger = logging.getLogger(__name__)

BLOCK_ROWS = 512
"""Rows of normals per random substream."""

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class PathBatch:
    """A set of simulated price paths."""

    spec: ProblemSpec
    n_paths: int
    n_steps: int
    seed: int
    antithetic: bool
    times: np.ndarray
    """Uniform grid 0 = t_0 < ... < t_{n_steps} = T."""
    prices: np.ndarray
    """prices[p, i] = X_{t_i} on path p; prices[:, 0] = x0."""
    first_path: int = 0
    """Index of the first path within the full stream (nonzero for chunks)."""


def _reject(field: str, message: str):
    raise DomainError(f'[{field}] {message}', field=field)


def check_simulation_args(n_paths: int, n_steps: int, seed: int, antithetic: bool):
    if not isinstance(n_paths, (int, np.integer)) or n_paths < 2:
        _reject('mc.n_paths', f'must be an integer >= 2, got [{n_paths}]')
    if antithetic and n_paths % 2:
        _reject('mc.n_paths', f'must be even for antithetic pairs, got [{n_paths}]')
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 1:
        _reject('mc.n_steps', f'must be a positive integer, got [{n_steps}]')
    if not isinstance(seed, (int, np.integer)) or not 0 <= seed < _SEED_LIMIT:
        _reject('mc.seed', f'must be an integer in [0, 2^64), got [{seed}]')


def block_generator(block: int, seed: int) -> np.random.Generator:
    """Generator for one block of rows."""
    return np.random.Generator(np.random.Philox(key=(int(block) << 64) | int(seed)))


def normal_rows(start: int, stop: int, n_steps: int, seed: int) -> np.ndarray:
    """Rows [start, stop) of the normal stream for a seed.

    A partial block draws only the rows it needs; since rows are filled in
    order, they coincide with the leading rows of the full block.
    """
    out = np.empty((stop - start, n_steps))
    first_block = start // BLOCK_ROWS
    last_block = (stop - 1) // BLOCK_ROWS
    for block in range(first_block, last_block + 1):
        lo = block * BLOCK_ROWS
        need = min(stop, lo + BLOCK_ROWS) - lo
        z = block_generator(block, seed).standard_normal((need, n_steps))
        skip = max(start - lo, 0)
        out[lo + skip - start : lo + need - start] = z[skip:]
    return out


def time_grid(spec: ProblemSpec, n_steps: int) -> np.ndarray:
    return np.linspace(0.0, spec.horizon_t, n_steps + 1)


def simulate_rows(
    spec: ProblemSpec, start: int, stop: int, n_steps: int, seed: int, antithetic: bool
) -> np.ndarray:
    """Price paths for rows [start, stop) of the normal stream."""
    market = spec.market
    times = time_grid(spec, n_steps)
    z = normal_rows(start, stop, n_steps, seed)
    if antithetic:
        # interleave +Z / -Z so that pairs are adjacent
        z = np.stack([z, -z], axis=1).reshape(-1, n_steps)
    walk = np.zeros((z.shape[0], n_steps + 1))
    walk[:, 1:] = np.cumsum(z, axis=1)
    drift = (market.mu - 0.5 * market.sigma**2) * times
    diffusion = market.sigma * math.sqrt(spec.horizon_t / n_steps) * walk
    return spec.x0 * np.exp(drift + diffusion)


def rows_for(n_paths: int, antithetic: bool) -> int:
    return n_paths // 2 if antithetic else n_paths


def simulate_paths(
    spec: ProblemSpec,
    n_paths: int,
    n_steps: int,
    seed: int,
    antithetic: bool = True,
    workers: int = 1,
) -> PathBatch:
    """Simulate GBM paths with exact log-normal transitions

        X_{t+dt} = X_t exp((mu - sigma^2 / 2) dt + sigma sqrt(dt) Z).

    Args:
        spec: The problem (x0, mu, sigma and T are used).
        n_paths: Number of paths; even when :code:`antithetic`.
        n_steps: Number of time steps.
        seed: 64-bit seed.
        antithetic: Pair every path with its mirror image.
        workers: Threads used to generate blocks. The result does not
            depend on it.

    Raises:
        DomainError: Invalid path count, step count or seed.
    """
    check_simulation_args(n_paths, n_steps, seed, antithetic)
    n_rows = rows_for(n_paths, antithetic)
    starts = range(0, n_rows, BLOCK_ROWS)
    parts = ordered_map(
        lambda s: simulate_rows(
            spec, s, min(s + BLOCK_ROWS, n_rows), n_steps, seed, antithetic
        ),
        starts,
        workers,
    )
    _logger.debug(
        f'Simulated [{n_paths}] paths x [{n_steps}] steps with seed [{seed}].'
    )
    return PathBatch(
        spec=spec,
        n_paths=n_paths,
        n_steps=n_steps,
        seed=seed,
        antithetic=antithetic,
        times=time_grid(spec, n_steps),
        prices=np.concatenate(parts, axis=0),
    )
