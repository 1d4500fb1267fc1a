"""
Exceptions raised by taxstop. Everything derives from
:py:class:`TaxstopError`, so callers that only care about "it failed" can
catch a single type. The command-line front end maps the branches of this
hierarchy onto process exit codes.
"""
from typing import Optional


class TaxstopError(Exception):
    """Base class for all taxstop failures."""

    def __init__(self, *args, **kwargs):
        """
        Args:
            args: Arguments to pass to super class Exception().
            kwargs: Keyword arguments to pass to super class Exception().
        """
        # override this so that the docs don't the print superclass docstring
        super().__init__(*args, **kwargs)


class DomainError(TaxstopError, ValueError):
    """Raised when a model parameter or an evaluation point lies outside the
    domain of the problem, e.g. a tax rate of 1 or a time after the horizon."""

    def __init__(self, message: str, field: Optional[str] = None):
        """
        Args:
            message: Description of the violation.
            field: Dotted name of the offending parameter, if there is one
                (e.g. :code:`'tax.alpha'`).
        """
        super().__init__(message)
        self.field = field


class RegimeError(TaxstopError):
    """Raised when an operation only makes sense in a regime the problem is
    not in, e.g. asking for the smooth-fit residual when there is no free
    boundary."""


class ConfigError(TaxstopError):
    """Raised for an invalid run configuration."""

    def __init__(self, field: str, message: str):
        """
        Args:
            field: Dotted path of the offending configuration key, e.g.
                :code:`'tax.alpha'`.
            message: What is wrong with it.
        """
        super().__init__(f'[{field}] {message}')
        self.field = field


class SolverError(TaxstopError):
    """Raised when a numerical method fails to produce a trustworthy answer."""


class ProbabilityRangeError(SolverError):
    """Raised when the lattice transition probability falls outside (0, 1)."""

    def __init__(self, p: float, n_steps: int, min_steps: Optional[int]):
        """
        Args:
            p: The offending up-move probability.
            n_steps: The requested number of time steps.
            min_steps: The smallest number of steps that brings p into (0, 1),
                or None if none was found.
        """
        hint = (
            f' Use at least [{min_steps}] steps.'
            if min_steps is not None
            else ' No step count fixes this.'
        )
        super().__init__(
            f'Lattice probability [{p}] is outside (0, 1) with [{n_steps}] steps.'
            + hint
        )
        self.p = p
        self.n_steps = n_steps
        self.min_steps = min_steps


class PsorConvergenceError(SolverError):
    """Raised when projected SOR does not reach its tolerance."""

    def __init__(self, residual: float, iterations: int, time: float):
        """
        Args:
            residual: Size of the last update when the solver gave up.
            iterations: Number of sweeps performed.
            time: The time node being solved for.
        """
        super().__init__(
            f'PSOR did not converge at t=[{time}] after [{iterations}] sweeps '
            f'(last update [{residual:.3e}]).'
        )
        self.residual = residual
        self.iterations = iterations
        self.time = time


class GridTooCoarseError(SolverError):
    """Raised when the discretised operator loses diagonal dominance, which
    means the time step is too large for the price grid."""


class OutOfGridError(SolverError, ValueError):
    """Raised when a value surface is queried outside the grid it was
    computed on."""


class SpecMismatchError(TaxstopError):
    """Raised when a result computed for one problem is combined with a
    different problem."""
