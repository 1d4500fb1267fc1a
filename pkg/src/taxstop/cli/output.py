"""
Writers for the command-line results: JSON documents and plot-ready CSV.
"""
import enum
import json
import sys
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Optional
from typing import TextIO
from typing import Union

import numpy as np

from ..solvers.boundary import Boundary

CSV_FORMAT = '%.9g'
"""Nine significant digits, enough to read a double back to 1e-9."""


class _NumpyEncoder(json.JSONEncoder):
    """For converting numpy types to python types so that they can be written to JSON:
    https://stackoverflow.com/questions/26646362/numpy-array-is-not-json-serializable
    """

    def default(self, obj):
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, enum.Enum):
            return obj.value
        if isinstance(obj, Path):
            return str(obj)
        return super().default(obj)


def dumps_json(data: Any) -> str:
    """Serialise to JSON. Infinite boundary levels come out as the
    (JavaScript) literal Infinity, which Python's json module reads back."""
    return json.dumps(data, cls=_NumpyEncoder, indent=4)


def save_json(filename: Optional[Union[str, Path]], data: Any):
    """Save data to a json file.

    Args:
        filename: File to save to; None writes to stdout.
        data: Python object to save.
    """
    text = dumps_json(data) + '\n'
    if filename is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(filename, 'w', newline='\n') as f:
        f.write(text)


def _write_boundary(stream: TextIO, boundary: Boundary):
    np.savetxt(
        stream,
        np.column_stack([boundary.times, boundary.levels]),
        fmt=CSV_FORMAT,
        delimiter=',',
        header='t,boundary',
        comments='',
        newline='\n',
    )


def save_boundary_csv(filename: Optional[Union[str, Path]], boundary: Boundary):
    """Write a boundary as CSV with header :code:`t,boundary`, one row per
    time node, LF line endings.

    Args:
        filename: File to save to; None writes to stdout.
        boundary: The curve.
    """
    if filename is None:
        _write_boundary(sys.stdout, boundary)
        sys.stdout.flush()
        return
    with open(filename, 'w', newline='\n') as f:
        _write_boundary(f, boundary)


def load_boundary_csv(filename: Union[str, Path]) -> np.ndarray:
    """Read a boundary CSV back as an (n, 2) array of (t, b)."""
    return np.loadtxt(filename, delimiter=',', skiprows=1, ndmin=2)


@dataclass
class ResultDocument:
    """Everything :code:`taxstop solve` reports."""

    version: str
    regime: str
    v0: dict
    """V(0, x0) per method."""
    boundary: dict
    smooth_fit: Optional[dict]
    timing_option: dict
    diagnostics: dict
    config: dict
    runtimes: dict = field(default_factory=dict)
    """Wall-clock seconds per method; the only nondeterministic part."""
    monte_carlo: Optional[dict] = None

    def to_dict(self, runtimes: bool = True) -> dict:
        doc = {
            'tool': 'taxstop',
            'version': self.version,
            'regime': self.regime,
            'v0': self.v0,
            'boundary': self.boundary,
            'smooth_fit': self.smooth_fit,
            'timing_option': self.timing_option,
            'monte_carlo': self.monte_carlo,
            'diagnostics': dict(self.diagnostics),
            'config': self.config,
        }
        if runtimes:
            doc['diagnostics']['runtimes'] = self.runtimes
        return doc
