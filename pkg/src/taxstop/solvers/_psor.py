"""
Compiled projected successive over-relaxation for tridiagonal linear
complementarity problems

    A v >= rhs,  v >= obstacle,  (A v - rhs) . (v - obstacle) = 0.
"""
import math

from numba import njit


@njit(cache=True, nogil=True)
def psor_sweeps(lower, diag, upper, rhs, obstacle, v, omega, tol, max_iter):
    """Run projected SOR sweeps in place on :code:`v`.

    Row j of A is lower[j] v[j-1] + diag[j] v[j] + upper[j] v[j+1];
    lower[0] and upper[-1] are ignored.

    Returns:
        (sweeps performed, largest update of the last sweep). A non-finite
        update stops the iteration immediately.
    """
    n = v.shape[0]
    change = math.inf
    for sweep in range(1, max_iter + 1):
        change = 0.0
        for j in range(n):
            s = rhs[j]
            if j > 0:
                s -= lower[j] * v[j - 1]
            if j < n - 1:
                s -= upper[j] * v[j + 1]
            new = v[j] + omega * (s / diag[j] - v[j])
            if new < obstacle[j]:
                new = obstacle[j]
            if not math.isfinite(new):
                return sweep, math.nan
            d = abs(new - v[j])
            if d > change:
                change = d
            v[j] = new
        if change <= tol:
            return sweep, change
    return max_iter, change
