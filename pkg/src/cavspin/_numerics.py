"""Small numerical helpers shared across modules."""

import math

import numpy as np

# algebraic identities (commutators, Hermiticity, normalization)
ALG_TOL = 1e-10
# positivity of density matrices / covariance physicality
POS_TOL = 1e-8

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, a, b, rtol=1e-6, atol=1e-14, max_iter=500):
    """Minimize a unimodal scalar function on [a, b].

    Returns ``(x_min, f(x_min))``.
    """
    if b < a:
        a, b = b, a
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= rtol * (abs(c) + abs(d)) / 2 + atol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    fx = f(x)
    # keep the best of the probes in case of a flat-ish tail
    for xp, fp in ((c, fc), (d, fd)):
        if fp < fx:
            x, fx = xp, fp
    return x, fx


def grid_then_golden(f, grid, rtol=1e-6):
    """Coarse scan over ``grid`` followed by golden-section refinement around the best point."""
    grid = np.asarray(grid, dtype=float)
    vals = np.array([f(x) for x in grid])
    k = int(np.argmin(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    if lo == hi:
        return float(grid[k]), float(vals[k])
    x, fx = golden_section(f, lo, hi, rtol=rtol)
    if vals[k] < fx:
        return float(grid[k]), float(vals[k])
    return float(x), float(fx)


def loglog_slope(x, y):
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)
