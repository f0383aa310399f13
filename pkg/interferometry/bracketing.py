"""
Root bracketing on sampled functions.

Roots are bracketed by sign changes between consecutive samples and refined
by bisection, the rootsearch-then-bisect scheme, with scipy doing the bisection.
"""
import logging

import numpy as np
from scipy import optimize

from .exceptions import GridTooCoarseError

logger = logging.getLogger(__name__)


def sign_change_cells(values):
    """Indices k with values[k] and values[k+1] of strictly opposite sign."""
    values = np.asarray(values, dtype=float)
    return np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)


def bracketed_roots(func, x, values, xtol, strict=False):
    """
    Refine every sign change of ``values`` (sampled at ``x``) to a root of ``func``.

    Samples that are exactly zero are reported as roots themselves.  With
    ``strict`` set, sign changes in two adjacent cells mean the grid cannot
    separate the roots and ``GridTooCoarseError`` is raised.
    """
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    cells = sign_change_cells(values)
    if strict and cells.size > 1 and np.any(np.diff(cells) == 1):
        crowded = cells[np.flatnonzero(np.diff(cells) == 1)[0]]
        raise GridTooCoarseError(
            f'grid too coarse: sign changes in adjacent cells near phi = {x[crowded]:.6f}'
        )

    roots = [float(x[k]) for k in np.flatnonzero(values == 0)]
    for k in cells:
        roots.append(optimize.bisect(func, x[k], x[k + 1], xtol=xtol, maxiter=200))
    roots.sort()
    logger.debug('bracketed %d roots on %d samples', len(roots), x.size)
    return roots
