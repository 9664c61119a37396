"""
Moment Lab - Momentum Discretization

Finite-difference model of -i d/dx with zero boundary values, used as a
numerical cross-check of the momentum operator on bounded intervals.
"""

import logging
from typing import Tuple

import numpy as np

from core.errors import InvalidInputError
from algebra.fock import TruncatedRep
from operators.deficiency import IntervalDomain, IntervalKind

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 8
DEFAULT_LENGTH = 40.0


def _window(dom: IntervalDomain, length: float) -> Tuple[float, float]:
    if dom.kind is IntervalKind.BOUNDED:
        return dom.lo, dom.hi
    logger.warning(f"{dom.kind.value} truncated to length {length}; "
                   f"the finite model does not carry the deficiency structure of the unbounded interval")
    if dom.kind is IntervalKind.HALF_LINE_RIGHT:
        return dom.lo, dom.lo + length
    if dom.kind is IntervalKind.HALF_LINE_LEFT:
        return dom.hi - length, dom.hi
    return -length / 2, length / 2


def grid_nodes(dom: IntervalDomain, grid_points: int, length: float = DEFAULT_LENGTH) -> np.ndarray:
    """Interior nodes lo + h, ..., hi - h with h = (hi - lo) / (grid_points + 1)"""
    lo, hi = _window(dom, length)
    h = (hi - lo) / (grid_points + 1)
    return lo + h * np.arange(1, grid_points + 1)


def discretize_momentum(dom: IntervalDomain, grid_points: int,
                        length: float = DEFAULT_LENGTH) -> TruncatedRep:
    """
    -i times the central-difference derivative on the interior grid

    Args:
        dom: Interval; half-lines and the full line are cut to `length`
        grid_points: Number of interior nodes (>= 8)
        length: Truncation length for unbounded intervals

    Returns:
        TruncatedRep holding a Hermitian grid_points x grid_points matrix
    """
    if grid_points < MIN_GRID_POINTS:
        raise InvalidInputError(f"need at least {MIN_GRID_POINTS} grid points, got {grid_points}")
    if not length > 0:
        raise InvalidInputError("truncation length must be positive")
    lo, hi = _window(dom, length)
    h = (hi - lo) / (grid_points + 1)
    upper = np.full(grid_points - 1, 1.0 / (2.0 * h))
    derivative = np.diag(upper, 1) - np.diag(upper, -1)
    return TruncatedRep(-1j * derivative)
