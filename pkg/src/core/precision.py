"""
Moment Lab - Extended Precision Helpers

Hankel matrices lose double precision quickly, so the moment and
quadrature code runs its linear algebra on mpmath numbers:
- each call gets its own MPContext (no shared global precision state)
- inputs and outputs cross the boundary as Python floats
"""

import logging
from fractions import Fraction
from typing import List, Sequence

import mpmath

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 50


def context(digits: int = DEFAULT_DIGITS) -> mpmath.ctx_mp.MPContext:
    """
    Create an isolated mpmath context

    Args:
        digits: Significant decimal digits for the context

    Returns:
        MPContext with dps set to digits
    """
    ctx = mpmath.MPContext()
    ctx.dps = max(int(digits), 15)
    return ctx


def hankel(ctx, values: Sequence, order: int, shift: int = 0):
    """
    Build the (order+1) x (order+1) Hankel matrix [m_{i+j+shift}]

    Args:
        ctx: mpmath context
        values: Moment values m_0..m_K
        order: Largest index n of H_n
        shift: Offset into the sequence (1 for the Stieltjes shifted matrix)

    Returns:
        ctx.matrix, symmetric by construction
    """
    size = order + 1
    entries = [to_mp(ctx, v) for v in values]
    mat = ctx.matrix(size, size)
    for i in range(size):
        for j in range(i, size):
            mat[i, j] = entries[i + j + shift]
            mat[j, i] = mat[i, j]
    return mat


def symmetric_eigenvalues(ctx, mat) -> List:
    """Eigenvalues of a real symmetric mpmath matrix, ascending"""
    if mat.rows == 1:
        return [mat[0, 0]]
    values = ctx.eigsy(mat, eigvals_only=True)
    return sorted(values[i] for i in range(mat.rows))


def to_floats(values) -> List[float]:
    """Convert a sequence of mpmath numbers to floats"""
    return [float(v) for v in values]


def to_mp(ctx, value):
    """Convert an int, float, Fraction or mpf to the context's mpf exactly where possible"""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.mpf(value)
