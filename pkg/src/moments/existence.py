"""
Moment Lab - Existence Tests

Hamburger and Stieltjes solvability from a finite moment sequence:
- Hankel matrices H_n = [m_{i+j}] for every n <= K/2
- Stieltjes adds the shifted matrices [m_{i+j+1}]
- eigenvalues in extended precision, normalized by the spectral norm
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from core.errors import InvalidInputError
from core.precision import DEFAULT_DIGITS, context, hankel, symmetric_eigenvalues
from moments.sequence import MomentKind, MomentSequence

logger = logging.getLogger(__name__)

TOL_PSD = 1e-10


@dataclass(frozen=True)
class ExistenceReport:
    """Outcome of a Hankel positivity scan"""

    feasible: bool
    min_eigenvalue: float
    worst_order: int
    resolved: bool
    shifted_min_eigenvalue: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'feasible': self.feasible,
            'min_eigenvalue': self.min_eigenvalue,
            'worst_order': self.worst_order,
            'resolved': self.resolved,
        }
        if self.shifted_min_eigenvalue is not None:
            data['shifted_min_eigenvalue'] = self.shifted_min_eigenvalue
        return data


def _scan(ctx, values, max_order: int, shift: int) -> Tuple[float, int, bool]:
    """Worst normalized eigenvalue over H_0..H_max_order"""
    worst = None
    worst_order = 0
    resolved = True
    noise = ctx.mpf(10) ** (-(ctx.dps - 5))
    for order in range(max_order + 1):
        eigenvalues = symmetric_eigenvalues(ctx, hankel(ctx, values, order, shift))
        norm = max(abs(eigenvalues[0]), abs(eigenvalues[-1]))
        if norm == 0:
            normalized = ctx.mpf(0)
        else:
            normalized = eigenvalues[0] / norm
        if abs(normalized) < noise * (order + 1):
            resolved = False
        if worst is None or normalized < worst:
            worst = normalized
            worst_order = order
    return float(worst), worst_order, resolved


def hankel_matrices(ms: MomentSequence) -> List[List[List[float]]]:
    """The Hankel matrices H_0..H_{K/2} as nested float lists"""
    values = ms.even_prefix().floats()
    top = (len(values) - 1) // 2
    return [[[values[i + j] for j in range(n + 1)] for i in range(n + 1)] for n in range(top + 1)]


def hamburger_existence(ms: MomentSequence, tol_psd: float = TOL_PSD,
                        digits: int = DEFAULT_DIGITS) -> ExistenceReport:
    """
    Positive semidefiniteness of every Hankel matrix H_n, n <= K/2

    Args:
        ms: Moment sequence (odd lengths are cut to the largest even prefix)
        tol_psd: Eigenvalues down to -tol_psd * ||H_n|| are accepted
        digits: Working precision in decimal digits

    Returns:
        ExistenceReport; min_eigenvalue is the worst normalized eigenvalue
    """
    if ms.singular:
        raise InvalidInputError("the zero sequence has no normalizable measure")
    values = ms.even_prefix().values
    ctx = context(digits)
    worst, order, resolved = _scan(ctx, values, (len(values) - 1) // 2, 0)
    feasible = worst >= -tol_psd
    if not resolved:
        logger.warning(f"Hankel scan at {ctx.dps} digits cannot resolve the smallest eigenvalue sign")
    logger.info(f"Hamburger existence K={ms.K}: feasible={feasible} worst={worst:.3e} at H_{order}")
    return ExistenceReport(feasible, worst, order, resolved)


def stieltjes_existence(ms: MomentSequence, tol_psd: float = TOL_PSD,
                        digits: int = DEFAULT_DIGITS) -> ExistenceReport:
    """
    Stieltjes solvability: Hankel matrices of (m_0, m_1, ...) and of the
    shifted sequence (m_1, m_2, ...) are both positive semidefinite

    Args:
        ms: Moment sequence tagged stieltjes
        tol_psd: Relative eigenvalue tolerance
        digits: Working precision in decimal digits

    Returns:
        ExistenceReport with the shifted scan recorded separately
    """
    if ms.kind is not MomentKind.STIELTJES:
        raise InvalidInputError("stieltjes_existence needs a sequence tagged 'stieltjes'")
    if ms.singular:
        raise InvalidInputError("the zero sequence has no normalizable measure")
    ctx = context(digits)
    values = ms.values
    worst, order, resolved = _scan(ctx, values, ms.K // 2, 0)
    shifted, _, shifted_resolved = _scan(ctx, values, (ms.K - 1) // 2, 1)
    feasible = worst >= -tol_psd and shifted >= -tol_psd
    logger.info(f"Stieltjes existence K={ms.K}: feasible={feasible}")
    return ExistenceReport(feasible, min(worst, shifted), order,
                           resolved and shifted_resolved, shifted_min_eigenvalue=shifted)
