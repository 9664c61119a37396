"""
Moment Lab - Measure Reconstruction

Discrete measures matching a finite moment sequence:
- Jacobi matrix from a partial Cholesky factor of the Hankel matrix
- Gauss quadrature from the Jacobi matrix eigensystem
- moments of discrete measures and moment-solution checks

All internal arithmetic runs in mpmath; results are returned as floats.
"""

import csv
import io
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from core.errors import ConditioningError, InvalidInputError, NumericError, RankDeficiencyError
from core.precision import DEFAULT_DIGITS, context, to_mp
from moments.sequence import MomentSequence

logger = logging.getLogger(__name__)

AGREEMENT_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms (position, weight) with increasing positions"""

    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((float(x), float(w)) for x, w in self.atoms)
        object.__setattr__(self, 'atoms', atoms)
        if not atoms:
            raise InvalidInputError("a discrete measure needs at least one atom")
        if any(w < 0 for _, w in atoms):
            raise InvalidInputError("atom weights must be nonnegative")
        if any(b[0] <= a[0] for a, b in zip(atoms, atoms[1:])):
            raise InvalidInputError("atom positions must be strictly increasing")
        if not self.total_mass > 0:
            raise InvalidInputError("total mass must be positive")

    @property
    def positions(self) -> List[float]:
        return [x for x, _ in self.atoms]

    @property
    def weights(self) -> List[float]:
        return [w for _, w in self.atoms]

    @property
    def total_mass(self) -> float:
        return sum(w for _, w in self.atoms)

    def to_dict(self) -> Dict[str, Any]:
        return {'atoms': [[x, w] for x, w in self.atoms]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DiscreteMeasure':
        try:
            return cls(tuple((x, w) for x, w in data['atoms']))
        except (KeyError, TypeError, ValueError):
            raise InvalidInputError("measure JSON needs 'atoms': [[x, w], ...]")

    def to_csv(self) -> str:
        """(position, weight) rows for external plotting"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['position', 'weight'])
        for x, w in self.atoms:
            writer.writerow([repr(x), repr(w)])
        return buffer.getvalue()


@dataclass(frozen=True)
class JacobiMatrix:
    """
    Three-term recurrence of the orthogonal polynomials of a measure

    alpha: diagonal, beta: squared off-diagonal entries, mass: m_0
    """

    alpha: Tuple[float, ...]
    beta: Tuple[float, ...]
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'alpha', tuple(float(a) for a in self.alpha))
        object.__setattr__(self, 'beta', tuple(float(b) for b in self.beta))
        if not self.alpha:
            raise InvalidInputError("Jacobi matrix of order 0")
        if len(self.beta) != len(self.alpha) - 1:
            raise InvalidInputError("need len(beta) == len(alpha) - 1")
        if any(not b > 0 for b in self.beta):
            raise InvalidInputError("beta entries must be positive")

    @property
    def order(self) -> int:
        return len(self.alpha)

    def to_dict(self) -> Dict[str, Any]:
        return {'alpha': list(self.alpha), 'beta': list(self.beta), 'mass': self.mass}


class _PivotFailure(Exception):
    def __init__(self, order: int):
        self.order = order


def _recurrence(ctx, values, n: int) -> Tuple[list, list]:
    """
    alpha_0..alpha_{n-1}, beta_0..beta_{n-2} from the upper Cholesky factor of
    [m_{i+j}], rows 0..n-1 and columns 0..n (the last pivot is never needed)
    """
    moments = [to_mp(ctx, v) for v in values[:2 * n]]
    noise = ctx.mpf(10) ** (-(ctx.dps - 5))
    r = [[ctx.zero] * (n + 1) for _ in range(n)]
    for i in range(n):
        pivot = moments[2 * i] - ctx.fsum(r[k][i] ** 2 for k in range(i))
        if pivot <= noise * abs(moments[2 * i]) or pivot <= 0:
            raise _PivotFailure(i)
        r[i][i] = ctx.sqrt(pivot)
        for j in range(i + 1, n + 1):
            r[i][j] = (moments[i + j] - ctx.fsum(r[k][i] * r[k][j] for k in range(i))) / r[i][i]
    alpha = []
    for j in range(n):
        value = r[j][j + 1] / r[j][j]
        if j > 0:
            value -= r[j - 1][j] / r[j - 1][j - 1]
        alpha.append(value)
    beta = [(r[j + 1][j + 1] / r[j][j]) ** 2 for j in range(n - 1)]
    return alpha, beta


def jacobi_from_moments(ms: MomentSequence, n: int, digits: int = DEFAULT_DIGITS) -> JacobiMatrix:
    """
    n x n Jacobi matrix whose orthogonal polynomials have moments ms

    The recurrence is computed twice, at `digits` and at a guard precision;
    disagreement means the working precision is too low for this order.

    Args:
        ms: Moment sequence, 2n <= K
        n: Order (number of quadrature atoms)
        digits: Working precision in decimal digits

    Returns:
        JacobiMatrix

    Raises:
        RankDeficiencyError: the n x n Hankel block is not positive definite
        ConditioningError: results at `digits` are not trustworthy
    """
    if ms.singular:
        raise InvalidInputError("the zero sequence has no orthogonal polynomials")
    if n < 1 or 2 * n > ms.K:
        raise InvalidInputError(f"order n={n} needs 2n <= K={ms.K}")

    guard = context(digits + max(10, digits // 2))
    try:
        alpha_g, beta_g = _recurrence(guard, ms.values, n)
    except _PivotFailure as failure:
        raise RankDeficiencyError(f"Hankel matrix H_{failure.order} is not positive definite",
                                  order=failure.order)

    ctx = context(digits)
    try:
        alpha, beta = _recurrence(ctx, ms.values, n)
    except _PivotFailure as failure:
        raise ConditioningError(
            f"{ctx.dps} digits lose positivity of H_{failure.order}; raise the precision",
            detail={'order': failure.order, 'digits': ctx.dps})

    scale = max([abs(a) for a in alpha_g] + [guard.sqrt(b) for b in beta_g])
    scale = scale if scale > 0 else guard.one
    drift = max([abs(a - b) for a, b in zip(alpha, alpha_g)] +
                [abs(guard.sqrt(a) - guard.sqrt(b)) for a, b in zip(beta, beta_g)])
    if drift > AGREEMENT_TOL * scale:
        raise ConditioningError(
            f"recurrence of order {n} at {ctx.dps} digits drifts by {float(drift / scale):.2e}",
            detail={'order': n, 'digits': ctx.dps})

    return JacobiMatrix(tuple(float(a) for a in alpha_g), tuple(float(b) for b in beta_g),
                        float(ms.values[0]))


def gauss_quadrature(jacobi: JacobiMatrix, digits: int = DEFAULT_DIGITS) -> DiscreteMeasure:
    """
    Gauss rule of a Jacobi matrix

    Atoms are the eigenvalues; weights are m_0 times the squared first
    components of the normalized eigenvectors.
    """
    ctx = context(digits)
    n = jacobi.order
    if n == 1:
        return DiscreteMeasure(((jacobi.alpha[0], jacobi.mass),))
    mat = ctx.matrix(n, n)
    for i, a in enumerate(jacobi.alpha):
        mat[i, i] = ctx.mpf(a)
    for i, b in enumerate(jacobi.beta):
        mat[i, i + 1] = mat[i + 1, i] = ctx.sqrt(ctx.mpf(b))
    try:
        eigenvalues, vectors = ctx.eigsy(mat)
    except Exception as exc:
        raise NumericError(f"eigensolver failed on the Jacobi matrix: {exc}")
    mass = ctx.mpf(jacobi.mass)
    atoms = sorted((eigenvalues[i], mass * vectors[0, i] ** 2) for i in range(n))
    return DiscreteMeasure(tuple((float(x), float(w)) for x, w in atoms))


def measure_moments(measure: DiscreteMeasure, K: int, digits: int = DEFAULT_DIGITS) -> MomentSequence:
    """(sum_i w_i x_i^n) for n = 0..K, summed in extended precision"""
    ctx = context(digits)
    points = [(ctx.mpf(x), ctx.mpf(w)) for x, w in measure.atoms]
    values = tuple(float(ctx.fsum(w * x ** n for x, w in points)) for n in range(K + 1))
    return MomentSequence(values)


@dataclass(frozen=True)
class MomentCheck:
    ok: bool
    max_rel_err: float

    def to_dict(self) -> Dict[str, Any]:
        return {'ok': self.ok, 'max_rel_err': self.max_rel_err}


def verify_moment_solution(measure: DiscreteMeasure, ms: MomentSequence, tol: float = 1e-8,
                           digits: int = DEFAULT_DIGITS, upto: Optional[int] = None) -> MomentCheck:
    """
    Compare a measure's moments m_0..m_upto (all of ms by default) with a target sequence

    The error of moment n is taken relative to max(|m_n|, sum_i w_i |x_i|^n).
    For a zero target the divisor is floored at 1, so an absolute error
    within tol always passes; above that, vanishing odd moments are judged
    against the size of the terms that cancel in them.

    Args:
        measure: Candidate measure
        ms: Target moments
        tol: Largest accepted error per moment
        digits: Working precision of the sums
        upto: Last moment index compared

    Returns:
        MomentCheck with the worst error
    """
    ctx = context(digits)
    points = [(ctx.mpf(x), ctx.mpf(w)) for x, w in measure.atoms]
    worst = 0.0
    targets = ms.values if upto is None else ms.values[:upto + 1]
    for n, target in enumerate(targets):
        got = ctx.fsum(w * x ** n for x, w in points)
        goal = to_mp(ctx, target)
        scale = max(abs(goal), ctx.fsum(w * abs(x) ** n for x, w in points))
        if goal == 0:
            scale = max(scale, ctx.one)
        worst = max(worst, float(abs(got - goal) / scale))
    return MomentCheck(worst <= tol, worst)


@dataclass(frozen=True)
class Reconstruction:
    measure: DiscreteMeasure
    jacobi: JacobiMatrix
    requested_order: int
    order: int

    @property
    def reduced(self) -> bool:
        return self.order < self.requested_order

    def to_dict(self) -> Dict[str, Any]:
        return {
            'measure': self.measure.to_dict(),
            'jacobi': self.jacobi.to_dict(),
            'requested_order': self.requested_order,
            'order': self.order,
            'reduced': self.reduced,
        }


def reconstruct_measure(ms: MomentSequence, n: int, digits: int = DEFAULT_DIGITS) -> Reconstruction:
    """
    Gauss measure of order n, or of the largest nonsingular order below it

    A singular Hankel block means the moments come from a measure with fewer
    atoms, which is then represented exactly at the lower order.
    """
    order = n
    while True:
        try:
            jacobi = jacobi_from_moments(ms, order, digits)
            break
        except RankDeficiencyError as failure:
            if failure.order < 1:
                raise
            logger.warning(f"order {order} is singular, falling back to {failure.order}")
            order = failure.order
    if order < n:
        logger.warning(f"measure represented with {order} atoms instead of {n}")
    return Reconstruction(gauss_quadrature(jacobi, digits), jacobi, n, order)
