"""
Moment Lab - Determinacy Criteria

Finite-data versions of the classical criteria:
- Carleman: divergence of sum m_{2n}^{-1/(2n)}
- Cramer: factorial growth bound m_{2n} <= C R^{2n} (2n)!
- Krein: finiteness of the log-integral of a density (indeterminacy)

A criterion that cannot decide returns 'inconclusive', which is always safe.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from core.errors import InfeasibleSequenceError, InvalidInputError
from core.precision import DEFAULT_DIGITS, context, to_mp
from moments.existence import TOL_PSD, hamburger_existence, stieltjes_existence
from moments.sequence import DensitySpec, MomentKind, MomentSequence, Support

logger = logging.getLogger(__name__)

CARLEMAN_MIN_ALPHA = 0.1
CARLEMAN_MIN_SLOPE = -0.1
CRAMER_MAX_RESIDUAL = 0.5
TOL_KREIN = 1e-6
KREIN_BASE_WINDOW = 8.0
KREIN_INNER_EDGE = 1.0
KREIN_MAX_DOUBLINGS = 64
KREIN_DIVERGENCE_RUN = 4
KREIN_DIVERGENCE_RATIO = 0.9
KREIN_SAMPLE_POINTS = 32


class Status(str, Enum):
    DETERMINATE = 'determinate'
    INDETERMINATE = 'indeterminate'
    INCONCLUSIVE = 'inconclusive'


class Criterion(str, Enum):
    CARLEMAN = 'carleman'
    CRAMER = 'cramer'
    KREIN = 'krein'
    NONE = 'none'


@dataclass(frozen=True)
class DeterminacyVerdict:
    """Status, deciding criterion and labelled diagnostics"""

    status: Status
    criterion: Criterion
    diagnostics: Tuple[Tuple[str, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.status is Status.DETERMINATE and self.criterion not in (Criterion.CARLEMAN, Criterion.CRAMER):
            raise ValueError("determinate verdicts come from carleman or cramer only")
        if self.status is Status.INDETERMINATE and self.criterion is not Criterion.KREIN:
            raise ValueError("indeterminate verdicts come from krein only")

    def diagnostic(self, label: str) -> Optional[float]:
        for name, value in self.diagnostics:
            if name == label:
                return value
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'status': self.status.value,
            'criterion': self.criterion.value,
            'diagnostics': [[name, value] for name, value in self.diagnostics],
        }


def _even_moments(ms: MomentSequence, tol_psd: float, digits: int,
                  check_existence: bool) -> List[Tuple[int, Any]]:
    if ms.singular:
        raise InvalidInputError("determinacy is undefined for the zero sequence")
    if check_existence and not hamburger_existence(ms, tol_psd, digits).feasible:
        raise InfeasibleSequenceError("sequence fails the Hamburger existence test")
    return [(n, ms.values[2 * n]) for n in range(1, ms.K // 2 + 1)]


def _upper_half(points: List) -> List:
    start = max(0, (len(points) + 1) // 2 - 1)
    return points[start:]


def _log(ctx, value) -> float:
    return float(ctx.log(to_mp(ctx, value)))


def carleman_test(ms: MomentSequence, tol_psd: float = TOL_PSD, digits: int = DEFAULT_DIGITS,
                  check_existence: bool = True) -> DeterminacyVerdict:
    """
    Carleman divergence heuristic on c_n = m_{2n}^{-1/(2n)}

    Over the upper half of the available n, alpha_n = n c_n. The series is
    declared divergent when min alpha_n >= 0.1 and the log-log slope of
    alpha_n against n is >= -0.1 (c_n does not decay faster than ~1/n).

    Args:
        ms: Moment sequence passing the Hamburger existence test
        tol_psd: Tolerance for the existence precondition
        digits: Working precision for logs of large moments
        check_existence: Re-run the existence precondition

    Returns:
        DeterminacyVerdict (determinate/carleman or inconclusive/none)
    """
    evens = _even_moments(ms, tol_psd, digits, check_existence)
    if any(value == 0 for _, value in evens):
        logger.info("Carleman: vanishing even moment, point mass at 0")
        return DeterminacyVerdict(Status.DETERMINATE, Criterion.CARLEMAN, (('degenerate_point_mass', 1.0),))

    ctx = context(min(digits, 30))
    c = [(n, math.exp(-_log(ctx, value) / (2 * n))) for n, value in evens]
    diagnostics: List[Tuple[str, float]] = []
    partial = 0.0
    for n, c_n in c:
        partial += c_n
        diagnostics.append((f'partial_sum_{n}', partial))

    upper = _upper_half(c)
    alphas = [(n, n * c_n) for n, c_n in upper]
    alpha = min(a for _, a in alphas)
    if len(alphas) >= 2:
        slope = float(np.polyfit(np.log([n for n, _ in alphas]), np.log([a for _, a in alphas]), 1)[0])
    else:
        slope = 0.0
    diagnostics += [('alpha', alpha), ('alpha_slope', slope)]

    if alpha >= CARLEMAN_MIN_ALPHA and slope >= CARLEMAN_MIN_SLOPE:
        return DeterminacyVerdict(Status.DETERMINATE, Criterion.CARLEMAN, tuple(diagnostics))
    return DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE, tuple(diagnostics))


def cramer_test(ms: MomentSequence, tol_psd: float = TOL_PSD, digits: int = DEFAULT_DIGITS,
                check_existence: bool = True) -> DeterminacyVerdict:
    """
    Cramer growth bound m_{2n} <= C R^{2n} (2n)!

    Fits log m_{2n} - log (2n)! against 2n by least squares over the upper
    half of the range (the whole range when the upper half has fewer than 3
    points). The bound is accepted when no point lies more than 0.5 above
    the fitted line.

    Args:
        ms: Moment sequence passing the Hamburger existence test
        tol_psd: Tolerance for the existence precondition
        digits: Working precision for logs of large moments
        check_existence: Re-run the existence precondition

    Returns:
        DeterminacyVerdict (determinate/cramer or inconclusive/none)
    """
    evens = _even_moments(ms, tol_psd, digits, check_existence)
    if any(value == 0 for _, value in evens):
        return DeterminacyVerdict(Status.DETERMINATE, Criterion.CRAMER, (('degenerate_point_mass', 1.0),))

    ctx = context(min(digits, 30))
    points = [(n, _log(ctx, value) - math.lgamma(2 * n + 1)) for n, value in evens]
    window = _upper_half(points)
    if len(window) < 3:
        window = points
    if len(window) < 3:
        return DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE, (('fit_points', float(len(window))),))

    x = np.array([2.0 * n for n, _ in window])
    y = np.array([v for _, v in window])
    log_r, log_c = np.polyfit(x, y, 1)
    residuals = y - (log_c + log_r * x)
    worst = float(residuals.max())
    diagnostics = (('log_C', float(log_c)), ('R', float(math.exp(log_r))),
                   ('max_residual', worst), ('fit_points', float(len(window))))
    if worst <= CRAMER_MAX_RESIDUAL:
        return DeterminacyVerdict(Status.DETERMINATE, Criterion.CRAMER, diagnostics)
    return DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE, diagnostics)


def _shell(density: DensitySpec, lo: float, hi: float, sign: float) -> float:
    def integrand(y: float) -> float:
        return density.log_density(sign * y) / (1.0 + y * y)

    value, _ = integrate.quad(integrand, lo, hi, limit=200, epsabs=1e-15, epsrel=1e-11)
    return value


def krein_test(density: DensitySpec, tol_krein: float = TOL_KREIN,
               base_window: float = KREIN_BASE_WINDOW,
               max_doublings: int = KREIN_MAX_DOUBLINGS) -> DeterminacyVerdict:
    """
    Krein log-integral over doubling windows

    Integrates log f(x)/(1+x^2) over [2^-j eps, 2^j X0] (both half lines for
    a full-line density), adding one inner and one outer shell per doubling.
    Stabilization (relative change < tol_krein) gives indeterminate/krein.

    Divergence is a heuristic: four consecutive negative shell increments,
    each at least 0.9 times the previous one in size, are read as the
    integral running to -infinity. A slowly convergent tail can trip it;
    the verdict is then inconclusive, never determinate.

    Before integrating, f is sampled on the base window and must be
    nonnegative and not NaN there, also when log_evaluator is given.

    Args:
        density: Density handle
        tol_krein: Relative change accepted as stabilization
        base_window: X0
        max_doublings: Largest j tried

    Returns:
        DeterminacyVerdict (indeterminate/krein or inconclusive/none)

    Raises:
        InvalidDensityError: f is negative or NaN, or log f is NaN or +inf, where evaluated
    """
    signs = (1.0, -1.0) if density.support is Support.FULL_LINE else (1.0,)
    for x in np.geomspace(KREIN_INNER_EDGE / 16, base_window, KREIN_SAMPLE_POINTS):
        for s in signs:
            density.value(s * float(x))
    total = sum(_shell(density, KREIN_INNER_EDGE, base_window, s) for s in signs)
    previous_step = None
    growing = 0
    for j in range(1, max_doublings + 1):
        inner_lo, inner_hi = KREIN_INNER_EDGE * 2.0 ** -j, KREIN_INNER_EDGE * 2.0 ** (1 - j)
        outer_lo, outer_hi = base_window * 2.0 ** (j - 1), base_window * 2.0 ** j
        step = 0.0
        for s in signs:
            step += _shell(density, inner_lo, inner_hi, s) + _shell(density, outer_lo, outer_hi, s)
        if not math.isfinite(step):
            logger.info(f"Krein: {density.name} log-integral is -inf at doubling {j}")
            return DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE,
                                      (('doublings', float(j)), ('integral', -math.inf)))
        total += step
        if previous_step is not None and step < 0 and abs(step) >= KREIN_DIVERGENCE_RATIO * abs(previous_step):
            growing += 1
        else:
            growing = 0
        previous_step = step
        relative = abs(step) / max(abs(total), 1e-300)
        if growing >= KREIN_DIVERGENCE_RUN:
            logger.info(f"Krein: {density.name} log-integral diverges (doubling {j}, value {total:.4g})")
            return DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE,
                                      (('doublings', float(j)), ('integral', total),
                                       ('relative_change', relative)))
        if j >= 2 and relative < tol_krein:
            logger.info(f"Krein: {density.name} log-integral stabilized at {total:.8g} after {j} doublings")
            return DeterminacyVerdict(Status.INDETERMINATE, Criterion.KREIN,
                                      (('doublings', float(j)), ('integral', total),
                                       ('relative_change', relative)))
    logger.warning(f"Krein: {density.name} did not stabilize within {max_doublings} doublings")
    return DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE,
                              (('doublings', float(max_doublings)), ('integral', total)))


@dataclass(frozen=True)
class SequenceAnalysis:
    """Existence plus every applicable determinacy verdict"""

    existence: Dict[str, Any]
    verdicts: Dict[str, DeterminacyVerdict]
    combined: DeterminacyVerdict

    def to_dict(self) -> Dict[str, Any]:
        return {
            'existence': self.existence,
            'verdicts': {name: v.to_dict() for name, v in self.verdicts.items()},
            'combined': self.combined.to_dict(),
        }


def analyze_sequence(ms: MomentSequence, tol_psd: float = TOL_PSD,
                     digits: int = DEFAULT_DIGITS) -> SequenceAnalysis:
    """
    Existence plus Carleman and Cramer for a moment sequence

    The combined verdict is the first determinate one (Carleman, then
    Cramer), inconclusive otherwise. An infeasible sequence gets no
    determinacy verdicts.

    Args:
        ms: Moment sequence; Stieltjes-tagged sequences also get the shifted scan
        tol_psd: Relative eigenvalue tolerance of the existence scans
        digits: Working precision in decimal digits

    Returns:
        SequenceAnalysis with the existence report, the verdicts and the combined verdict
    """
    existence = hamburger_existence(ms.as_kind(MomentKind.HAMBURGER), tol_psd, digits).to_dict()
    if ms.kind is MomentKind.STIELTJES:
        existence['stieltjes'] = stieltjes_existence(ms, tol_psd, digits).to_dict()
    none = DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE)
    if not existence['feasible']:
        return SequenceAnalysis(existence, {}, none)

    verdicts = {
        'carleman': carleman_test(ms, tol_psd, digits, check_existence=False),
        'cramer': cramer_test(ms, tol_psd, digits, check_existence=False),
    }
    combined = next((v for v in verdicts.values() if v.status is Status.DETERMINATE), none)
    return SequenceAnalysis(existence, verdicts, combined)
