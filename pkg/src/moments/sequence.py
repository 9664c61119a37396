"""
Moment Lab - Moment Sequences and Densities

Value types consumed by the existence and determinacy tests:
- MomentSequence: m_0..m_K of a candidate measure (Hamburger or Stieltjes)
- DensitySpec: a density handle for the Krein log-integral
- built-in sequences and densities of the powers Q^k in the vacuum
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from core.errors import InvalidDensityError, InvalidInputError


class MomentKind(str, Enum):
    """Which moment problem a sequence is posed for"""

    HAMBURGER = 'hamburger'
    STIELTJES = 'stieltjes'


class Support(str, Enum):
    """Support of a density"""

    FULL_LINE = 'full_line'
    HALF_LINE = 'half_line'


def _check_real(value: Any) -> Real:
    if isinstance(value, bool) or not isinstance(value, Real):
        raise InvalidInputError(f"moment value {value!r} is not a real number")
    if not math.isfinite(float(value)):
        raise InvalidInputError(f"moment value {value!r} is not finite")
    return value


@dataclass(frozen=True)
class MomentSequence:
    """
    Real moments m_0..m_K of a candidate measure

    Values may be floats, ints or Fractions; exact values are kept exact so
    the extended-precision code sees them without double rounding.
    """

    values: Tuple[Real, ...]
    kind: MomentKind = MomentKind.HAMBURGER
    singular: bool = False

    def __post_init__(self):
        values = tuple(_check_real(v) for v in self.values)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'kind', MomentKind(self.kind))
        if len(values) < 3:
            raise InvalidInputError(f"need at least m_0..m_2, got {len(values)} values")
        if self.singular:
            if any(v != 0 for v in values):
                raise InvalidInputError("a singular sequence must be identically zero")
        elif not values[0] > 0:
            raise InvalidInputError(f"m_0 must be positive, got {values[0]}")

    @property
    def K(self) -> int:
        """Index of the last moment"""
        return len(self.values) - 1

    @classmethod
    def zero_measure(cls, K: int, kind: MomentKind = MomentKind.HAMBURGER) -> 'MomentSequence':
        """Moments of the zero measure (singular deformation)"""
        return cls(tuple(0 for _ in range(K + 1)), kind, singular=True)

    def floats(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.values)

    def truncated(self, K: int) -> 'MomentSequence':
        """Keep m_0..m_K"""
        if K < 2 or K > self.K:
            raise InvalidInputError(f"cannot truncate a length-{self.K + 1} sequence to K={K}")
        return MomentSequence(self.values[:K + 1], self.kind, self.singular)

    def even_prefix(self) -> 'MomentSequence':
        """Largest prefix ending on an even index"""
        return self if self.K % 2 == 0 else self.truncated(self.K - 1)

    def as_kind(self, kind: MomentKind) -> 'MomentSequence':
        return MomentSequence(self.values, kind, self.singular)

    def scaled(self, factor: Real) -> 'MomentSequence':
        """Multiply every moment by a positive factor"""
        if not factor > 0:
            raise InvalidInputError("scaling factor must be positive")
        return MomentSequence(tuple(v * factor for v in self.values), self.kind, self.singular)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'values': [float(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MomentSequence':
        """Parse the {"kind": ..., "values": [...]} JSON form"""
        if not isinstance(data, dict) or 'values' not in data:
            raise InvalidInputError("moment sequence JSON needs a 'values' array")
        try:
            kind = MomentKind(data.get('kind', MomentKind.HAMBURGER.value))
        except ValueError:
            raise InvalidInputError(f"unknown moment problem kind {data.get('kind')!r}")
        if not isinstance(data['values'], list):
            raise InvalidInputError("'values' must be an array")
        return cls(tuple(data['values']), kind)


@dataclass(frozen=True)
class DensitySpec:
    """
    Density handle for the Krein test

    log_evaluator is optional; when given it is used in place of
    log(evaluator(x)), which underflows far out in the tails.
    """

    evaluator: Callable[[float], float]
    support: Support = Support.FULL_LINE
    log_evaluator: Optional[Callable[[float], float]] = None
    name: str = field(default='density')

    def value(self, x: float) -> float:
        """f(x), rejecting negative and NaN values"""
        value = float(self.evaluator(x))
        if value < 0 or math.isnan(value):
            raise InvalidDensityError(f"{self.name} evaluated to {value} at x={x}")
        return value

    def log_density(self, x: float) -> float:
        """log f(x); -inf where f vanishes"""
        if self.log_evaluator is not None:
            value = float(self.log_evaluator(x))
            if math.isnan(value) or value == math.inf:
                raise InvalidDensityError(f"{self.name} has log-density {value} at x={x}")
            return value
        value = self.value(x)
        if value == 0.0:
            return -math.inf
        return math.log(value)


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 0!! = 1"""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def vacuum_position_moment(p: int) -> Fraction:
    """omega(Q^p) = (p-1)!!/2^{p/2} for even p, 0 for odd p"""
    if p % 2:
        return Fraction(0)
    return Fraction(double_factorial(p - 1), 2 ** (p // 2))


def gaussian_power_moments(k: int, K: int,
                           kind: MomentKind = MomentKind.HAMBURGER) -> MomentSequence:
    """
    Exact moments omega(Q^{kn}), n = 0..K, of the k-th position power

    Args:
        k: Power of Q
        K: Index of the last moment
        kind: Moment problem tag for the result

    Returns:
        MomentSequence with Fraction values
    """
    if k < 1 or K < 2:
        raise InvalidInputError("need k >= 1 and K >= 2")
    return MomentSequence(tuple(vacuum_position_moment(k * n) for n in range(K + 1)), kind)


_LOG_SQRT_PI = 0.5 * math.log(math.pi)


def builtin_density(k: int) -> DensitySpec:
    """
    Density of the distribution of Q^k in the vacuum

    k=1 Gaussian, k=2 on the half line, k=3 on the full line with an
    integrable singularity at 0, k=4 on the half line.

    Args:
        k: Power of Q, 1..4

    Returns:
        DensitySpec with a log evaluator for the far tails

    Raises:
        InvalidInputError: k is outside 1..4
    """
    if k == 1:
        return DensitySpec(
            evaluator=lambda y: math.exp(-y * y) / math.sqrt(math.pi),
            support=Support.FULL_LINE,
            log_evaluator=lambda y: -y * y - _LOG_SQRT_PI,
            name='Q^1 density',
        )
    if k == 2:
        return DensitySpec(
            evaluator=lambda y: math.exp(-y) / math.sqrt(math.pi * y),
            support=Support.HALF_LINE,
            log_evaluator=lambda y: -y - 0.5 * math.log(y) - _LOG_SQRT_PI,
            name='Q^2 density',
        )
    if k == 3:
        return DensitySpec(
            evaluator=lambda y: math.exp(-abs(y) ** (2.0 / 3.0)) / (3.0 * math.sqrt(math.pi) * abs(y) ** (2.0 / 3.0)),
            support=Support.FULL_LINE,
            log_evaluator=lambda y: (-abs(y) ** (2.0 / 3.0) - (2.0 / 3.0) * math.log(abs(y))
                                     - math.log(3.0) - _LOG_SQRT_PI),
            name='Q^3 density',
        )
    if k == 4:
        return DensitySpec(
            evaluator=lambda y: math.exp(-math.sqrt(y)) / (2.0 * math.sqrt(math.pi) * y ** 0.75),
            support=Support.HALF_LINE,
            log_evaluator=lambda y: -math.sqrt(y) - 0.75 * math.log(y) - math.log(2.0) - _LOG_SQRT_PI,
            name='Q^4 density',
        )
    raise InvalidInputError(f"no built-in density for k={k}")


def as_sequence(values: Sequence[Real], kind: str = 'hamburger') -> MomentSequence:
    """Shorthand constructor used by tests and the CLI"""
    return MomentSequence(tuple(values), MomentKind(kind))
