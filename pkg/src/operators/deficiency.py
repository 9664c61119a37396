"""
Moment Lab - Deficiency Indices

Deficiency indices of the momentum operator -i d/dx on intervals of the
real line and the von Neumann classification of its extensions.

The deficiency spaces are spanned by the solutions c e^{-x} (for +i) and
c e^{+x} (for -i) of -i g' = +-i g, so the indices follow from deciding
whether those exponentials are square integrable on the interval.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from core.errors import InvalidInputError


class IntervalKind(str, Enum):
    BOUNDED = 'bounded'
    HALF_LINE_RIGHT = 'half_line_right'
    HALF_LINE_LEFT = 'half_line_left'
    FULL_LINE = 'full_line'


class Classification(str, Enum):
    ESSENTIALLY_SELFADJOINT = 'essentially_selfadjoint'
    MAXIMALLY_SYMMETRIC_NOT_SA = 'maximally_symmetric_not_sa'
    MANY_SELFADJOINT_EXTENSIONS = 'many_selfadjoint_extensions'
    NO_SELFADJOINT_EXTENSION_NOT_MAXIMAL = 'no_selfadjoint_extension_not_maximal'


@dataclass(frozen=True)
class IntervalDomain:
    kind: IntervalKind
    lo: Optional[float] = None
    hi: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', IntervalKind(self.kind))
        if self.kind is IntervalKind.BOUNDED:
            if self.lo is None or self.hi is None or not self.lo < self.hi:
                raise InvalidInputError(f"bounded interval needs lo < hi, got ({self.lo}, {self.hi})")
        if self.kind is IntervalKind.HALF_LINE_RIGHT and self.lo is None:
            raise InvalidInputError("right half-line needs lo")
        if self.kind is IntervalKind.HALF_LINE_LEFT and self.hi is None:
            raise InvalidInputError("left half-line needs hi")
        for end in (self.lo, self.hi):
            if end is not None and not math.isfinite(end):
                raise InvalidInputError("interval endpoints must be finite; use a half-line kind")

    @classmethod
    def bounded(cls, lo: float, hi: float) -> 'IntervalDomain':
        return cls(IntervalKind.BOUNDED, lo, hi)

    @classmethod
    def half_line_right(cls, lo: float = 0.0) -> 'IntervalDomain':
        return cls(IntervalKind.HALF_LINE_RIGHT, lo=lo)

    @classmethod
    def half_line_left(cls, hi: float = 0.0) -> 'IntervalDomain':
        return cls(IntervalKind.HALF_LINE_LEFT, hi=hi)

    @classmethod
    def full_line(cls) -> 'IntervalDomain':
        return cls(IntervalKind.FULL_LINE)

    @property
    def bounded_below(self) -> bool:
        return self.kind in (IntervalKind.BOUNDED, IntervalKind.HALF_LINE_RIGHT)

    @property
    def bounded_above(self) -> bool:
        return self.kind in (IntervalKind.BOUNDED, IntervalKind.HALF_LINE_LEFT)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'lo': self.lo, 'hi': self.hi}

    @classmethod
    def parse(cls, text: str) -> 'IntervalDomain':
        """
        "bounded:0,1", "half_line_right:0", "half_line_left:0" or "full_line"
        """
        kind, _, args = text.partition(':')
        try:
            values = [float(v) for v in args.split(',')] if args else []
            if kind == IntervalKind.BOUNDED.value:
                return cls.bounded(*values)
            if kind == IntervalKind.HALF_LINE_RIGHT.value:
                return cls.half_line_right(*values)
            if kind == IntervalKind.HALF_LINE_LEFT.value:
                return cls.half_line_left(*values)
            if kind == IntervalKind.FULL_LINE.value and not values:
                return cls.full_line()
        except (TypeError, ValueError):
            pass
        raise InvalidInputError(f"cannot parse interval '{text}'")


@dataclass(frozen=True)
class DeficiencyReport:
    n_plus: int
    n_minus: int
    classification: Classification
    extension_family_dim: int
    domain: Optional[IntervalDomain] = None
    note: str = field(default='')

    def __post_init__(self):
        expected, dim = classify_extension(self.n_plus, self.n_minus)
        if expected is not self.classification or dim != self.extension_family_dim:
            raise InvalidInputError(
                f"classification {self.classification.value} does not match indices "
                f"({self.n_plus}, {self.n_minus})")

    @property
    def indices(self) -> Tuple[int, int]:
        return self.n_plus, self.n_minus

    def to_dict(self) -> Dict[str, Any]:
        return {
            'domain': self.domain.to_dict() if self.domain else None,
            'n_plus': self.n_plus,
            'n_minus': self.n_minus,
            'classification': self.classification.value,
            'extension_family_dim': self.extension_family_dim,
            'note': self.note,
        }


def classify_extension(n_plus: int, n_minus: int) -> Tuple[Classification, int]:
    """
    Von Neumann classification from deficiency indices

    Returns:
        (classification, dimension of the selfadjoint extension family)
    """
    if n_plus < 0 or n_minus < 0:
        raise InvalidInputError("deficiency indices are nonnegative")
    if n_plus == 0 and n_minus == 0:
        return Classification.ESSENTIALLY_SELFADJOINT, 0
    if n_plus == 0 or n_minus == 0:
        return Classification.MAXIMALLY_SYMMETRIC_NOT_SA, 0
    if n_plus == n_minus:
        return Classification.MANY_SELFADJOINT_EXTENSIONS, n_plus * n_minus
    return Classification.NO_SELFADJOINT_EXTENSION_NOT_MAXIMAL, 0


_NOTES = {
    IntervalKind.BOUNDED: "e^{-x} and e^{+x} are both square integrable; "
                          "selfadjoint extensions are labelled by a boundary phase",
    IntervalKind.HALF_LINE_RIGHT: "N_+ = span{e^{-x}}, N_- = {0}; "
                                  "maximally symmetric without proper symmetric extensions",
    IntervalKind.HALF_LINE_LEFT: "N_+ = {0}, N_- = span{e^{+x}}; "
                                 "maximally symmetric without proper symmetric extensions",
    IntervalKind.FULL_LINE: "neither exponential is square integrable; "
                            "the closure is the unique selfadjoint extension",
}


def momentum_deficiency(dom: IntervalDomain) -> DeficiencyReport:
    """
    Deficiency indices of -i d/dx on the interval

    e^{-x} is square integrable iff the interval is bounded below;
    e^{+x} iff it is bounded above. Endpoints only rescale the solutions.
    """
    n_plus = 1 if dom.bounded_below else 0
    n_minus = 1 if dom.bounded_above else 0
    classification, dim = classify_extension(n_plus, n_minus)
    return DeficiencyReport(n_plus, n_minus, classification, dim, dom, _NOTES[dom.kind])
