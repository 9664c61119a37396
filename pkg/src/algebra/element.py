"""
Moment Lab - Normal-Ordered Elements

One-mode CCR *-algebra generated by a, a* with [a, a*] = 1:
- elements stored as coefficients of normally ordered monomials a*^n a^m
- products reordered with the CCR, adjoint, commutator
- position, momentum and the Fourier rotation a -> i a
- shorthand parser ("Q^4", "A*A", "2P^2 + I") and JSON codec
"""

import math
import re
from fractions import Fraction
from numbers import Number
from typing import Any, Dict, Iterable, Mapping, Tuple

from core.errors import InvalidInputError

Monomial = Tuple[int, int]

_I_POWERS = (1, 1j, -1, -1j)


def _clean(coeffs: Iterable[Tuple[Monomial, Number]]) -> Dict[Monomial, Number]:
    out: Dict[Monomial, Number] = {}
    for key, value in coeffs:
        out[key] = out.get(key, 0) + value
    return {key: value for key, value in out.items() if value != 0}


class NormalOrderedElement:
    """
    Finite combination sum c_{n,m} a*^n a^m

    Coefficients may be int, Fraction, float or complex; products keep
    integer and rational coefficients exact.
    """

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs: Mapping[Monomial, Number] = None):
        coeffs = coeffs or {}
        for (n, m), value in coeffs.items():
            if int(n) != n or int(m) != m or n < 0 or m < 0:
                raise InvalidInputError(f"monomial exponents must be nonnegative integers, got {(n, m)}")
            if not isinstance(value, Number):
                raise InvalidInputError(f"coefficient of {(n, m)} is not a number")
            if isinstance(value, (float, complex)) and not math.isfinite(abs(value)):
                raise InvalidInputError(f"coefficient of {(n, m)} is not finite")
        self._coeffs = _clean(((int(n), int(m)), v) for (n, m), v in coeffs.items())

    @property
    def coeffs(self) -> Dict[Monomial, Number]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        return max((n + m for n, m in self._coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, n: int, m: int) -> Number:
        return self._coeffs.get((n, m), 0)

    def vacuum_expectation(self) -> Number:
        """omega(x): only the identity coefficient survives on the vacuum"""
        return self._coeffs.get((0, 0), 0)

    def scaled(self, factor: Number) -> 'NormalOrderedElement':
        return NormalOrderedElement({k: factor * v for k, v in self._coeffs.items()})

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.close_to(adjoint(self), tol)

    def close_to(self, other: 'NormalOrderedElement', tol: float = 1e-12) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        scale = max([abs(v) for v in self._coeffs.values()] + [1.0])
        return all(abs(self.coefficient(*k) - other.coefficient(*k)) <= tol * scale for k in keys)

    def __add__(self, other: 'NormalOrderedElement') -> 'NormalOrderedElement':
        if isinstance(other, Number):
            other = identity().scaled(other)
        return NormalOrderedElement(_clean(list(self._coeffs.items()) + list(other._coeffs.items())))

    __radd__ = __add__

    def __neg__(self) -> 'NormalOrderedElement':
        return self.scaled(-1)

    def __sub__(self, other: 'NormalOrderedElement') -> 'NormalOrderedElement':
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scaled(other)
        return normal_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scaled(other)
        return NotImplemented

    def __pow__(self, k: int) -> 'NormalOrderedElement':
        result = identity()
        for _ in range(k):
            result = normal_product(result, self)
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalOrderedElement) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(sorted(self._coeffs.items(), key=lambda kv: kv[0])))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for (n, m), value in sorted(self._coeffs.items()):
            word = ("a*" + (f"^{n}" if n > 1 else "") if n else "") + ("a" + (f"^{m}" if m > 1 else "") if m else "")
            terms.append(f"({value}){word or 'I'}")
        return " + ".join(terms)

    def to_dict(self) -> Dict[str, Any]:
        rows = []
        for (n, m), value in sorted(self._coeffs.items()):
            value = complex(value)
            rows.append([n, m, value.real, value.imag])
        return {'coeffs': rows}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'NormalOrderedElement':
        try:
            rows = data['coeffs']
            coeffs: Dict[Monomial, Number] = {}
            for n, m, re_part, im_part in rows:
                value = complex(re_part, im_part)
                coeffs[(int(n), int(m))] = coeffs.get((int(n), int(m)), 0) + (value.real if value.imag == 0 else value)
        except (KeyError, TypeError, ValueError):
            raise InvalidInputError("element JSON needs 'coeffs': [[n, m, re, im], ...]")
        return cls(coeffs)


def identity() -> NormalOrderedElement:
    return NormalOrderedElement({(0, 0): 1})


def annihilation() -> NormalOrderedElement:
    return NormalOrderedElement({(0, 1): 1})


def creation() -> NormalOrderedElement:
    return NormalOrderedElement({(1, 0): 1})


def normal_product(x: NormalOrderedElement, y: NormalOrderedElement) -> NormalOrderedElement:
    """
    Normally ordered product x y

    (a*^n a^m)(a*^p a^q) = sum_k k! C(m,k) C(p,k) a*^(n+p-k) a^(m+q-k),
    obtained by applying [a, a*] = 1 repeatedly.
    """
    terms = []
    for (n, m), cx in x._coeffs.items():
        for (p, q), cy in y._coeffs.items():
            for k in range(min(m, p) + 1):
                weight = math.factorial(k) * math.comb(m, k) * math.comb(p, k)
                terms.append(((n + p - k, m + q - k), weight * cx * cy))
    return NormalOrderedElement(_clean(terms))


def adjoint(x: NormalOrderedElement) -> NormalOrderedElement:
    """(c a*^n a^m)* = conj(c) a*^m a^n"""
    return NormalOrderedElement({(m, n): value.conjugate() for (n, m), value in x._coeffs.items()})


def commutator(x: NormalOrderedElement, y: NormalOrderedElement) -> NormalOrderedElement:
    return normal_product(x, y) - normal_product(y, x)


def position_power(k: int) -> NormalOrderedElement:
    """
    Q^k = ((a + a*) / sqrt 2)^k in normal order

    Even powers carry exact rational coefficients.
    """
    if k < 0:
        raise InvalidInputError(f"power must be nonnegative, got {k}")
    base = annihilation() + creation()
    power = base ** k
    factor = Fraction(1, 2 ** (k // 2))
    if k % 2:
        factor = float(factor) / math.sqrt(2)
    return power.scaled(factor)


def momentum() -> NormalOrderedElement:
    """P = i (a - a*) / sqrt 2"""
    c = 1j / math.sqrt(2)
    return NormalOrderedElement({(0, 1): c, (1, 0): -c})


def momentum_power(k: int) -> NormalOrderedElement:
    return momentum() ** k


def fourier_rotate(x: NormalOrderedElement) -> NormalOrderedElement:
    """
    Image of x under a -> i a, a* -> -i a*

    The map fixes the vacuum and sends Q to P and P to -Q.
    """
    coeffs = {}
    for (n, m), value in x._coeffs.items():
        coeffs[(n, m)] = value * _I_POWERS[(3 * n + m) % 4]
    return NormalOrderedElement(coeffs)


_FACTOR = re.compile(r'(A\*|A|Q|P|I)(?:\^(\d+))?')
_COEFF = re.compile(r'^([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?)')


def _generator(symbol: str) -> NormalOrderedElement:
    return {
        'A*': creation,
        'A': annihilation,
        'Q': lambda: position_power(1),
        'P': momentum,
        'I': identity,
    }[symbol]()


def _parse_term(term: str) -> NormalOrderedElement:
    term = term.replace(' ', '')
    coefficient: Number = 1
    match = _COEFF.match(term)
    if match:
        try:
            coefficient = Fraction(match.group(1))
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"bad coefficient '{match.group(1)}' in element term '{term}'")
        term = term[match.end():].lstrip('*')
    elif term.startswith('-'):
        coefficient, term = -1, term[1:]
    elif term.startswith('+'):
        term = term[1:]
    if not term:
        return identity().scaled(coefficient)
    result = identity()
    pos = 0
    while pos < len(term):
        match = _FACTOR.match(term, pos)
        if not match:
            raise InvalidInputError(f"cannot parse element term '{term}' at position {pos}")
        symbol, exponent = match.group(1), int(match.group(2) or 1)
        if symbol == 'Q':
            factor = position_power(exponent)
        else:
            factor = _generator(symbol) ** exponent
        result = normal_product(result, factor)
        pos = match.end()
    return result.scaled(coefficient)


def parse_element(text: str) -> NormalOrderedElement:
    """
    Parse shorthand such as "Q^4", "P^2", "A*A", "A", "A*", "I", "2A*A + I"

    Factors are written side by side; terms are joined with + or -.
    """
    text = text.strip()
    if not text:
        raise InvalidInputError("empty element expression")
    terms = re.split(r'(?<=[\dAQPI*^])\s*(?=[+-])', text)
    result = NormalOrderedElement()
    for term in terms:
        result = result + _parse_term(term)
    return result
