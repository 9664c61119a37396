"""
Moment Lab - Truncated Fock Representation

Vacuum GNS representation of the one-mode CCR algebra restricted to Fock
levels 0..N, with a* psi_k = sqrt(k+1) psi_{k+1} and a psi_k = sqrt(k) psi_{k-1}.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from core.errors import InvalidInputError, TruncationError
from algebra.element import NormalOrderedElement


@dataclass(frozen=True)
class FockVector:
    """Amplitudes over Fock levels 0..N"""

    components: np.ndarray

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=complex).reshape(-1)
        if comps.size == 0:
            raise InvalidInputError("a Fock vector needs at least the vacuum level")
        if not np.all(np.isfinite(comps)):
            raise InvalidInputError("Fock vector amplitudes must be finite")
        comps.setflags(write=False)
        object.__setattr__(self, 'components', comps)

    @property
    def N(self) -> int:
        return self.components.size - 1

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.components, self.components).real)

    @classmethod
    def vacuum(cls, N: int = 0) -> 'FockVector':
        comps = np.zeros(N + 1, dtype=complex)
        comps[0] = 1.0
        return cls(comps)

    def padded(self, N: int) -> 'FockVector':
        if N < self.N:
            raise InvalidInputError(f"cannot pad a level-{self.N} vector down to {N}")
        comps = np.zeros(N + 1, dtype=complex)
        comps[:self.N + 1] = self.components
        return FockVector(comps)

    def to_list(self):
        return [[float(z.real), float(z.imag)] for z in self.components]

    @classmethod
    def from_list(cls, rows: Sequence) -> 'FockVector':
        try:
            comps = [complex(r[0], r[1]) if isinstance(r, (list, tuple)) else complex(r) for r in rows]
        except (TypeError, ValueError, IndexError):
            raise InvalidInputError("vector entries must be numbers or [re, im] pairs")
        return cls(np.array(comps, dtype=complex))


@dataclass(frozen=True)
class TruncatedRep:
    """Matrix <psi_j | pi(x) psi_k> on levels 0..N (or any finite Hermitian model)"""

    matrix: np.ndarray
    degree: int = 0

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidInputError(f"representation matrix must be square, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, 'matrix', mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def exact_block(self) -> np.ndarray:
        """Leading block whose entries are unaffected by truncation"""
        size = max(self.dim - self.degree, 0)
        return self.matrix[:size, :size]

    def is_hermitian(self, tol: float = 1e-12, block: int = None) -> bool:
        size = self.dim if block is None else block
        sub = self.matrix[:size, :size]
        scale = max(float(np.max(np.abs(sub))) if sub.size else 0.0, 1.0)
        return bool(np.max(np.abs(sub - sub.conj().T), initial=0.0) <= tol * scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dim': self.dim,
            'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }


def _ladder_factor(k: int, n: int, m: int) -> float:
    """Amplitude of a*^n a^m psi_k on level k - m + n"""
    return math.sqrt(math.perm(k, m)) * math.sqrt(math.perm(k - m + n, n))


def gns_matrix(x: NormalOrderedElement, N: int) -> TruncatedRep:
    """
    Matrix of pi_omega(x) on Fock levels 0..N

    Args:
        x: Algebra element
        N: Highest Fock level kept

    Returns:
        TruncatedRep of dimension N+1

    Raises:
        TruncationError: N is below the degree of x
    """
    if N < x.degree:
        raise TruncationError(f"truncation N={N} is below the element degree {x.degree}")
    mat = np.zeros((N + 1, N + 1), dtype=complex)
    for (n, m), value in x.coeffs.items():
        c = complex(value)
        for k in range(m, N + 1):
            target = k - m + n
            if target > N:
                break
            mat[target, k] += c * _ladder_factor(k, n, m)
    return TruncatedRep(mat, x.degree)


def apply_to_vacuum(b: NormalOrderedElement, N: int) -> FockVector:
    """pi(b) psi_0; only the pure-creation part of b survives"""
    if N < b.degree:
        raise TruncationError(f"truncation N={N} is below the element degree {b.degree}")
    comps = np.zeros(N + 1, dtype=complex)
    for (n, m), value in b.coeffs.items():
        if m == 0:
            comps[n] += complex(value) * math.sqrt(math.factorial(n))
    return FockVector(comps)
