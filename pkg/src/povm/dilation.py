"""
Moment Lab - Naimark Dilation and Operator Decomposition

- Naimark dilation V = [Q_1^{1/2}; ...; Q_M^{1/2}] with block projectors P_i
- the operator A = sum lambda_i Q_i assembled from a POVM
- decomposition check of a Hermitian matrix by a POVM
- compression of a POVM to a subspace
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from core.errors import InvalidInputError, PositivityError
from algebra.fock import TruncatedRep
from povm.grid import TOL_PSD, TOL_SUM, GridPOVM, validate_povm

logger = logging.getLogger(__name__)

ORTHONORMAL_TOL = 1e-12


def effect_sqrt(effect: np.ndarray, tol_psd: float = TOL_PSD) -> np.ndarray:
    """
    Positive square root of an effect

    Args:
        effect: Hermitian d x d matrix
        tol_psd: Eigenvalues in [-tol_psd, 0) are clipped to zero

    Returns:
        The positive square root

    Raises:
        PositivityError: an eigenvalue lies below -tol_psd
    """
    values, vectors = np.linalg.eigh((effect + effect.conj().T) / 2)
    if values[0] < -tol_psd:
        raise PositivityError(f"effect has eigenvalue {values[0]:.3e} below -{tol_psd:g}",
                              detail={'min_eigenvalue': float(values[0])})
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


@dataclass(frozen=True)
class DilationCheck:
    isometry_defect: float
    effect_defect: float

    def passes(self, tol: float = 1e-12) -> bool:
        return max(self.isometry_defect, self.effect_defect) <= tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            'isometry_defect': self.isometry_defect,
            'effect_defect': self.effect_defect,
        }


class NaimarkDilation:
    """Isometry V: C^d -> C^{dM} and the block PVM P_i on C^{dM}"""

    def __init__(self, isometry: np.ndarray, d: int, M: int):
        self.isometry = np.asarray(isometry, dtype=complex)
        self.d = d
        self.M = M

    @property
    def dilated_dim(self) -> int:
        return self.d * self.M

    def block(self, i: int) -> np.ndarray:
        """Projector onto the i-th d-dimensional block"""
        p = np.zeros((self.dilated_dim, self.dilated_dim), dtype=complex)
        idx = slice(i * self.d, (i + 1) * self.d)
        p[idx, idx] = np.eye(self.d)
        return p

    @property
    def blocks(self) -> list:
        return [self.block(i) for i in range(self.M)]

    def compressed_effect(self, i: int) -> np.ndarray:
        """V* P_i V"""
        rows = self.isometry[i * self.d:(i + 1) * self.d]
        return rows.conj().T @ rows

    def dilated_operator(self, representatives: Sequence[float]) -> np.ndarray:
        """sum lambda_i P_i on the dilated space"""
        return np.diag(np.repeat(np.asarray(representatives, dtype=float), self.d)).astype(complex)

    def check(self, q: GridPOVM) -> DilationCheck:
        """
        Defects of V* V = I and V* P_i V = Q_i against the dilated POVM

        The block projectors are exact by construction, so only the
        isometry carries numerical error.
        """
        v = self.isometry
        isometry_defect = float(np.max(np.abs(v.conj().T @ v - np.eye(self.d))))
        effect_defect = float(max(np.max(np.abs(self.compressed_effect(i) - q.effects[i]))
                                  for i in range(self.M)))
        return DilationCheck(isometry_defect, effect_defect)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'd': self.d,
            'M': self.M,
            'isometry': [[[float(z.real), float(z.imag)] for z in row] for row in self.isometry],
        }


def naimark_dilate(q: GridPOVM, tol_psd: float = TOL_PSD, tol_sum: float = TOL_SUM) -> NaimarkDilation:
    """
    Dilate a POVM to a PVM

    Args:
        q: Valid POVM
        tol_psd: Clip threshold for slightly negative effect eigenvalues

    Returns:
        NaimarkDilation with V* P_i V = Q_i and V* V = I

    Raises:
        InvalidInputError: effects are not normalized
        PositivityError: an effect is indefinite beyond tol_psd
    """
    report = validate_povm(q, tol_psd, tol_sum)
    if report.sum_defect > tol_sum or report.hermitian_defect > tol_sum:
        raise InvalidInputError(f"not a normalized POVM (sum defect {report.sum_defect:.3e})")
    roots = [effect_sqrt(e, tol_psd) for e in q.effects]
    return NaimarkDilation(np.vstack(roots), q.d, q.M)


def povm_integral_operator(q: GridPOVM) -> np.ndarray:
    """A = sum_i lambda_i Q_i with lambda_i the cell representatives"""
    a = np.einsum('i,ijk->jk', q.grid.representatives, q.effects)
    return (a + a.conj().T) / 2


def _matrix_of(a: Any) -> np.ndarray:
    return a.matrix if isinstance(a, TruncatedRep) else np.asarray(a, dtype=complex)


@dataclass(frozen=True)
class DecompositionDefect:
    first_moment: float
    second_moment: float

    def to_dict(self) -> Dict[str, Any]:
        return {'first_moment': self.first_moment, 'second_moment': self.second_moment}


def decomposition_defect(q: GridPOVM, a: Any, domain_dim: int) -> DecompositionDefect:
    """
    Worst violations of <psi|A phi> = sum lambda_i <psi|Q_i phi> and
    ||A phi||^2 = sum lambda_i^2 <phi|Q_i phi> over basis vectors phi of the domain block

    Args:
        q: POVM on C^d
        a: d x d matrix or TruncatedRep
        domain_dim: Number of leading basis vectors spanning the domain

    Returns:
        DecompositionDefect with the first and second moment violations

    Raises:
        InvalidInputError: shapes disagree or domain_dim is outside 1..d
    """
    mat = _matrix_of(a)
    if mat.shape != (q.d, q.d):
        raise InvalidInputError(f"operator of shape {mat.shape} does not act on C^{q.d}")
    if not 1 <= domain_dim <= q.d:
        raise InvalidInputError(f"domain dimension {domain_dim} outside 1..{q.d}")
    lam = q.grid.representatives
    first = np.einsum('i,ijk->jk', lam, q.effects)
    second = np.einsum('i,ijj->j', lam ** 2, q.effects).real
    cols = slice(0, domain_dim)
    first_defect = float(np.max(np.abs(mat[:, cols] - first[:, cols])))
    norms = np.sum(np.abs(mat[:, cols]) ** 2, axis=0)
    second_defect = float(np.max(np.abs(norms - second[cols])))
    return DecompositionDefect(first_defect, second_defect)


def decompose_check(q: GridPOVM, a: Any, domain_dim: int, tol: float = 1e-10) -> bool:
    """
    True iff the POVM decomposes A on the first domain_dim coordinates

    Both moment defects of decomposition_defect must be within tol.
    """
    defect = decomposition_defect(q, a, domain_dim)
    return defect.first_moment <= tol and defect.second_moment <= tol


def compress_povm(q: GridPOVM, subspace_basis: Sequence, tol: float = ORTHONORMAL_TOL) -> GridPOVM:
    """
    Effects B* Q_i B for the orthonormal columns B

    Args:
        q: POVM on C^d
        subspace_basis: Orthonormal vectors of C^d
        tol: Largest accepted defect of B* B = I

    Returns:
        GridPOVM on the subspace, one dimension per basis vector

    Raises:
        InvalidInputError: the basis is not orthonormal or has the wrong length
    """
    vectors = [np.asarray(getattr(v, 'components', v), dtype=complex).reshape(-1) for v in subspace_basis]
    if not vectors:
        raise InvalidInputError("compression needs at least one basis vector")
    if any(v.size != q.d for v in vectors):
        raise InvalidInputError(f"basis vectors must have dimension {q.d}")
    basis = np.column_stack(vectors)
    gram_defect = float(np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[1]))))
    if gram_defect > tol:
        raise InvalidInputError(f"subspace basis is not orthonormal (defect {gram_defect:.3e})")
    effects = basis.conj().T @ q.effects @ basis
    return GridPOVM(q.grid, effects)
