"""
Moment Lab - Vacuum and Deformed States

- b-deformations omega_b(x) = omega(b* x b) of the Fock vacuum
- exact moment sequences omega_b(x^n) from the truncated GNS matrix
- an independent quadrature oracle for vacuum moments of Q^k
- spectral measure of psi_b for the truncated GNS matrix
"""

import logging
from typing import Optional

import mpmath
import numpy as np

from core.errors import InvalidInputError, InvalidObservableError
from algebra.element import NormalOrderedElement, adjoint, identity, normal_product
from algebra.fock import apply_to_vacuum, gns_matrix
from measures.quadrature import DiscreteMeasure
from moments.sequence import MomentKind, MomentSequence

logger = logging.getLogger(__name__)

EIGEN_MERGE_TOL = 1e-9


def deformed_expectation(b: NormalOrderedElement, x: NormalOrderedElement):
    """
    omega_b(x) = omega(b* x b)

    Only the identity coefficient of the normally ordered b* x b survives
    on the vacuum, so the value is exact in the coefficient arithmetic.
    """
    return normal_product(normal_product(adjoint(b), x), b).vacuum_expectation()


def exact_truncation(x: NormalOrderedElement, b: NormalOrderedElement, K: int) -> int:
    """Lowest Fock level N that keeps pi(x)^n pi(b) psi_0 exact for n <= K"""
    return x.degree * K + b.degree


def deformed_moment_sequence(x: NormalOrderedElement, b: Optional[NormalOrderedElement] = None,
                             K: int = 4, N: Optional[int] = None,
                             kind: MomentKind = MomentKind.HAMBURGER) -> MomentSequence:
    """
    Moments omega_b(x^n) for n = 0..K

    Args:
        x: Hermitian element
        b: Deformer (identity when omitted)
        K: Highest moment index
        N: Truncation override; values below the exact level are flagged

    Returns:
        MomentSequence (the zero sequence for a singular deformation)

    Raises:
        InvalidObservableError: x is not Hermitian
    """
    b = identity() if b is None else b
    if not x.is_hermitian():
        raise InvalidObservableError(f"element {x!r} is not Hermitian")
    if deformed_expectation(b, identity()) == 0:
        logger.info("singular deformation, returning the zero moment sequence")
        return MomentSequence.zero_measure(K, kind)

    exact_level = exact_truncation(x, b, K)
    if N is None:
        N = exact_level
    elif N < exact_level:
        logger.warning(f"truncation N={N} is below the exact level {exact_level}; moments are approximate")

    mat = gns_matrix(x, N).matrix
    psi = apply_to_vacuum(b, N).components
    values = []
    v = psi
    for _ in range(K + 1):
        values.append(float(np.vdot(psi, v).real))
        v = mat @ v
    return MomentSequence(tuple(values), kind)


def gaussian_q_moment_oracle(k: int, n: int, digits: int = 30) -> float:
    """
    pi^(-1/2) * integral of x^(kn) exp(-x^2) over the real line

    Computed by adaptive quadrature, independently of the Fock pipeline.
    """
    if k < 0 or n < 0:
        raise InvalidInputError("k and n must be nonnegative")
    p = k * n
    if p % 2:
        return 0.0
    ctx = mpmath.MPContext()
    ctx.dps = digits
    peak = max(ctx.one, ctx.sqrt(ctx.mpf(p) / 2))
    half = ctx.quad(lambda t: t ** p * ctx.exp(-t * t), [0, peak, 2 * peak, ctx.inf])
    return float(2 * half / ctx.sqrt(ctx.pi))


def gns_spectral_measure(x: NormalOrderedElement, b: Optional[NormalOrderedElement] = None,
                         N: int = 40) -> DiscreteMeasure:
    """
    Spectral measure of psi_b for the truncated matrix of a Hermitian x

    Atoms are the eigenvalues, weights |<v|psi_b>|^2. The measure reproduces
    omega_b(x^n) exactly for n <= 2 (N - deg b) / deg x.
    """
    b = identity() if b is None else b
    if not x.is_hermitian():
        raise InvalidObservableError(f"element {x!r} is not Hermitian")
    rep = gns_matrix(x, max(N, x.degree, b.degree))
    psi = apply_to_vacuum(b, rep.dim - 1).components
    if not np.any(psi):
        raise InvalidInputError("singular deformation: psi_b is zero and carries the zero measure")
    hermitian = (rep.matrix + rep.matrix.conj().T) / 2
    eigenvalues, vectors = np.linalg.eigh(hermitian)
    weights = np.abs(vectors.conj().T @ psi) ** 2

    atoms = []
    scale = max(float(np.max(np.abs(eigenvalues))), 1.0)
    for value, weight in zip(eigenvalues, weights):
        if atoms and value - atoms[-1][0] <= EIGEN_MERGE_TOL * scale:
            atoms[-1][1] += weight
        else:
            atoms.append([float(value), float(weight)])
    return DiscreteMeasure(tuple((x_, w) for x_, w in atoms))
