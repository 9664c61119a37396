"""
Moment Lab - One-Mode CCR Algebra
"""

from .element import (NormalOrderedElement, identity, annihilation, creation, normal_product,
                      adjoint, commutator, position_power, momentum, momentum_power,
                      fourier_rotate, parse_element)
from .fock import FockVector, TruncatedRep, gns_matrix, apply_to_vacuum
from .states import (deformed_expectation, deformed_moment_sequence, exact_truncation,
                     gaussian_q_moment_oracle, gns_spectral_measure)

__all__ = [
    'NormalOrderedElement', 'identity', 'annihilation', 'creation', 'normal_product',
    'adjoint', 'commutator', 'position_power', 'momentum', 'momentum_power',
    'fourier_rotate', 'parse_element',
    'FockVector', 'TruncatedRep', 'gns_matrix', 'apply_to_vacuum',
    'deformed_expectation', 'deformed_moment_sequence', 'exact_truncation',
    'gaussian_q_moment_oracle', 'gns_spectral_measure',
]
