"""
Moment Lab - Measure Reconstruction
"""

from .quadrature import (DiscreteMeasure, JacobiMatrix, MomentCheck, Reconstruction,
                         jacobi_from_moments, gauss_quadrature, measure_moments,
                         verify_moment_solution, reconstruct_measure)

__all__ = [
    'DiscreteMeasure', 'JacobiMatrix', 'MomentCheck', 'Reconstruction',
    'jacobi_from_moments', 'gauss_quadrature', 'measure_moments',
    'verify_moment_solution', 'reconstruct_measure',
]
