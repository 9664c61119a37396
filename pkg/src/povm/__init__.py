"""
Moment Lab - Grid POVMs
"""

from .grid import CellGrid, GridPOVM, PovmValidation, validate_povm, random_povm, spectral_povm
from .dilation import (NaimarkDilation, DilationCheck, DecompositionDefect, effect_sqrt,
                       naimark_dilate, povm_integral_operator, decomposition_defect,
                       decompose_check, compress_povm)
from .families import (Combination, ProbeClosure, ConsistentFamily, ConsistencyReport, GramReport,
                       complex_vector, probe_closure, induced_family, consistency_check,
                       seminorm_polarization, family_to_povm)
from .halfline import HalfLineMasses, sample_window, halfline_momentum_measures

__all__ = [
    'CellGrid', 'GridPOVM', 'PovmValidation', 'validate_povm', 'random_povm', 'spectral_povm',
    'NaimarkDilation', 'DilationCheck', 'DecompositionDefect', 'effect_sqrt',
    'naimark_dilate', 'povm_integral_operator', 'decomposition_defect',
    'decompose_check', 'compress_povm',
    'Combination', 'ProbeClosure', 'ConsistentFamily', 'ConsistencyReport', 'GramReport',
    'complex_vector', 'probe_closure', 'induced_family', 'consistency_check',
    'seminorm_polarization', 'family_to_povm',
    'HalfLineMasses', 'sample_window', 'halfline_momentum_measures',
]
