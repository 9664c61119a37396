"""
Moment Lab - Operator Analysis
"""

from .deficiency import (IntervalKind, IntervalDomain, Classification, DeficiencyReport,
                         classify_extension, momentum_deficiency)
from .discretize import discretize_momentum, grid_nodes

__all__ = [
    'IntervalKind', 'IntervalDomain', 'Classification', 'DeficiencyReport',
    'classify_extension', 'momentum_deficiency', 'discretize_momentum', 'grid_nodes',
]
