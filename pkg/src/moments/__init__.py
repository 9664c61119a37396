"""
Moment Lab - Moment Problem Core

Existence and determinacy analysis of Hamburger and Stieltjes problems
"""

from .sequence import (MomentKind, MomentSequence, DensitySpec, Support,
                       gaussian_power_moments, builtin_density, vacuum_position_moment)
from .existence import ExistenceReport, hamburger_existence, stieltjes_existence
from .determinacy import (Status, Criterion, DeterminacyVerdict, SequenceAnalysis,
                          carleman_test, cramer_test, krein_test, analyze_sequence)

__all__ = [
    'MomentKind', 'MomentSequence', 'DensitySpec', 'Support',
    'gaussian_power_moments', 'builtin_density', 'vacuum_position_moment',
    'ExistenceReport', 'hamburger_existence', 'stieltjes_existence',
    'Status', 'Criterion', 'DeterminacyVerdict', 'SequenceAnalysis',
    'carleman_test', 'cramer_test', 'krein_test', 'analyze_sequence',
]
