"""
Moment Lab - Core Systems Module

Subpackages are imported directly (core.config, core.reports, core.workbench)
so that library modules can depend on core.errors alone.
"""

from .errors import (MomentLabError, InvalidInputError, NumericError, EXIT_OK, EXIT_MISMATCH,
                     EXIT_USAGE, EXIT_NUMERIC)

__all__ = ['MomentLabError', 'InvalidInputError', 'NumericError', 'EXIT_OK', 'EXIT_MISMATCH',
           'EXIT_USAGE', 'EXIT_NUMERIC']
