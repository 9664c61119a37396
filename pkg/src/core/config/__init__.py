"""
Moment Lab - Configuration
"""

from .settings import (RunConfig, GridPolicy, DEFAULT_TOLERANCES, load_config,
                       parse_tol_override, environment_values)

__all__ = ['RunConfig', 'GridPolicy', 'DEFAULT_TOLERANCES', 'load_config',
           'parse_tol_override', 'environment_values']
