"""
Moment Lab - Workbench
"""

from .controller import Workbench, StageResult, DETERMINACY_TABLE

__all__ = ['Workbench', 'StageResult', 'DETERMINACY_TABLE']
