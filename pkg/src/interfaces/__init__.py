"""
Moment Lab - Interfaces Module
"""

from .cli import CLI

__all__ = ['CLI']
