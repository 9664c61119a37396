"""
Moment Lab - Command Line Interface
"""

from .cli import CLI

__all__ = ['CLI']
