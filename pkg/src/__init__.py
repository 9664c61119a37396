"""
Moment Lab v1.0 - Main Package

Subpackages (core, moments, measures, algebra, operators, povm, interfaces)
are imported with src/ on the path, as main.py and the tests arrange.
"""

__version__ = '1.0'
