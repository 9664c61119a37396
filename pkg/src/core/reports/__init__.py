"""
Moment Lab - Report Storage
"""

from .storage import ReportStore, render_json, jsonable, schema_tag

__all__ = ['ReportStore', 'render_json', 'jsonable', 'schema_tag']
