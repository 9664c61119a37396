"""
Moment Lab - Report Storage

Deterministic storage for command results:
- in-memory dict keyed by report name
- explicit CRUD semantics
- schema-tagged JSON rendering with sorted keys
- optional persistence of JSON and CSV files to a report directory
"""

import json
import logging
import math
import os
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

SCHEMA_PREFIX = 'moment-lab'
SCHEMA_VERSION = 1


def schema_tag(kind: str) -> str:
    return f"{SCHEMA_PREFIX}/{kind}/v{SCHEMA_VERSION}"


def jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, 'to_dict'):
        return jsonable(value.to_dict())
    if hasattr(value, 'tolist'):
        return jsonable(value.tolist())
    if hasattr(value, 'value') and isinstance(getattr(value, 'value'), str):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, complex):
        return [jsonable(value.real), jsonable(value.imag)]
    try:
        number = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isfinite(number):
        return number
    return 'nan' if math.isnan(number) else ('inf' if number > 0 else '-inf')


def render_json(kind: str, data: Any) -> str:
    """Schema-tagged, key-sorted JSON text"""
    return json.dumps({'schema': schema_tag(kind), 'data': jsonable(data)}, indent=2, sort_keys=True)


class ReportStore:
    """
    Report storage for a session

    Each entry holds a report kind, its JSON-ready payload and an optional
    CSV rendering. Nothing is written to disk unless a report directory is set.
    """

    def __init__(self, report_dir: Optional[str] = None):
        """
        Initialize the store

        Args:
            report_dir: Directory receiving <name>.json / <name>.csv on save
        """
        self.reports: Dict[str, Dict[str, Any]] = {}
        self.report_dir = report_dir

    def create(self, name: str, kind: str, data: Any, csv_text: Optional[str] = None) -> bool:
        """
        Store a new report

        Returns:
            bool: False if the name is taken
        """
        if name in self.reports:
            return False
        self.reports[name] = {'kind': kind, 'data': jsonable(data), 'csv': csv_text}
        return True

    def read(self, name: str) -> Optional[Dict[str, Any]]:
        return self.reports.get(name)

    def update(self, name: str, data: Any, csv_text: Optional[str] = None) -> bool:
        if name not in self.reports:
            return False
        self.reports[name]['data'] = jsonable(data)
        if csv_text is not None:
            self.reports[name]['csv'] = csv_text
        return True

    def put(self, name: str, kind: str, data: Any, csv_text: Optional[str] = None) -> None:
        """Create or replace"""
        self.reports[name] = {'kind': kind, 'data': jsonable(data), 'csv': csv_text}

    def delete(self, name: str) -> bool:
        if name not in self.reports:
            return False
        del self.reports[name]
        return True

    def exists(self, name: str) -> bool:
        return name in self.reports

    def list_names(self) -> List[str]:
        return sorted(self.reports)

    def count(self) -> int:
        return len(self.reports)

    def clear(self) -> None:
        self.reports.clear()

    def render(self, name: str) -> str:
        entry = self.reports[name]
        return render_json(entry['kind'], entry['data'])

    def save_to_disk(self) -> List[str]:
        """
        Write every report to the report directory

        Returns:
            Paths written (empty when no directory is configured)
        """
        if not self.report_dir:
            return []
        os.makedirs(self.report_dir, exist_ok=True)
        written = []
        for name in self.list_names():
            path = os.path.join(self.report_dir, f"{name}.json")
            with open(path, 'w') as f:
                f.write(self.render(name) + '\n')
            written.append(path)
            csv_text = self.reports[name].get('csv')
            if csv_text:
                csv_path = os.path.join(self.report_dir, f"{name}.csv")
                with open(csv_path, 'w') as f:
                    f.write(csv_text)
                written.append(csv_path)
        logger.info(f"wrote {len(written)} report files to {self.report_dir}")
        return written

    def load_from_disk(self, name: str) -> Optional[Dict[str, Any]]:
        """Read <name>.json back; returns None when absent"""
        if not self.report_dir:
            return None
        path = os.path.join(self.report_dir, f"{name}.json")
        if not os.path.exists(path):
            return None
        with open(path, 'r') as f:
            payload = json.load(f)
        kind = payload.get('schema', '').split('/')[1] if '/' in payload.get('schema', '') else 'unknown'
        self.reports[name] = {'kind': kind, 'data': payload.get('data'), 'csv': None}
        return self.reports[name]
