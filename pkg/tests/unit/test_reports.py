"""
Moment Lab - Unit Tests for Report Storage

Tests for schema-tagged report storage with explicit CRUD operations
"""

import sys
import os
import json
import math

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.reports import ReportStore, jsonable, render_json, schema_tag
from moments import Status


def test_store_initialization():
    """Test ReportStore initialization"""
    store = ReportStore()
    assert store.count() == 0
    assert store.list_names() == []
    assert store.save_to_disk() == []
    print("✓ Store initialization test passed")


def test_crud_operations():
    """Test create, read, update and delete"""
    store = ReportStore()

    # Create, then refuse a duplicate
    assert store.create('analysis', 'analysis', {'feasible': True}) is True
    assert store.create('analysis', 'analysis', {'feasible': False}) is False
    assert store.read('analysis')['data'] == {'feasible': True}

    # Update existing, refuse missing
    assert store.update('analysis', {'feasible': False}) is True
    assert store.read('analysis')['data'] == {'feasible': False}
    assert store.update('missing', {}) is False

    # Delete
    assert store.delete('analysis') is True
    assert store.delete('analysis') is False
    assert store.read('analysis') is None
    print("✓ CRUD operations test passed")


def test_put_and_listing():
    """Test put replaces and names are listed sorted"""
    store = ReportStore()
    store.put('b', 'stage', {'passed': True})
    store.put('a', 'stage', {'passed': True})
    store.put('b', 'stage', {'passed': False})
    assert store.list_names() == ['a', 'b']
    assert store.read('b')['data'] == {'passed': False}
    assert store.exists('a')
    store.clear()
    assert store.count() == 0
    print("✓ Put and listing test passed")


def test_jsonable_values():
    """Test numpy values, enums, complex numbers and non-finite floats"""
    assert jsonable(np.float64(0.5)) == 0.5
    assert jsonable(np.array([1, 2])) == [1, 2]
    assert jsonable(Status.DETERMINATE) == 'determinate'
    assert jsonable(1 + 2j) == [1.0, 2.0]
    assert jsonable([math.inf, -math.inf, math.nan]) == ['inf', '-inf', 'nan']
    assert jsonable({1: (True, None)}) == {'1': [True, None]}
    print("✓ JSON conversion test passed")


def test_render_is_schema_tagged():
    """Test rendering is deterministic with sorted keys"""
    text = render_json('analysis', {'b': 1, 'a': 2})
    payload = json.loads(text)
    assert payload['schema'] == schema_tag('analysis') == 'moment-lab/analysis/v1'
    assert payload['data'] == {'a': 2, 'b': 1}
    assert text == render_json('analysis', {'a': 2, 'b': 1})
    assert text.index('"a"') < text.index('"b"')
    print("✓ Schema tag test passed")


def test_persistence():
    """Test writing JSON and CSV files and reading them back"""
    import tempfile

    with tempfile.TemporaryDirectory() as temp_dir:
        store = ReportStore(report_dir=temp_dir)
        store.put('measure', 'measure', {'atoms': [[0.0, 1.0]]}, csv_text='position,weight\n0.0,1.0\n')
        store.put('deficiency', 'deficiency', {'n_plus': 1})
        written = store.save_to_disk()
        assert sorted(os.path.basename(p) for p in written) == ['deficiency.json', 'measure.csv', 'measure.json']

        reloaded = ReportStore(report_dir=temp_dir)
        entry = reloaded.load_from_disk('measure')
        assert entry['kind'] == 'measure'
        assert entry['data'] == {'atoms': [[0.0, 1.0]]}
        assert reloaded.load_from_disk('absent') is None
    print("✓ Persistence test passed")


if __name__ == '__main__':
    print("Running Report Storage Unit Tests...")
    test_store_initialization()
    test_crud_operations()
    test_put_and_listing()
    test_jsonable_values()
    test_render_is_schema_tagged()
    test_persistence()
    print("\nAll Report Storage tests passed!")
