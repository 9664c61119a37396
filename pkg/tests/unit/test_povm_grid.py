"""
Moment Lab - Unit Tests for Grid POVMs

Tests for cell grids, POVM validation and spectral PVMs
"""

import sys
import os

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.errors import InvalidInputError
from povm import CellGrid, GridPOVM, random_povm, spectral_povm, validate_povm


def test_uniform_grid():
    """Test cells, tails and default representatives"""
    grid = CellGrid.uniform(-1, 1, 4)
    assert grid.M == 6
    assert np.allclose(grid.representatives, [-1.5, -0.75, -0.25, 0.25, 0.75, 1.5])
    assert grid.is_tail(0) and grid.is_tail(5) and not grid.is_tail(3)
    assert grid.cell_edges(0) == (-np.inf, -1.0)
    assert grid.cell_edges(5) == (1.0, np.inf)
    print("✓ Uniform grid test passed")


def test_cell_index_right_closed():
    """Test cells are (x_{i-1}, x_i]"""
    grid = CellGrid([0.0, 1.0])
    assert grid.cell_index(-5.0) == 0
    assert grid.cell_index(0.0) == 0
    assert grid.cell_index(0.5) == 1
    assert grid.cell_index(1.0) == 1
    assert grid.cell_index(1.0 + 1e-12) == 2
    print("✓ Cell index test passed")


def test_grid_validation():
    """Test boundary order and representative placement"""
    with pytest.raises(InvalidInputError):
        CellGrid([1.0, 0.0])
    with pytest.raises(InvalidInputError):
        CellGrid([])
    with pytest.raises(InvalidInputError):
        CellGrid([0.0, 1.0], representatives=[-1.0, 2.0, 3.0])
    with pytest.raises(InvalidInputError):
        CellGrid([0.0, 1.0], representatives=[-1.0, 0.5])
    with pytest.raises(InvalidInputError):
        CellGrid.uniform(1, 0, 4)
    grid = CellGrid([0.0, 1.0], representatives=[-1.0, 0.5, 2.0])
    assert CellGrid.from_dict(grid.to_dict()) == grid
    print("✓ Grid validation test passed")


def test_random_povm_is_valid():
    """Test random POVMs are positive and normalized"""
    rng = np.random.default_rng(42)
    for d, M in ((1, 2), (3, 5), (4, 8)):
        q = random_povm(d, M, rng)
        report = validate_povm(q)
        assert report.ok, report
        assert report.worst_eig > 0
        assert q.d == d and q.M == M
        assert not q.is_projective() or d == 1
    print("✓ Random POVM validity test passed")


def test_invalid_povms_detected():
    """Test unnormalized and indefinite effects fail validation"""
    rng = np.random.default_rng(3)
    q = random_povm(3, 4, rng)
    scaled = GridPOVM(q.grid, q.effects * 1.1)
    report = validate_povm(scaled)
    assert not report.ok
    assert report.sum_defect == pytest.approx(0.1, rel=1e-8)

    grid = CellGrid([0.0])
    indefinite = GridPOVM(grid, [np.diag([1.2, 0.5]), np.diag([-0.2, 0.5])])
    report = validate_povm(indefinite)
    assert not report.ok
    assert report.worst_eig == pytest.approx(-0.2)
    assert report.sum_defect < 1e-15
    print("✓ Invalid POVM detection test passed")


def test_povm_shape_checks():
    """Test effect stacks must match the grid"""
    grid = CellGrid.uniform(-1, 1, 2)
    with pytest.raises(InvalidInputError):
        GridPOVM(grid, np.zeros((3, 2, 2)))
    with pytest.raises(InvalidInputError):
        GridPOVM(grid, np.zeros((4, 2, 3)))
    with pytest.raises(InvalidInputError):
        random_povm(2, 4, np.random.default_rng(0), grid=CellGrid([0.0]))
    print("✓ POVM shape checks test passed")


def test_spectral_povm():
    """Test the binned PVM of a Hermitian matrix"""
    grid = CellGrid.uniform(-1, 1, 4)
    mat = np.array([[0.0, 0.25], [0.25, 0.0]])
    q = spectral_povm(mat, grid)
    assert validate_povm(q).ok
    assert q.is_projective()
    assert q.idempotence_defect() < 1e-14
    assert np.allclose(q.effects[grid.cell_index(0.25)], [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(InvalidInputError):
        spectral_povm(np.array([[0.0, 1.0], [0.0, 0.0]]), grid)
    print("✓ Spectral POVM test passed")


def test_json_codec():
    """Test flat [re, im] effects survive the JSON form"""
    q = random_povm(2, 3, np.random.default_rng(11))
    data = q.to_dict()
    assert len(data['effects'][0]) == 4
    restored = GridPOVM.from_dict(data)
    assert np.allclose(restored.effects, q.effects, atol=1e-15)
    assert restored.grid == q.grid
    with pytest.raises(InvalidInputError):
        GridPOVM.from_dict({'boundaries': [0.0]})
    with pytest.raises(InvalidInputError):
        GridPOVM.from_dict({'boundaries': [0.0], 'effects': [[[1, 0]] * 3, [[1, 0]] * 4]})
    print("✓ JSON codec test passed")


if __name__ == '__main__':
    print("Running Grid POVM Unit Tests...")
    test_uniform_grid()
    test_cell_index_right_closed()
    test_grid_validation()
    test_random_povm_is_valid()
    test_invalid_povms_detected()
    test_povm_shape_checks()
    test_spectral_povm()
    test_json_codec()
    print("\nAll Grid POVM tests passed!")
