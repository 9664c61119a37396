"""
Moment Lab - Unit Tests for Naimark Dilation

Tests for the dilation, operator decomposition and compression
"""

import sys
import os

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.errors import InvalidInputError, PositivityError
from povm import (CellGrid, GridPOVM, compress_povm, decompose_check, decomposition_defect,
                  effect_sqrt, naimark_dilate, povm_integral_operator, random_povm,
                  spectral_povm, validate_povm)

PATH = np.array([[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]], dtype=float)


def _path_pvm():
    eigenvalues = np.linalg.eigvalsh(PATH)
    grid = CellGrid([-1.0, 0.0, 1.0], representatives=eigenvalues)
    return spectral_povm(PATH, grid)


def test_effect_sqrt():
    """Test the positive square root and the clipping threshold"""
    effect = np.array([[2.0, 1.0], [1.0, 2.0]])
    root = effect_sqrt(effect)
    assert np.allclose(root @ root, effect, atol=1e-14)
    assert np.allclose(effect_sqrt(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))
    with pytest.raises(PositivityError):
        effect_sqrt(np.diag([1.0, -1e-3]))
    print("✓ Effect square root test passed")


def test_random_dilation():
    """Test V*V = I and V* P_i V = Q_i over seeded POVMs with d <= 8, M <= 16"""
    rng = np.random.default_rng(5)
    for _ in range(200):
        d, M = int(rng.integers(1, 9)), int(rng.integers(2, 17))
        q = random_povm(d, M, rng)
        dilation = naimark_dilate(q)
        assert dilation.isometry.shape == (d * M, d)
        check = dilation.check(q)
        assert check.passes(1e-12), (d, M, check)
    print("✓ Random dilation test passed")


def test_dilated_blocks_form_pvm():
    """Test the block projectors are idempotent, orthogonal and sum to the identity"""
    for seed, (d, M) in enumerate(((1, 2), (3, 6), (8, 16))):
        dilation = naimark_dilate(random_povm(d, M, np.random.default_rng(seed)))
        blocks = dilation.blocks
        assert len(blocks) == M
        assert np.allclose(sum(blocks), np.eye(d * M), atol=1e-12)
        for i, p in enumerate(blocks):
            assert np.max(np.abs(p @ p - p)) <= 1e-12
            assert np.max(np.abs(p - p.conj().T)) <= 1e-12
            for other in blocks[i + 1:]:
                assert np.max(np.abs(p @ other)) <= 1e-12
    print("✓ Dilated block PVM test passed")


def test_dilated_operator_compresses():
    """Test V* (sum lambda_i P_i) V = sum lambda_i Q_i"""
    q = random_povm(3, 5, np.random.default_rng(9))
    dilation = naimark_dilate(q)
    big = dilation.dilated_operator(q.grid.representatives)
    compressed = dilation.isometry.conj().T @ big @ dilation.isometry
    assert np.allclose(compressed, povm_integral_operator(q), atol=1e-13)
    print("✓ Dilated operator test passed")


def test_dilation_rejects_bad_povms():
    """Test normalization and positivity are enforced"""
    grid = CellGrid([0.0])
    indefinite = GridPOVM(grid, [np.diag([1.2, 0.5]), np.diag([-0.2, 0.5])])
    with pytest.raises(PositivityError):
        naimark_dilate(indefinite)
    unnormalized = GridPOVM(grid, [np.eye(2), np.eye(2)])
    with pytest.raises(InvalidInputError):
        naimark_dilate(unnormalized)
    print("✓ Dilation rejection test passed")


def test_pvm_decomposes_its_operator():
    """Test the spectral PVM decomposes the matrix on the whole space"""
    q = _path_pvm()
    assert np.allclose(povm_integral_operator(q), PATH, atol=1e-13)
    assert decompose_check(q, PATH, 4)
    print("✓ PVM decomposition test passed")


def test_decomposition_is_unique():
    """Test shifted representatives or perturbed effects no longer decompose the matrix"""
    a = np.diag([-2.0, 0.0, 2.0])
    grid = CellGrid([-1.0, 1.0], representatives=[-2.0, 0.0, 2.0])
    q = spectral_povm(a, grid)
    assert decompose_check(q, a, 3)

    shifted = GridPOVM(grid.shifted(0.5), q.effects)
    assert np.allclose(shifted.grid.representatives, [-1.5, 0.5, 2.5])
    assert not decompose_check(shifted, a, 3)
    assert decomposition_defect(shifted, a, 3).first_moment == pytest.approx(0.5, abs=1e-12)

    eps = 1e-3
    mixed = GridPOVM(grid, [np.diag([1 - eps, eps, 0]), np.diag([eps, 1 - eps, 0]), np.diag([0, 0, 1.0])])
    assert validate_povm(mixed).ok
    assert not decompose_check(mixed, a, 3)
    assert decomposition_defect(mixed, a, 3).first_moment == pytest.approx(2 * eps, abs=1e-12)
    print("✓ Decomposition uniqueness test passed")


def test_compressed_povm_decomposition():
    """Test a compressed PVM decomposes the compression only where A keeps the subspace"""
    q = _path_pvm()
    basis = [np.eye(4)[0], np.eye(4)[1]]
    small = compress_povm(q, basis)
    assert validate_povm(small).ok
    assert not small.is_projective()
    a = PATH[:2, :2]
    assert decompose_check(small, a, 1)
    assert not decompose_check(small, a, 2)
    defect = decomposition_defect(small, a, 2)
    assert defect.first_moment < 1e-13
    assert defect.second_moment == pytest.approx(1.0, abs=1e-12)
    print("✓ Compressed decomposition test passed")


def test_decomposition_argument_checks():
    """Test shapes and domain sizes are validated"""
    q = _path_pvm()
    with pytest.raises(InvalidInputError):
        decomposition_defect(q, np.eye(3), 2)
    with pytest.raises(InvalidInputError):
        decomposition_defect(q, PATH, 5)
    with pytest.raises(InvalidInputError):
        compress_povm(q, [np.ones(4)])
    with pytest.raises(InvalidInputError):
        compress_povm(q, [np.eye(3)[0]])
    print("✓ Decomposition argument checks test passed")


if __name__ == '__main__':
    print("Running Naimark Dilation Unit Tests...")
    test_effect_sqrt()
    test_random_dilation()
    test_dilated_blocks_form_pvm()
    test_dilated_operator_compresses()
    test_dilation_rejects_bad_povms()
    test_pvm_decomposes_its_operator()
    test_decomposition_is_unique()
    test_compressed_povm_decomposition()
    test_decomposition_argument_checks()
    print("\nAll Naimark Dilation tests passed!")
