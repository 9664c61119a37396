"""
Moment Lab - Unit Tests for Half-Line Momentum Masses

Tests for the FFT momentum distribution of windows on [0, L]
"""

import sys
import os
import math

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.errors import InvalidInputError
from povm import CellGrid, halfline_momentum_measures, sample_window


def _chi(x):
    return x * np.exp(-x)


def test_plancherel():
    """Test the cell masses add up to the squared norm 1/4"""
    samples = sample_window(_chi, 40.0, 4096)
    result = halfline_momentum_measures(samples, 40.0, CellGrid.uniform(-12, 12, 48))
    assert not result.truncated
    assert result.norm_squared == pytest.approx(0.25, abs=1e-8)
    assert result.plancherel_defect < 1e-10
    assert abs(result.first_moment) < 1e-12
    assert 0 < result.tail_mass < 1e-3
    print("✓ Plancherel test passed")


def test_cell_mass_matches_transform():
    """Test the (0, 2] mass against the closed-form |F(chi)|^2 = 1/(2 pi (1+k^2)^2)"""
    samples = sample_window(_chi, 40.0, 4096)
    result = halfline_momentum_measures(samples, 40.0, CellGrid([0.0, 2.0]))
    expected = (2.0 / 10.0 + math.atan(2.0) / 2.0) / (2 * math.pi)
    assert result.masses[1] == pytest.approx(expected, rel=5e-3)
    assert result.masses[0] == pytest.approx(0.125, rel=1e-6)
    print("✓ Cell mass test passed")


def test_boosted_window_first_moment():
    """Test chi(x) e^{i k0 x} moves the first momentum moment to k0 ||chi||^2"""
    length, points, pad = 40.0, 4096, 4
    dk = 2 * np.pi / (pad * length)
    grid = CellGrid(dk * (16 * np.arange(-64, 65) + 0.5))
    for k0 in (1.5, -0.75):
        samples = sample_window(lambda x: _chi(x) * np.exp(1j * k0 * x), length, points)
        result = halfline_momentum_measures(samples, length, grid, pad_factor=pad)
        assert result.norm_squared == pytest.approx(0.25, abs=1e-8)
        assert result.plancherel_defect < 1e-10
        assert result.first_moment == pytest.approx(k0 * result.norm_squared, abs=1e-4)
        centre = grid.cell_index(0.0)
        right, left = result.masses[centre + 1:].sum(), result.masses[:centre].sum()
        assert (right > left) == (k0 > 0)
    print("✓ Boosted window first moment test passed")


def test_truncated_window_flagged():
    """Test a window that has not decayed at L is flagged"""
    samples = sample_window(lambda x: x * np.exp(-x / 10), 10.0, 1024)
    result = halfline_momentum_measures(samples, 10.0, CellGrid.uniform(-5, 5, 20))
    assert result.truncated
    assert result.to_dict()['truncated'] is True
    print("✓ Truncated window test passed")


def test_input_validation():
    """Test sample counts, pad factors and the boundary condition at 0"""
    grid = CellGrid.uniform(-5, 5, 10)
    with pytest.raises(InvalidInputError):
        halfline_momentum_measures(sample_window(_chi, 10.0, 1000), 10.0, grid)
    with pytest.raises(InvalidInputError):
        halfline_momentum_measures(sample_window(_chi, 10.0, 1024), 10.0, grid, pad_factor=3)
    with pytest.raises(InvalidInputError):
        halfline_momentum_measures(sample_window(lambda x: np.exp(-x), 10.0, 1024), 10.0, grid)
    with pytest.raises(InvalidInputError):
        halfline_momentum_measures(np.zeros(1024), 10.0, grid)
    with pytest.raises(InvalidInputError):
        halfline_momentum_measures(sample_window(_chi, 10.0, 1024), 0.0, grid)
    print("✓ Input validation test passed")


if __name__ == '__main__':
    print("Running Half-Line Momentum Unit Tests...")
    test_plancherel()
    test_cell_mass_matches_transform()
    test_boosted_window_first_moment()
    test_truncated_window_flagged()
    test_input_validation()
    print("\nAll Half-Line Momentum tests passed!")
