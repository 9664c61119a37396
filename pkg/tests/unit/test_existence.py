"""
Moment Lab - Unit Tests for Existence

Tests for the Hamburger and Stieltjes Hankel positivity scans
"""

import sys
import os
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.errors import InvalidInputError
from measures import DiscreteMeasure, measure_moments
from moments import MomentKind, MomentSequence, gaussian_power_moments, hamburger_existence, stieltjes_existence
from moments.existence import hankel_matrices


def test_gaussian_prefix_feasible():
    """Test (1, 0, 1/2, 0, 3/4) is a Hamburger sequence"""
    ms = MomentSequence((1, 0, Fraction(1, 2), 0, Fraction(3, 4)))
    report = hamburger_existence(ms)
    assert report.feasible
    assert report.min_eigenvalue > 0
    assert report.resolved
    print("✓ Gaussian prefix feasibility test passed")


def test_negative_second_moment_infeasible():
    """Test (1, 0, -1) fails at H_1"""
    report = hamburger_existence(MomentSequence((1, 0, -1)))
    assert not report.feasible
    assert report.worst_order == 1
    assert report.min_eigenvalue == pytest.approx(-1.0)
    print("✓ Negative second moment test passed")


def test_point_mass_is_feasible():
    """Test a singular but semidefinite Hankel matrix is accepted"""
    report = hamburger_existence(MomentSequence((1, 0, 0)))
    assert report.feasible
    assert abs(report.min_eigenvalue) < 1e-30
    print("✓ Point mass feasibility test passed")


def test_odd_length_uses_even_prefix():
    """Test an odd-K sequence is scanned on its even prefix"""
    ms = MomentSequence((1, 0, 1, 0, 3, -100))
    assert hamburger_existence(ms).feasible
    assert len(hankel_matrices(ms)) == 3
    assert hankel_matrices(ms)[2] == [[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 3.0]]
    print("✓ Even prefix test passed")


def test_stieltjes_examples():
    """Test Stieltjes solvability on the half-line examples"""
    q4 = MomentSequence((1, Fraction(3, 4), Fraction(105, 16)), MomentKind.STIELTJES)
    assert stieltjes_existence(q4).feasible

    negative_mean = MomentSequence((1, -1, 2), MomentKind.STIELTJES)
    assert hamburger_existence(negative_mean).feasible
    report = stieltjes_existence(negative_mean)
    assert not report.feasible
    assert report.shifted_min_eigenvalue < 0

    point_mass = MomentSequence((1, 0, 0), MomentKind.STIELTJES)
    assert stieltjes_existence(point_mass).feasible
    print("✓ Stieltjes examples test passed")


def test_stieltjes_requires_tag():
    """Test the Stieltjes scan refuses Hamburger-tagged input"""
    with pytest.raises(InvalidInputError):
        stieltjes_existence(MomentSequence((1, 0, 1)))
    with pytest.raises(InvalidInputError):
        hamburger_existence(MomentSequence.zero_measure(4))
    print("✓ Stieltjes tag test passed")


def test_discrete_measures_always_feasible():
    """Test moments of random atomic measures pass the scan"""
    rng = np.random.default_rng(7)
    for _ in range(5):
        positions = np.sort(rng.uniform(-2.0, 2.0, size=3))
        weights = rng.uniform(0.1, 1.0, size=3)
        measure = DiscreteMeasure(tuple(zip(positions, weights)))
        report = hamburger_existence(measure_moments(measure, 10))
        assert report.feasible, report
    print("✓ Discrete measure feasibility test passed")


def test_builtin_sequences_feasible():
    """Test the vacuum sequences of Q and Q^2 at K=20"""
    assert hamburger_existence(gaussian_power_moments(1, 20)).feasible
    assert stieltjes_existence(gaussian_power_moments(2, 20, MomentKind.STIELTJES)).feasible
    print("✓ Built-in sequence feasibility test passed")


if __name__ == '__main__':
    print("Running Existence Unit Tests...")
    test_gaussian_prefix_feasible()
    test_negative_second_moment_infeasible()
    test_point_mass_is_feasible()
    test_odd_length_uses_even_prefix()
    test_stieltjes_examples()
    test_stieltjes_requires_tag()
    test_discrete_measures_always_feasible()
    test_builtin_sequences_feasible()
    print("\nAll Existence tests passed!")
