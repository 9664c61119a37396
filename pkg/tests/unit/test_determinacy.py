"""
Moment Lab - Unit Tests for Determinacy

Tests for the Carleman, Cramer and Krein criteria
"""

import sys
import os
import math

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.errors import InfeasibleSequenceError, InvalidDensityError, InvalidInputError
from algebra import (creation, deformed_expectation, deformed_moment_sequence, identity,
                     position_power)
from moments import (Criterion, DensitySpec, DeterminacyVerdict, MomentKind, MomentSequence, Status,
                     Support, analyze_sequence, builtin_density, carleman_test, cramer_test,
                     gaussian_power_moments, krein_test)


def test_carleman_gaussian():
    """Test the K=40 Gaussian sequence is Carleman-determinate"""
    verdict = carleman_test(gaussian_power_moments(1, 40))
    assert verdict.status is Status.DETERMINATE
    assert verdict.criterion is Criterion.CARLEMAN
    assert verdict.diagnostic('alpha') >= 0.1
    assert verdict.diagnostic('alpha_slope') > 0
    assert verdict.diagnostic('partial_sum_20') > verdict.diagnostic('partial_sum_10')
    print("✓ Carleman Gaussian test passed")


def test_carleman_standard_normal():
    """Test (1, 0, 1, 0, 3, 0, 15) is Carleman-determinate"""
    verdict = carleman_test(MomentSequence((1, 0, 1, 0, 3, 0, 15)))
    assert verdict.status is Status.DETERMINATE
    assert verdict.criterion is Criterion.CARLEMAN
    print("✓ Carleman standard normal test passed")


def test_carleman_inconclusive_for_fourth_power():
    """Test the Q^4 sequence gives no Carleman verdict"""
    verdict = carleman_test(gaussian_power_moments(4, 40))
    assert verdict.status is Status.INCONCLUSIVE
    assert verdict.criterion is Criterion.NONE
    assert verdict.diagnostic('alpha') < 0.1
    print("✓ Carleman inconclusive test passed")


def test_carleman_deformed_states():
    """Test omega_b(Q^n) is Carleman-determinate for nonsingular b = a* and b = I + a*^2"""
    for b in (creation(), identity() + creation() ** 2):
        ms = MomentSequence(tuple(deformed_expectation(b, position_power(n)) for n in range(41)))
        verdict = carleman_test(ms)
        assert verdict.status is Status.DETERMINATE, (b, verdict)
        assert verdict.criterion is Criterion.CARLEMAN
        assert verdict.diagnostic('alpha_slope') > 0

        pipeline = deformed_moment_sequence(position_power(1), b, K=12)
        for got, want in zip(pipeline.values, ms.values):
            assert got == pytest.approx(float(want), rel=1e-12, abs=1e-12)
    print("✓ Carleman deformed states test passed")


def test_carleman_point_mass():
    """Test a vanishing even moment is the point mass at zero"""
    verdict = carleman_test(MomentSequence((1, 0, 0, 0, 0)))
    assert verdict.status is Status.DETERMINATE
    assert verdict.diagnostic('degenerate_point_mass') == 1.0
    print("✓ Carleman point mass test passed")


def test_cramer_square():
    """Test the Q^2 sequence satisfies the factorial growth bound"""
    verdict = cramer_test(gaussian_power_moments(2, 40, MomentKind.STIELTJES))
    assert verdict.status is Status.DETERMINATE
    assert verdict.criterion is Criterion.CRAMER
    assert verdict.diagnostic('max_residual') <= 0.5
    print("✓ Cramer Q^2 test passed")


def test_cramer_inconclusive_for_fourth_power():
    """Test the Q^4 sequence outgrows the factorial bound"""
    verdict = cramer_test(gaussian_power_moments(4, 40, MomentKind.STIELTJES))
    assert verdict.status is Status.INCONCLUSIVE
    assert verdict.diagnostic('max_residual') > 0.5
    print("✓ Cramer inconclusive test passed")


def test_cramer_short_sequence():
    """Test fewer than three fit points is inconclusive"""
    verdict = cramer_test(MomentSequence((1, 0, 1, 0, 3)))
    assert verdict.status is Status.INCONCLUSIVE
    assert verdict.diagnostic('fit_points') == 2.0
    print("✓ Cramer short sequence test passed")


def test_infeasible_sequence_rejected():
    """Test determinacy criteria require an existing measure"""
    bad = MomentSequence((1, 0, -1, 0, 1))
    with pytest.raises(InfeasibleSequenceError):
        carleman_test(bad)
    with pytest.raises(InfeasibleSequenceError):
        cramer_test(bad)
    with pytest.raises(InvalidInputError):
        carleman_test(MomentSequence.zero_measure(4))
    print("✓ Infeasible sequence test passed")


def test_krein_indeterminate_powers():
    """Test the Q^3 and Q^4 densities have a finite log-integral"""
    for k in (3, 4):
        verdict = krein_test(builtin_density(k))
        assert verdict.status is Status.INDETERMINATE, (k, verdict)
        assert verdict.criterion is Criterion.KREIN
        assert verdict.diagnostic('relative_change') < 1e-6
    print("✓ Krein indeterminate test passed")


def test_krein_divergent_densities():
    """Test the Gaussian and Q^2 densities have a divergent log-integral"""
    for k in (1, 2):
        verdict = krein_test(builtin_density(k))
        assert verdict.status is Status.INCONCLUSIVE, (k, verdict)
        assert verdict.criterion is Criterion.NONE
    print("✓ Krein divergent test passed")


def test_krein_rejects_bad_densities():
    """Test negative or NaN density values are rejected even with a log evaluator"""
    negative = DensitySpec(lambda y: -1.0, Support.FULL_LINE, lambda y: -y * y, name='negative')
    with pytest.raises(InvalidDensityError):
        krein_test(negative)

    nan_log = DensitySpec(lambda y: math.exp(-y * y), Support.FULL_LINE, lambda y: math.nan, name='nan')
    with pytest.raises(InvalidDensityError):
        krein_test(nan_log)

    nan_value = DensitySpec(lambda y: math.nan, Support.HALF_LINE, name='nan value')
    with pytest.raises(InvalidDensityError):
        krein_test(nan_value)
    print("✓ Krein density validation test passed")


def test_krein_agrees_with_carleman():
    """Test Krein-indeterminate densities never get a Carleman verdict"""
    for k in (3, 4):
        assert krein_test(builtin_density(k)).status is Status.INDETERMINATE
        assert carleman_test(gaussian_power_moments(k, 40)).status is Status.INCONCLUSIVE
    print("✓ Krein/Carleman consistency test passed")


def test_verdict_invariants():
    """Test verdicts carry a criterion consistent with their status"""
    with pytest.raises(ValueError):
        DeterminacyVerdict(Status.DETERMINATE, Criterion.KREIN)
    with pytest.raises(ValueError):
        DeterminacyVerdict(Status.INDETERMINATE, Criterion.CARLEMAN)
    verdict = DeterminacyVerdict(Status.INCONCLUSIVE, Criterion.NONE, (('alpha', 0.05),))
    assert verdict.to_dict() == {'status': 'inconclusive', 'criterion': 'none', 'diagnostics': [['alpha', 0.05]]}
    assert verdict.diagnostic('missing') is None
    print("✓ Verdict invariants test passed")


def test_analyze_sequence():
    """Test the combined analysis"""
    analysis = analyze_sequence(gaussian_power_moments(2, 20, MomentKind.STIELTJES))
    assert analysis.existence['feasible']
    assert analysis.existence['stieltjes']['feasible']
    assert analysis.combined.status is Status.DETERMINATE
    assert set(analysis.verdicts) == {'carleman', 'cramer'}

    infeasible = analyze_sequence(MomentSequence((1, 0, -1)))
    assert not infeasible.existence['feasible']
    assert infeasible.verdicts == {}
    assert infeasible.combined.status is Status.INCONCLUSIVE
    print("✓ Analyze sequence test passed")


if __name__ == '__main__':
    print("Running Determinacy Unit Tests...")
    test_carleman_gaussian()
    test_carleman_standard_normal()
    test_carleman_inconclusive_for_fourth_power()
    test_carleman_deformed_states()
    test_carleman_point_mass()
    test_cramer_square()
    test_cramer_inconclusive_for_fourth_power()
    test_cramer_short_sequence()
    test_infeasible_sequence_rejected()
    test_krein_indeterminate_powers()
    test_krein_divergent_densities()
    test_krein_rejects_bad_densities()
    test_krein_agrees_with_carleman()
    test_verdict_invariants()
    test_analyze_sequence()
    print("\nAll Determinacy tests passed!")
