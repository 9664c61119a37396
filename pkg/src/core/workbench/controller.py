"""
Moment Lab - Workbench

Session orchestrator:
- holds the run configuration and the report store
- exposes lifecycle hooks (boot, shutdown, status)
- runs the reproduction stages and collects their reports
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from core.config import RunConfig
from core.errors import EXIT_MISMATCH, EXIT_OK, InvalidInputError, MomentLabError
from core.reports import ReportStore
from measures import jacobi_from_moments, gauss_quadrature, verify_moment_solution
from moments import (Criterion, MomentKind, Status, analyze_sequence, builtin_density,
                     gaussian_power_moments, krein_test)
from operators import IntervalDomain, momentum_deficiency
from povm import halfline_momentum_measures, sample_window

logger = logging.getLogger(__name__)

VERSION = '1.0'

# (k, criterion used for the row, expected status)
DETERMINACY_TABLE = (
    (1, Criterion.CARLEMAN, Status.DETERMINATE),
    (2, Criterion.CRAMER, Status.DETERMINATE),
    (3, Criterion.KREIN, Status.INDETERMINATE),
    (4, Criterion.KREIN, Status.INDETERMINATE),
)

HALFLINE_NORM_SQUARED = 0.25
HALFLINE_TOL = 1e-6


@dataclass
class StageResult:
    name: str
    passed: bool
    exit_code: int
    data: Dict[str, Any] = field(default_factory=dict)
    message: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {
            'stage': self.name,
            'passed': self.passed,
            'exit_code': self.exit_code,
            'message': self.message,
            'data': self.data,
        }


class Workbench:
    """
    Moment Lab session

    Responsibilities:
    - own the RunConfig and ReportStore for one invocation
    - run the reproduction stages in a fixed order
    - map stage outcomes to exit codes
    """

    def __init__(self, config: Optional[RunConfig] = None):
        """Create an unbooted workbench"""
        self.config = config or RunConfig()
        self.reports: Optional[ReportStore] = None
        self.state: Dict[str, Any] = {
            'status': 'created',
            'version': VERSION,
            'booted': False,
        }
        self.stages: Dict[str, Callable[[], StageResult]] = {
            'determinacy': self.stage_determinacy,
            'deficiency': self.stage_deficiency,
            'halfline': self.stage_halfline,
            'hankel': self.stage_hankel,
        }

    def boot(self) -> bool:
        """
        Initialize the report store

        Returns:
            bool: False if already booted
        """
        if self.state['booted']:
            return False
        self.reports = ReportStore(self.config.report_dir)
        self.state['status'] = 'operational'
        self.state['booted'] = True
        logger.info(f"workbench booted at {self.config.precision_digits} digits")
        return True

    def shutdown(self) -> bool:
        """Drop stored reports; False if not booted"""
        if not self.state['booted']:
            return False
        if self.reports:
            self.reports.clear()
        self.reports = None
        self.state['status'] = 'shutdown'
        self.state['booted'] = False
        return True

    def configure(self, config: RunConfig) -> None:
        """Swap the run configuration; a booted store follows the new report directory"""
        self.config = config
        if self.reports is not None:
            self.reports.report_dir = config.report_dir

    def status(self) -> Dict[str, Any]:
        return {
            'version': self.state['version'],
            'status': self.state['status'],
            'booted': self.state['booted'],
            'precision_digits': self.config.precision_digits,
            'tolerances': dict(self.config.tolerances),
            'stages': list(self.stages),
            'reports': self.reports.count() if self.reports else 0,
        }

    def get_reports(self) -> Optional[ReportStore]:
        return self.reports

    def _require_boot(self):
        if not self.state['booted']:
            self.boot()

    def reproduce(self, only: Optional[Sequence[str]] = None) -> List[StageResult]:
        """
        Run the reproduction stages

        Args:
            only: Stage names to run (all when omitted)

        Returns:
            StageResult per stage, in the fixed stage order
        """
        self._require_boot()
        unknown = sorted(set(only or ()) - set(self.stages))
        if unknown:
            raise InvalidInputError(f"unknown stages {unknown}; choose from {list(self.stages)}")
        selected = list(self.stages) if not only else [s for s in self.stages if s in only]
        results = []
        for name in selected:
            try:
                result = self.stages[name]()
            except MomentLabError as e:
                logger.warning(f"stage {name} failed: {e}")
                result = StageResult(name, False, e.exit_code, dict(e.detail), str(e))
            self.reports.put(f"reproduce_{name}", name, result)
            results.append(result)
        self.reports.save_to_disk()
        return results

    @staticmethod
    def exit_code(results: Sequence[StageResult]) -> int:
        return max((r.exit_code for r in results), default=EXIT_OK)

    def stage_determinacy(self) -> StageResult:
        """k = 1..4 rows: existence, Carleman, Cramer and Krein columns"""
        cfg = self.config
        K = cfg.reproduce_moments
        rows = []
        passed = True
        for k, criterion, expected in DETERMINACY_TABLE:
            kind = MomentKind.STIELTJES if k % 2 == 0 else MomentKind.HAMBURGER
            ms = gaussian_power_moments(k, K, kind)
            analysis = analyze_sequence(ms, cfg.tol('psd'), cfg.precision_digits)
            krein = krein_test(builtin_density(k), cfg.tol('krein'),
                               cfg.krein_base_window, cfg.krein_max_doublings)
            verdicts = dict(analysis.verdicts)
            verdicts['krein'] = krein
            chosen = verdicts.get(criterion.value)
            status = chosen.status if chosen else Status.INCONCLUSIVE
            match = status is expected
            passed = passed and match
            rows.append({
                'k': k,
                'criterion': criterion.value,
                'status': status.value,
                'expected': expected.value,
                'match': match,
                'existence': analysis.existence,
                'verdicts': {name: v.to_dict() for name, v in verdicts.items()},
            })
            logger.info(f"determinacy k={k}: {status.value} via {criterion.value} (expected {expected.value})")
        return StageResult('determinacy', passed, EXIT_OK if passed else EXIT_MISMATCH,
                           {'K': K, 'rows': rows})

    def stage_deficiency(self) -> StageResult:
        """Momentum on [0, 1] and on [0, inf)"""
        expected = (
            (IntervalDomain.bounded(0.0, 1.0), (1, 1)),
            (IntervalDomain.half_line_right(0.0), (1, 0)),
        )
        reports = []
        passed = True
        for dom, indices in expected:
            report = momentum_deficiency(dom)
            passed = passed and report.indices == indices
            reports.append(report.to_dict())
        return StageResult('deficiency', passed, EXIT_OK if passed else EXIT_MISMATCH,
                           {'reports': reports})

    def stage_halfline(self) -> StageResult:
        """Plancherel and first-moment checks for chi(x) = x e^{-x}"""
        cfg = self.config
        samples = sample_window(lambda x: x * np.exp(-x), cfg.halfline_length, cfg.halfline_points)
        masses = halfline_momentum_measures(samples, cfg.halfline_length, cfg.grid.build(),
                                            cfg.halfline_pad_factor, tol_tail=cfg.tol('tail'))
        plancherel = abs(masses.total - HALFLINE_NORM_SQUARED)
        first = abs(masses.first_moment)
        passed = plancherel <= HALFLINE_TOL and first <= HALFLINE_TOL
        data = masses.to_dict()
        data.update({'plancherel_error': plancherel, 'expected_norm_squared': HALFLINE_NORM_SQUARED})
        return StageResult('halfline', passed, EXIT_OK if passed else EXIT_MISMATCH, data)

    def stage_hankel(self) -> StageResult:
        """Gauss measure of order K/2 from the vacuum position moments"""
        cfg = self.config
        K = cfg.reproduce_moments
        n = K // 2
        ms = gaussian_power_moments(1, K)
        jacobi = jacobi_from_moments(ms, n, cfg.precision_digits)
        measure = gauss_quadrature(jacobi, cfg.precision_digits)
        check = verify_moment_solution(measure, ms.truncated(2 * n - 1), cfg.tol('moment'),
                                       cfg.precision_digits)
        data = {'order': n, 'digits': cfg.precision_digits, 'check': check.to_dict(),
                'measure': measure.to_dict()}
        return StageResult('hankel', check.ok, EXIT_OK if check.ok else EXIT_MISMATCH, data)
