"""
Command Line Interface for Moment Lab

Thin interface layer:
- Delegates logic to the Workbench and the library packages
- Uses argparse
- Converts library errors to exit codes
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.config import load_config, parse_tol_override
from core.errors import EXIT_OK, EXIT_USAGE, InvalidInputError, MomentLabError
from core.reports import render_json
from core.workbench import Workbench
from algebra import (deformed_moment_sequence, gaussian_q_moment_oracle, gns_matrix,
                     gns_spectral_measure, parse_element)
from measures import reconstruct_measure, verify_moment_solution
from moments import MomentKind, MomentSequence, analyze_sequence, builtin_density, gaussian_power_moments, krein_test
from operators import IntervalDomain, momentum_deficiency
from povm import (CellGrid, ConsistentFamily, GridPOVM, complex_vector, compress_povm, consistency_check,
                  family_to_povm, halfline_momentum_measures, induced_family, naimark_dilate,
                  probe_closure, sample_window, validate_povm)


class CLI:
    """
    Command Line Interface for Moment Lab

    Principles:
    - Thin interface layer only
    - Numerical work is delegated to the library packages
    - Every command renders json, csv or a human table
    - The exit code of the last command is kept in last_exit_code
    """

    def __init__(self, workbench: Optional[Any] = None):
        """
        Initialize the CLI

        Args:
            workbench: Workbench to delegate reproduce/status to (optional, can be set later)
        """
        self.workbench = workbench
        self.parser = self._create_parser()
        self.last_exit_code = EXIT_OK
        self.config = None

    def set_workbench(self, workbench: Any) -> None:
        self.workbench = workbench

    def _create_parser(self) -> argparse.ArgumentParser:
        """Create argument parser"""
        # SUPPRESS keeps subcommand parsers from resetting flags given before the subcommand
        common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
        common.add_argument('--config', help='JSON configuration file')
        common.add_argument('--output', choices=['json', 'csv', 'table'], help='Output format')
        common.add_argument('--precision', type=int, help='Working precision in decimal digits')
        common.add_argument('--tol', action='append', metavar='NAME=VALUE',
                            help='Tolerance override, e.g. psd=1e-8 (repeatable)')
        common.add_argument('--report-dir', help='Directory for report files')
        common.add_argument('--verbose', action='store_true', help='Log at INFO level')

        parser = argparse.ArgumentParser(
            prog='moment-lab',
            description='Moment Lab v1.0 - moment problems, GNS representations and POVMs',
            parents=[common],
        )
        subparsers = parser.add_subparsers(dest='command', help='Available commands')

        subparsers.add_parser('status', parents=[common], help='Show configuration and stages')

        reproduce = subparsers.add_parser('reproduce', parents=[common],
                                          help='Run the determinacy, deficiency, half-line and Hankel stages')
        reproduce.add_argument('--only', action='append', default=[], help='Stage to run (repeatable)')
        reproduce.add_argument('--moments', type=int, help='Number of moments K for the table')

        analyze = subparsers.add_parser('analyze', parents=[common], help='Existence and determinacy tests')
        analyze.add_argument('input', nargs='?', help="Moment sequence JSON file, '-' for stdin")
        analyze.add_argument('--builtin', type=int, choices=[1, 2, 3, 4],
                             help='Use the vacuum moments of Q^k instead of a file')
        analyze.add_argument('--moments', type=int, default=40, help='K for --builtin')
        analyze.add_argument('--kind', choices=['hamburger', 'stieltjes'], help='Override the sequence kind')
        analyze.add_argument('--reconstruct', type=int, metavar='N', help='Append an N-atom Gauss measure')

        reconstruct = subparsers.add_parser('reconstruct', parents=[common], help='Gauss measure from moments')
        reconstruct.add_argument('input', help="Moment sequence JSON file, '-' for stdin")
        reconstruct.add_argument('--order', type=int, required=True, help='Number of atoms n (2n <= K)')

        algebra = subparsers.add_parser('algebra', parents=[common], help='CCR algebra computations')
        algebra_sub = algebra.add_subparsers(dest='algebra_cmd')
        alg_moments = algebra_sub.add_parser('moments', parents=[common], help='omega_b(x^n), n = 0..K')
        alg_moments.add_argument('--element', required=True, help='Hermitian element, e.g. Q^4')
        alg_moments.add_argument('--deformer', default='I', help='Deformer b, e.g. A* (default I)')
        alg_moments.add_argument('--moments', type=int, default=4, help='K')
        alg_moments.add_argument('--truncation', type=int, help='Fock truncation override')
        alg_gns = algebra_sub.add_parser('gns', parents=[common], help='Truncated GNS matrix')
        alg_gns.add_argument('--element', required=True)
        alg_gns.add_argument('--levels', type=int, required=True, help='Highest Fock level N')
        alg_spec = algebra_sub.add_parser('spectral', parents=[common], help='Spectral measure of psi_b')
        alg_spec.add_argument('--element', required=True)
        alg_spec.add_argument('--deformer', default='I')
        alg_spec.add_argument('--levels', type=int, default=40)
        alg_oracle = algebra_sub.add_parser('oracle', parents=[common], help='Quadrature value of omega(Q^{kn})')
        alg_oracle.add_argument('k', type=int)
        alg_oracle.add_argument('n', type=int)

        deficiency = subparsers.add_parser('deficiency', parents=[common], help='Momentum deficiency indices')
        deficiency.add_argument('intervals', nargs='+',
                                help='bounded:LO,HI | half_line_right:LO | half_line_left:HI | full_line')

        povm = subparsers.add_parser('povm', parents=[common], help='POVM operations')
        povm_sub = povm.add_subparsers(dest='povm_cmd')
        p_validate = povm_sub.add_parser('validate', parents=[common], help='Check positivity and normalization')
        p_validate.add_argument('input')
        p_dilate = povm_sub.add_parser('dilate', parents=[common], help='Naimark dilation')
        p_dilate.add_argument('input')
        p_family = povm_sub.add_parser('to-family', parents=[common], help='Induced consistent family')
        p_family.add_argument('input')
        p_family.add_argument('--vectors', required=True, help='JSON list of probe vectors')
        p_from = povm_sub.add_parser('from-family', parents=[common], help='POVM from a consistent family')
        p_from.add_argument('input')
        p_compress = povm_sub.add_parser('compress', parents=[common], help='Compress to a subspace')
        p_compress.add_argument('input')
        p_compress.add_argument('--basis', required=True, help='JSON list of orthonormal vectors')
        p_half = povm_sub.add_parser('halfline', parents=[common], help='Momentum masses of x e^{-x}')
        p_half.add_argument('--scale', type=float, default=1.0, help='Multiply the window by this factor')

        return parser

    def execute(self, args: List[str] = None) -> str:
        """
        Execute a CLI command

        Args:
            args: Command line arguments (defaults to sys.argv[1:])

        Returns:
            Rendered output; the exit code is left in last_exit_code
        """
        if args is None:
            args = sys.argv[1:]
        self.last_exit_code = EXIT_OK
        if not args:
            return self.parser.format_help()
        try:
            parsed = self.parser.parse_args(args)
        except SystemExit as e:
            self.last_exit_code = EXIT_USAGE if e.code else EXIT_OK
            return '' if e.code else self.parser.format_help()
        if not parsed.command:
            return self.parser.format_help()
        try:
            self.config = self._load_config(parsed)
            return self._dispatch(parsed)
        except MomentLabError as e:
            self.last_exit_code = e.exit_code
            detail = f" {json.dumps(e.detail, sort_keys=True, default=str)}" if e.detail else ''
            return f"Error ({type(e).__name__}): {e}{detail}"

    def _load_config(self, parsed: argparse.Namespace):
        overrides: Dict[str, Any] = {
            'precision_digits': getattr(parsed, 'precision', None),
            'output': getattr(parsed, 'output', None),
            'report_dir': getattr(parsed, 'report_dir', None),
        }
        if getattr(parsed, 'verbose', False):
            overrides['log_level'] = 'INFO'
        for item in getattr(parsed, 'tol', []):
            overrides.update(parse_tol_override(item))
        if getattr(parsed, 'command', None) == 'reproduce' and parsed.moments:
            overrides['reproduce_moments'] = parsed.moments
        path = getattr(parsed, 'config', None)
        if self.workbench and not path:
            return self.workbench.config.merged(overrides)
        return load_config(path, overrides)

    def _dispatch(self, parsed: argparse.Namespace) -> str:
        handlers = {
            'status': self._handle_status_command,
            'reproduce': self._handle_reproduce_command,
            'analyze': self._handle_analyze_command,
            'reconstruct': self._handle_reconstruct_command,
            'algebra': self._handle_algebra_command,
            'deficiency': self._handle_deficiency_command,
            'povm': self._handle_povm_command,
        }
        return handlers[parsed.command](parsed)

    # input helpers

    @staticmethod
    def _read_json(path: str) -> Any:
        try:
            if path == '-':
                return json.load(sys.stdin)
            with open(path, 'r') as f:
                return json.load(f)
        except OSError as e:
            raise InvalidInputError(f"cannot read {path}: {e}")
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"{path} is not valid JSON: {e}")

    @staticmethod
    def _payload(data: Any) -> Any:
        """Unwrap {"schema": ..., "data": ...} envelopes written by this tool"""
        if isinstance(data, dict) and 'schema' in data and 'data' in data:
            return data['data']
        return data

    def _vectors(self, path: str) -> List[np.ndarray]:
        data = self._payload(self._read_json(path))
        if isinstance(data, dict):
            data = data.get('vectors', data)
        if not isinstance(data, list) or not data:
            raise InvalidInputError(f"{path} must hold a non-empty list of vectors")
        return [complex_vector(v) for v in data]

    # rendering

    def _render(self, kind: str, data: Any, table: str, csv_text: Optional[str] = None) -> str:
        output = self.config.output
        if output == 'json':
            return render_json(kind, data)
        if output == 'csv':
            return csv_text if csv_text is not None else render_json(kind, data)
        return table

    @staticmethod
    def _format_rows(header: Tuple[str, ...], rows: List[Tuple[Any, ...]]) -> str:
        cells = [tuple(str(c) for c in header)] + [tuple(str(c) for c in row) for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
        lines = ['  '.join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        lines.insert(1, '  '.join('-' * w for w in widths))
        return '\n'.join(lines)

    # commands

    def _handle_status_command(self, parsed: argparse.Namespace) -> str:
        if not self.workbench:
            raise InvalidInputError("workbench not initialized")
        status = self.workbench.status()
        status['precision_digits'] = self.config.precision_digits
        status['tolerances'] = dict(self.config.tolerances)
        return self._render('status', status, self._format_status(status))

    def _handle_reproduce_command(self, parsed: argparse.Namespace) -> str:
        workbench = self.workbench or Workbench(self.config)
        workbench.configure(self.config)
        workbench.boot()
        results = workbench.reproduce(parsed.only or None)
        self.last_exit_code = workbench.exit_code(results)
        data = {'stages': [r.to_dict() for r in results], 'exit_code': self.last_exit_code}
        return self._render('reproduce', data, self._format_reproduce(results))

    def _handle_analyze_command(self, parsed: argparse.Namespace) -> str:
        cfg = self.config
        density = None
        if parsed.builtin:
            kind = MomentKind.STIELTJES if parsed.builtin % 2 == 0 else MomentKind.HAMBURGER
            ms = gaussian_power_moments(parsed.builtin, parsed.moments, kind)
            density = builtin_density(parsed.builtin)
        elif parsed.input:
            ms = MomentSequence.from_dict(self._payload(self._read_json(parsed.input)))
        else:
            raise InvalidInputError("analyze needs an input file or --builtin k")
        if parsed.kind:
            ms = ms.as_kind(MomentKind(parsed.kind))
        analysis = analyze_sequence(ms, cfg.tol('psd'), cfg.precision_digits)
        data = analysis.to_dict()
        if density is not None:
            data['verdicts']['krein'] = krein_test(density, cfg.tol('krein'), cfg.krein_base_window,
                                                   cfg.krein_max_doublings).to_dict()
        csv_text = None
        if parsed.reconstruct:
            recon = reconstruct_measure(ms, parsed.reconstruct, cfg.precision_digits)
            data['reconstruction'] = recon.to_dict()
            csv_text = recon.measure.to_csv()
        rows = [(name, v['status'], v['criterion']) for name, v in data['verdicts'].items()]
        table = '\n'.join([
            f"feasible: {data['existence']['feasible']}  "
            f"min_eigenvalue: {data['existence']['min_eigenvalue']:.3e}",
            self._format_rows(('test', 'status', 'criterion'), rows),
            f"combined: {data['combined']['status']} ({data['combined']['criterion']})",
        ])
        if parsed.reconstruct:
            table += '\n' + self._format_measure(data['reconstruction']['measure']['atoms'])
        return self._render('analysis', data, table, csv_text)

    def _handle_reconstruct_command(self, parsed: argparse.Namespace) -> str:
        cfg = self.config
        ms = MomentSequence.from_dict(self._payload(self._read_json(parsed.input)))
        recon = reconstruct_measure(ms, parsed.order, cfg.precision_digits)
        check = verify_moment_solution(recon.measure, ms, cfg.tol('moment'), cfg.precision_digits,
                                       upto=2 * recon.order - 1)
        data = recon.to_dict()
        data['check'] = check.to_dict()
        table = self._format_measure(data['measure']['atoms'])
        if recon.reduced:
            table += f"\n(order reduced from {recon.requested_order} to {recon.order})"
        table += f"\nmax relative moment error: {check.max_rel_err:.3e}"
        return self._render('reconstruction', data, table, recon.measure.to_csv())

    def _handle_algebra_command(self, parsed: argparse.Namespace) -> str:
        if parsed.algebra_cmd == 'moments':
            x, b = parse_element(parsed.element), parse_element(parsed.deformer)
            ms = deformed_moment_sequence(x, b, parsed.moments, parsed.truncation)
            data = {'element': x.to_dict(), 'deformer': b.to_dict(), 'moments': ms.to_dict()}
            table = self._format_rows(('n', 'moment'), [(n, repr(float(v))) for n, v in enumerate(ms.values)])
            return self._render('moments', data, table)
        if parsed.algebra_cmd == 'gns':
            rep = gns_matrix(parse_element(parsed.element), parsed.levels)
            table = '\n'.join('  '.join(f"{z.real:9.4f}{z.imag:+.4f}j" for z in row) for row in rep.matrix)
            return self._render('gns', rep.to_dict(), table)
        if parsed.algebra_cmd == 'spectral':
            measure = gns_spectral_measure(parse_element(parsed.element), parse_element(parsed.deformer),
                                           parsed.levels)
            return self._render('measure', measure.to_dict(), self._format_measure(measure.atoms),
                                measure.to_csv())
        if parsed.algebra_cmd == 'oracle':
            value = gaussian_q_moment_oracle(parsed.k, parsed.n)
            return self._render('oracle', {'k': parsed.k, 'n': parsed.n, 'value': value}, repr(value))
        raise InvalidInputError("algebra needs a subcommand: moments | gns | spectral | oracle")

    def _handle_deficiency_command(self, parsed: argparse.Namespace) -> str:
        reports = [momentum_deficiency(IntervalDomain.parse(text)) for text in parsed.intervals]
        rows = [(text, r.n_plus, r.n_minus, r.classification.value, r.extension_family_dim)
                for text, r in zip(parsed.intervals, reports)]
        table = self._format_rows(('interval', 'n+', 'n-', 'classification', 'family dim'), rows)
        return self._render('deficiency', {'reports': [r.to_dict() for r in reports]}, table)

    def _handle_povm_command(self, parsed: argparse.Namespace) -> str:
        cfg = self.config
        tol_psd, tol_sum = cfg.tol('psd'), cfg.tol('sum')
        cmd = parsed.povm_cmd
        if cmd == 'halfline':
            samples = parsed.scale * sample_window(lambda x: x * np.exp(-x), cfg.halfline_length,
                                                   cfg.halfline_points)
            masses = halfline_momentum_measures(samples, cfg.halfline_length, cfg.grid.build(),
                                                cfg.halfline_pad_factor, tol_tail=cfg.tol('tail'))
            data = masses.to_dict()
            table = (f"total mass: {masses.total:.10f}  norm^2: {masses.norm_squared:.10f}\n"
                     f"plancherel defect: {masses.plancherel_defect:.3e}  "
                     f"first moment: {masses.first_moment:.3e}  tail mass: {masses.tail_mass:.3e}")
            csv_text = 'representative,mass\n' + ''.join(
                f"{r!r},{m!r}\n" for r, m in zip(masses.representatives.tolist(), masses.masses.tolist()))
            return self._render('halfline', data, table, csv_text)
        if cmd is None:
            raise InvalidInputError("povm needs a subcommand")

        source = self._payload(self._read_json(parsed.input))
        if cmd == 'from-family':
            family = ConsistentFamily.from_dict(source)
            report = consistency_check(family, tol=cfg.tol('recon'))
            q = family_to_povm(family, tol_psd=tol_psd, tol_sum=tol_sum)
            validation = validate_povm(q, tol_psd, tol_sum)
            data = q.to_dict()
            data.update({'consistency': report.to_dict(), 'validation': validation.to_dict(),
                         'idempotent': q.is_projective(cfg.tol('recon'))})
            table = (f"consistent: {report.ok}  valid: {validation.ok}  "
                     f"idempotent: {data['idempotent']}  cells: {q.M}  d: {q.d}")
            return self._render('povm', data, table)

        q = GridPOVM.from_dict(source)
        if cmd == 'validate':
            report = validate_povm(q, tol_psd, tol_sum)
            table = (f"ok: {report.ok}  worst_eig: {report.worst_eig:.3e}  "
                     f"sum_defect: {report.sum_defect:.3e}")
            return self._render('validation', report.to_dict(), table)
        if cmd == 'dilate':
            dilation = naimark_dilate(q, tol_psd, tol_sum)
            check = dilation.check(q)
            data = dilation.to_dict()
            data['check'] = check.to_dict()
            lines = ['isometry V:']
            lines += ['  ' + '  '.join(f"{z.real:9.6f}{z.imag:+.6f}j" for z in row) for row in dilation.isometry]
            lines.append(f"isometry defect: {check.isometry_defect:.3e}  "
                         f"effect defect: {check.effect_defect:.3e}")
            return self._render('dilation', data, '\n'.join(lines))
        if cmd == 'to-family':
            closure = probe_closure(self._vectors(parsed.vectors))
            family = induced_family(q, closure, cfg.tol('tail'))
            table = self._format_rows(('label', 'total mass'),
                                      [(label, f"{row.sum():.6g}") for label, row in zip(family.labels, family.measures)])
            return self._render('family', family.to_dict(), table, family.to_csv())
        if cmd == 'compress':
            compressed = compress_povm(q, self._vectors(parsed.basis))
            validation = validate_povm(compressed, tol_psd, tol_sum)
            data = compressed.to_dict()
            data['validation'] = validation.to_dict()
            data['idempotence_defect'] = compressed.idempotence_defect()
            table = (f"valid: {validation.ok}  d: {compressed.d}  "
                     f"idempotence defect: {data['idempotence_defect']:.3e}")
            return self._render('povm', data, table)
        raise InvalidInputError(f"unknown povm subcommand {cmd}")

    @staticmethod
    def _format_measure(atoms) -> str:
        return CLI._format_rows(('position', 'weight'), [(f"{x:.12g}", f"{w:.12g}") for x, w in atoms])

    def _format_reproduce(self, results) -> str:
        lines = ["=== Moment Lab Reproduction ==="]
        for result in results:
            mark = '✓' if result.passed else '✗'
            lines.append(f"{mark} {result.name} (exit {result.exit_code}) {result.message}".rstrip())
            if result.name == 'determinacy' and 'rows' in result.data:
                rows = []
                for row in result.data['rows']:
                    extra = ', '.join(f"{name}={v['status']}" for name, v in row['verdicts'].items())
                    rows.append((row['k'], row['status'], row['criterion'], row['expected'], extra))
                lines.append(self._format_rows(('k', 'verdict', 'criterion', 'expected', 'all tests'), rows))
            elif result.name == 'deficiency':
                for report in result.data.get('reports', []):
                    lines.append(f"  {report['domain']['kind']}: ({report['n_plus']}, {report['n_minus']}) "
                                 f"{report['classification']}, family dim {report['extension_family_dim']}")
            elif result.name == 'halfline' and result.data:
                lines.append(f"  plancherel error {result.data['plancherel_error']:.3e}, "
                             f"first moment {result.data['first_moment']:.3e}")
            elif result.name == 'hankel' and 'check' in result.data:
                lines.append(f"  order {result.data['order']} at {result.data['digits']} digits, "
                             f"max relative moment error {result.data['check']['max_rel_err']:.3e}")
        return '\n'.join(lines)

    def _format_status(self, status: dict) -> str:
        """Format status dictionary for display"""
        lines = [
            "=== Moment Lab Status ===",
            f"Version: {status['version']}",
            f"Status: {status['status']}",
            f"Booted: {status['booted']}",
            f"Precision: {status['precision_digits']} digits",
            "Tolerances:",
        ]
        for name, value in sorted(status['tolerances'].items()):
            lines.append(f"  {name}: {value:g}")
        lines.append(f"Stages: {', '.join(status['stages'])}")
        return '\n'.join(lines)
