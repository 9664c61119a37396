"""
Moment Lab - Integration Tests

Tests for the full reproduction run and end-to-end command pipelines
"""

import sys
import os
import json

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from core.config import RunConfig
from core.workbench import Workbench
from interfaces.cli import CLI
from main import main
from povm import CellGrid, spectral_povm


def test_full_reproduction():
    """Test every stage passes at the default configuration"""
    print("Testing full reproduction...")

    workbench = Workbench()
    assert workbench.boot() is True
    results = workbench.reproduce()
    assert [r.name for r in results] == ['determinacy', 'deficiency', 'halfline', 'hankel']
    assert all(r.passed for r in results), [r.to_dict() for r in results if not r.passed]
    assert Workbench.exit_code(results) == 0
    assert workbench.reports.count() == 4
    assert workbench.shutdown() is True

    print("✓ Full reproduction test passed")


def test_reproduction_at_double_precision():
    """Test 16 digits is reported as a numeric failure of the Hankel stage"""
    print("Testing reproduction at 16 digits...")

    cli = CLI(Workbench())
    output = cli.execute(['reproduce', '--only', 'hankel', '--precision', '16', '--output', 'json'])
    assert cli.last_exit_code == 3
    stages = json.loads(output)['data']['stages']
    assert stages[0]['stage'] == 'hankel'
    assert stages[0]['passed'] is False

    print("✓ Double precision reproduction test passed")


def test_reproduction_writes_reports():
    """Test --report-dir receives one JSON file per stage"""
    import tempfile

    print("Testing report directory...")

    with tempfile.TemporaryDirectory() as tmpdir:
        cli = CLI(Workbench())
        cli.execute(['reproduce', '--only', 'deficiency', '--only', 'halfline', '--report-dir', tmpdir])
        assert cli.last_exit_code == 0
        assert sorted(os.listdir(tmpdir)) == ['reproduce_deficiency.json', 'reproduce_halfline.json']

    print("✓ Report directory test passed")


def test_analyze_then_reconstruct():
    """Test an analysis report feeds back into reconstruct"""
    import tempfile

    print("Testing analyze -> reconstruct pipeline...")

    cli = CLI()
    with tempfile.TemporaryDirectory() as tmpdir:
        ms_path = os.path.join(tmpdir, 'ms.json')
        moments = cli.execute(['algebra', 'moments', '--element', 'Q', '--moments', '10', '--output', 'json'])
        sequence = json.loads(moments)['data']['moments']
        with open(ms_path, 'w') as f:
            json.dump(sequence, f)

        analysis = json.loads(cli.execute(['analyze', ms_path, '--output', 'json']))['data']
        assert analysis['existence']['feasible'] is True

        recon = json.loads(cli.execute(['reconstruct', ms_path, '--order', '5', '--output', 'json']))['data']
        assert cli.last_exit_code == 0
        atoms = sorted(recon['measure']['atoms'])
        assert abs(atoms[-1][0] - 2.0201828704560856) < 1e-10
        assert abs(sum(w for _, w in atoms) - 1.0) < 1e-12

    print("✓ Analyze -> reconstruct pipeline test passed")


def test_spectral_povm_family_round_trip():
    """Test POVM -> consistent family -> POVM through the CLI"""
    import tempfile

    print("Testing family round trip...")

    a = np.array([[0.0, 0.25], [0.25, 0.0]])
    q = spectral_povm(a, CellGrid.uniform(-1.0, 1.0, 4))
    cli = CLI()
    with tempfile.TemporaryDirectory() as tmpdir:
        povm_path = os.path.join(tmpdir, 'povm.json')
        vectors_path = os.path.join(tmpdir, 'vectors.json')
        family_path = os.path.join(tmpdir, 'family.json')
        with open(povm_path, 'w') as f:
            json.dump(q.to_dict(), f)
        with open(vectors_path, 'w') as f:
            json.dump([[1, 0], [0, 1]], f)
        with open(family_path, 'w') as f:
            f.write(cli.execute(['povm', 'to-family', povm_path, '--vectors', vectors_path, '--output', 'json']))

        data = json.loads(cli.execute(['povm', 'from-family', family_path, '--output', 'json']))['data']
        assert cli.last_exit_code == 0
        assert data['consistency']['ok'] is True
        assert data['idempotent'] is True
        rebuilt = np.array([[complex(*z) for z in effect] for effect in data['effects']])
        original = q.effects.reshape(q.M, -1)
        assert np.allclose(rebuilt, original, atol=1e-10)

    print("✓ Family round trip test passed")


def test_main_entry_point(capsys):
    """Test main() returns the command's exit code"""
    print("Testing main entry point...")

    assert main(['deficiency', 'bounded:0,1']) == 0
    assert 'bounded:0,1' in capsys.readouterr().out

    assert main(['deficiency', 'circle']) == 2
    assert 'Error' in capsys.readouterr().err

    assert main(['reproduce', '--only', 'deficiency', '--output', 'json']) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['schema'] == 'moment-lab/reproduce/v1'

    print("✓ Main entry point test passed")


def test_config_flags_reach_commands():
    """Test --tol and --precision travel from the command line to the numerics"""
    print("Testing configuration flags...")

    cli = CLI(Workbench(RunConfig()))
    output = cli.execute(['--precision', '30', '--tol', 'psd=1e-20', 'status', '--output', 'json'])
    data = json.loads(output)['data']
    assert data['precision_digits'] == 30
    assert data['tolerances']['tol_psd'] == 1e-20

    print("✓ Configuration flags test passed")


if __name__ == '__main__':
    print("=" * 60)
    print("Running Integration Tests")
    print("=" * 60)
    test_full_reproduction()
    test_reproduction_at_double_precision()
    test_reproduction_writes_reports()
    test_analyze_then_reconstruct()
    test_spectral_povm_family_round_trip()
    test_config_flags_reach_commands()
    print("\nAll integration tests passed!")
