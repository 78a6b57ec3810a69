import csv
import json

import numpy as np
import pytest

from main import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main, parse_face, parse_vector
from Toric_Agent.birch import BirchPointSolver


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestHelpers:
    def test_parse_vector(self):
        assert parse_vector("1,2.5") == [1.0, 2.5]
        assert parse_vector("1 2") == [1.0, 2.0]
        with pytest.raises(ValueError):
            parse_vector(" ")

    def test_parse_face(self):
        assert parse_face("I=1,3") == [0, 2]
        assert parse_face("2") == [1]
        with pytest.raises(ValueError):
            parse_face("I=0")


class TestAnalyze:
    def test_triangle(self, capsys):
        code, out, _ = run(capsys, 'analyze', 'examples/triangle.crn')
        assert code == EXIT_OK
        report = json.loads(out)
        assert report['delta'] == 1
        assert report['l'] == 1
        assert report['weakly_reversible'] is True
        assert report['ordering'] == 'first-appearance'

    def test_output_is_byte_identical(self, capsys):
        _, first, _ = run(capsys, 'analyze', 'recombination')
        _, second, _ = run(capsys, 'analyze', 'recombination')
        assert first == second

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, 'analyze', 'trap', '--format', 'csv')
        assert code == EXIT_OK
        rows = dict(csv.reader(out.splitlines()))
        assert rows['delta'] == '0'


class TestCheck:
    def test_complex_balanced(self, capsys):
        code, out, _ = run(capsys, 'check', 'cb', 'triangle')
        assert code == EXIT_OK
        assert json.loads(out)['balanced'] is True

    def test_violated_binomial(self, capsys, tmp_path):
        rates = tmp_path / 'bad.rates'
        rates.write_text("1 2 2\n", encoding='utf-8')
        code, out, _ = run(capsys, 'check', 'cb', '--rates', str(rates), 'triangle')
        assert code == EXIT_DOMAIN
        payload = json.loads(out)
        assert payload['balanced'] is False
        assert payload['violated_binomial']['u_plus'] == [1, 0, 1]
        assert payload['violated_binomial']['u_minus'] == [0, 2, 0]
        assert payload['tree_constants'] == ['3', '5', '4']

    def test_not_weakly_reversible(self, capsys):
        code, out, _ = run(capsys, 'check', 'cb', 'two-substrate')
        assert code == EXIT_DOMAIN
        assert json.loads(out)['reason'] == 'not weakly reversible'

    def test_detailed_balancing(self, capsys):
        code, out, _ = run(capsys, 'check', 'db', 'triangle')
        assert code == EXIT_OK
        assert json.loads(out)['detailed_balancing'] is True


class TestTreeConstants:
    def test_enumeration_cross_check(self, capsys):
        code, out, _ = run(capsys, 'tree-constants', '--enumerate', 'triangle')
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload['oracle_agrees'] is True
        assert [r['value'] for r in payload['tree_constants']] == ['3', '3', '3']
        assert all(r['monomial_count'] == 3 for r in payload['tree_constants'])


class TestBirch:
    def test_triangle(self, capsys):
        code, out, _ = run(capsys, 'birch', '--initial', '2,0.5', 'triangle')
        assert code == EXIT_OK
        assert json.loads(out)['c_star'] == pytest.approx([1.25, 1.25], rel=1e-9)

    def test_uniqueness_probe(self, capsys):
        code, out, _ = run(capsys, 'birch', '--initial', '2,0.5', '--starts', '3', 'triangle')
        assert code == EXIT_OK
        assert json.loads(out)['uniqueness']['max_relative_spread'] <= 1e-8

    def test_wrong_length(self, capsys):
        code, _, err = run(capsys, 'birch', '--initial', '1', 'triangle')
        assert code == EXIT_USAGE
        assert 'message' in json.loads(err.strip().splitlines()[-1])

    def test_non_positive_initial(self, capsys):
        code, _, _ = run(capsys, 'birch', '--initial', '0,1', 'triangle')
        assert code == EXIT_USAGE

    def test_not_complex_balancing(self, capsys, tmp_path):
        rates = tmp_path / 'bad.rates'
        rates.write_text("1 2 2\n", encoding='utf-8')
        code, _, err = run(capsys, 'birch', '--initial', '1,1', '--rates', str(rates), 'triangle')
        assert code == EXIT_DOMAIN
        assert json.loads(err.strip().splitlines()[-1])['error'] == 'NotComplexBalancingError'


class TestSimulateAndStrata:
    def test_simulate_writes_csv(self, capsys, tmp_path):
        out_file = tmp_path / 'traj.csv'
        code, out, _ = run(capsys, 'simulate', '--initial', '2,0.5', '--t-end', '1', '--out', str(out_file),
                           'triangle')
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload['status'] == 'completed'
        header = out_file.read_text(encoding='utf-8').splitlines()[0]
        assert header == 't,c_1,c_2,E,conservation_drift,boundary_distance,dist_to_birch'

    def test_strata(self, capsys):
        code, out, _ = run(capsys, 'strata', '--initial', '0.01,2', '--face', 'I=1', '--t-end', '10', 'triangle')
        assert code == EXIT_OK
        payload = json.loads(out)
        assert len(payload['orientations']) == 6
        assert payload['samples_checked'] > 0
        assert payload['descent_minimum'] >= -1e-10


class TestErrors:
    def test_malformed_network(self, capsys, tmp_path):
        bad = tmp_path / 'bad.crn'
        bad.write_text("A -> A ; k=1\n", encoding='utf-8')
        code, _, err = run(capsys, 'analyze', str(bad))
        assert code == EXIT_USAGE
        payload = json.loads(err.strip().splitlines()[-1])
        assert payload['error'] == 'NetworkSyntaxError'
        assert payload['line'] == 1

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, 'analyze', 'does/not/exist.crn')
        assert code == EXIT_USAGE

    def test_no_subcommand(self, capsys):
        assert main([]) == EXIT_USAGE

    def test_unknown_option(self, capsys):
        code, _, _ = run(capsys, 'analyze', 'triangle', '--bogus')
        assert code == EXIT_USAGE

    def test_strata_requires_face(self, capsys):
        code, _, _ = run(capsys, 'strata', '--initial', '1,1', 'triangle')
        assert code == EXIT_USAGE


def test_corpus_command(capsys):
    code, out, _ = run(capsys, 'corpus', '--rate-samples', '2')
    assert code == EXIT_OK
    assert json.loads(out)['ok'] is True


def test_perf_report_written(capsys, tmp_path):
    report = tmp_path / 'perf.json'
    code, out, _ = run(capsys, 'analyze', 'triangle', '--perf-report', str(report))
    assert code == EXIT_OK
    assert 'stages' not in json.loads(out)
    payload = json.loads(report.read_text(encoding='utf-8'))
    assert {'analyze', 'parse', 'structure'} <= set(payload['stages'])
    assert payload['global_metrics']['total_failures'] == 0


def test_linear_algebra_failure_is_domain_error(capsys, monkeypatch):
    def singular(*args, **kwargs):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setattr(BirchPointSolver, 'solve', singular)
    code, _, err = run(capsys, 'birch', '--initial', '2,0.5', 'triangle')
    assert code == EXIT_DOMAIN
    assert json.loads(err.strip().splitlines()[-1])['error'] == 'LinAlgError'
