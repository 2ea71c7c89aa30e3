# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

import json

import mock
import pytest

from PCSteiner.Planar.CLI import EXIT_FAILED, EXIT_PASSED, EXIT_USAGE, main
from PCSteiner.Planar.FORMATS import writeInstance, writeTd
from PCSteiner.Planar.TD import TreeDecomposition


@pytest.fixture
def treeFile(tmp_path, edgeTree):
    path = str(tmp_path / "edge.json")
    writeInstance(edgeTree(6), path)
    return path


def test_gen_then_solve(tmp_path):
    instance = str(tmp_path / "grid.stp")
    report = str(tmp_path / "report.json")
    assert main(['gen', '--kind', 'grid', '--rows', '2', '--cols', '3', '--pairs', '1', '--out', instance]) == EXIT_PASSED
    assert main(['solve', '--alg', 'pd', '--input', instance, '--output', report]) == EXIT_PASSED
    with open(report) as handle:
        document = json.load(handle)
    assert document['algorithm'] == 'pd'
    assert document['passed']


def test_solve_prints_the_report(treeFile, capsys):
    assert main(['solve', '--alg', 'dp', '--input', treeFile]) == EXIT_PASSED
    document = json.loads(capsys.readouterr().out)
    assert document['solution']['cost'] == '2'


def test_config_file_and_overrides(treeFile, tmp_path, capsys):
    config = tmp_path / "config.toml"
    config.write_text('[pipeline]\ntheta = 2\nk = 4\n')
    assert main(['solve', '--alg', 'pd', '--input', treeFile, '--config', str(config), '--k', '5']) == EXIT_PASSED
    document = json.loads(capsys.readouterr().out)
    assert document['config']['pipeline']['theta'] == 2
    assert document['config']['pipeline']['k'] == 5


def test_svg_needs_a_spanner(treeFile, tmp_path):
    drawing = tmp_path / "stages.svg"
    assert main(['solve', '--alg', 'pd', '--input', treeFile, '--svg', str(drawing)]) == EXIT_PASSED
    assert not drawing.exists()


def test_verify_passes(treeFile, capsys):
    assert main(['verify', 'embedding', '--input', treeFile]) == EXIT_PASSED
    assert json.loads(capsys.readouterr().out)['check'] == 'embedding'


def test_failed_report_exits_one(treeFile, tmp_path):
    td = tmp_path / "bad.td"
    td.write_text(writeTd(TreeDecomposition((frozenset([0]),), ()), 2))
    assert main(['verify', 'decomposition', '--input', treeFile, '--td', str(td),
                 '--output', str(tmp_path / "out.json")]) == EXIT_FAILED


def test_td_for_another_graph(treeFile, tmp_path):
    td = tmp_path / "other.td"
    td.write_text(writeTd(TreeDecomposition((frozenset([0, 1, 2]),), ()), 3))
    assert main(['verify', 'decomposition', '--input', treeFile, '--td', str(td)]) == EXIT_USAGE


@pytest.mark.parametrize("extra", [
    ['--epsilon', '3'],
    ['--solver', 'simplex'],
])
def test_bad_configuration_exits_two(treeFile, extra):
    assert main(['solve', '--alg', 'pd', '--input', treeFile] + extra) == EXIT_USAGE


def test_missing_input_exits_two(tmp_path):
    assert main(['solve', '--alg', 'pd', '--input', str(tmp_path / "absent.json")]) == EXIT_USAGE


def test_unreadable_input_exits_two(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2')
    assert main(['solve', '--alg', 'pd', '--input', str(path)]) == EXIT_USAGE


def test_exact_on_forest_exits_two(tmp_path, edgeForest):
    path = str(tmp_path / "pair.json")
    writeInstance(edgeForest(6), path)
    assert main(['solve', '--alg', 'dp', '--input', path]) == EXIT_USAGE


def test_usage_errors_from_argparse():
    with pytest.raises(SystemExit) as error:
        main(['solve', '--alg', 'simplex', '--input', 'x.json'])
    assert error.value.code == 2


@mock.patch('PCSteiner.Planar.CLI.SuiteRunner')
def test_bench_runs_the_requested_suites(runner, tmp_path):
    runner.return_value.run.return_value = {'passed': True}
    assert main(['bench', '--suite', 'primal-dual', '--suite', 'primal-dual', '--out', str(tmp_path), '--count', '2']) == EXIT_PASSED
    assert runner.call_args[1]['count'] == 2
    runner.return_value.run.assert_called_once_with(['primal-dual'])


@mock.patch('PCSteiner.Planar.CLI.SuiteRunner')
def test_bench_failure_exits_one(runner, tmp_path):
    runner.return_value.run.return_value = {'passed': False}
    assert main(['bench', '--suite', 'all', '--out', str(tmp_path)]) == EXIT_FAILED
