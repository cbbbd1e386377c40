import filecmp
import json
import os

import pandas as pd
import pytest

from pyHOIF.cli import cli_main
from pyHOIF.common import Util
from pyHOIF.data import artificial, common


ORACLE_FIXTURE = {
    'model': {'kind': 'missing', 'f': [0.5, 0.5], 'a': [2.0, 4.0], 'b': [0.3, 0.6]},
    'fit': {'a_hat': [2.5, 3.5], 'b_hat': [0.4, 0.5]},
    'basis': {'type': 'constant'},
}

EXPERIMENT = {'kind': 'missing', 'truth': {'type': 'discrete', 'f': [0.5, 0.5], 'a': [2.0, 4.0], 'b': [0.3, 0.6]},
              'n_grid': [200, 400], 'k_schedule': [1, 2], 'replications': 5, 'seed': 3, 'output': 'out.csv'}


def write_json(path, obj):
    with open(str(path), 'w') as file:
        json.dump(obj, file)
    return str(path)


def lines(text):
    return dict(line.split() for line in text.strip().splitlines())


def test_usage_errors(capsys):
    assert cli_main([]) == 1
    assert cli_main(['forecast']) == 1
    assert cli_main(['estimate', 'data.csv']) == 1
    assert 'error' in capsys.readouterr().err


def test_oracle(tmp_path, capsys):
    path = write_json(tmp_path / 'model.json', ORACLE_FIXTURE)
    assert cli_main(['-q', 'oracle', path]) == 0
    out = lines(capsys.readouterr().out)
    assert float(out['chi']) == pytest.approx(0.45, abs=1e-15)
    assert float(out['first_order_bias']) == pytest.approx(-0.01875, abs=1e-12)
    assert float(out['first_order_bias_formula']) == pytest.approx(-0.01875, abs=1e-12)
    assert float(out['second_order_bias']) == pytest.approx(-1.0 / 60.0, abs=1e-12)


def test_oracle_rejects_unknown_fields(tmp_path, capsys):
    path = write_json(tmp_path / 'model.json', dict(ORACLE_FIXTURE, colour='red'))
    assert cli_main(['-q', 'oracle', path]) == 1
    assert "'colour'" in capsys.readouterr().err


def test_simulate_is_reproducible(tmp_path, capsys):
    config = write_json(tmp_path / 'experiment.json', EXPERIMENT)
    assert cli_main(['-q', 'simulate', config, '--output-dir', str(tmp_path / 'one')]) == 0
    assert cli_main(['-q', 'simulate', config, '--output-dir', str(tmp_path / 'two')]) == 0
    assert filecmp.cmp(str(tmp_path / 'one' / 'out.csv'), str(tmp_path / 'two' / 'out.csv'), shallow=False)
    df = pd.read_csv(str(tmp_path / 'one' / 'out.csv'))
    assert list(df.columns) == ['estimator', 'n', 'k', 'mean', 'bias', 'variance', 'rmse', 'replications',
                                'failures', 'seed']


def test_simulate_output_directory_from_environment(tmp_path, monkeypatch):
    config = write_json(tmp_path / 'experiment.json', EXPERIMENT)
    monkeypatch.setenv('HOIF_OUTPUT_DIR', str(tmp_path / 'env'))
    assert cli_main(['-q', 'simulate', config]) == 0
    assert os.path.exists(str(tmp_path / 'env' / 'out.csv'))


@pytest.mark.parametrize('change, field', [({'replications': 0}, 'replications'), ({'speed': 1}, 'speed')])
def test_simulate_malformed_configuration(tmp_path, capsys, change, field):
    config = write_json(tmp_path / 'experiment.json', dict(EXPERIMENT, **change))
    assert cli_main(['-q', 'simulate', config, '--output-dir', str(tmp_path)]) == 1
    assert "field '{}'".format(field) in capsys.readouterr().err
    assert not os.path.exists(str(tmp_path / 'out.csv'))


def test_estimate_on_a_dataset(tmp_path, capsys, missing_model):
    data = artificial.generate_dataset(missing_model, missing_model.kind, 1000, seed=8)
    path = str(tmp_path / 'sample.csv')
    common.write_dataset(data, path, kind='missing')
    saved = str(tmp_path / 'report.pkl')
    assert cli_main(['-q', 'estimate', path, '--kind', 'missing', '--k', '1', '--save', saved]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['k_used'] == 1
    assert result['ci_first'][0] <= result['chi_first'] <= result['ci_first'][1]
    assert abs(result['chi_first'] - missing_model.chi()) < 0.1
    assert Util.load_obj(saved).chi_first == result['chi_first']


def test_estimate_reports_malformed_datasets(tmp_path, capsys):
    path = str(tmp_path / 'sample.csv')
    pd.DataFrame({'y1': [0, 1, 1], 'z1': [0.1, 0.5, 0.9]}).to_csv(path, index=False)
    assert cli_main(['-q', 'estimate', path, '--kind', 'covariance']) == 1
    assert "'a'" in capsys.readouterr().err


def test_estimate_rejects_the_wrong_layout(tmp_path, capsys, covariance_model):
    data = artificial.generate_dataset(covariance_model, covariance_model.kind, 100, seed=1)
    path = str(tmp_path / 'sample.csv')
    common.write_dataset(data, path, kind='covariance')
    assert cli_main(['-q', 'estimate', path, '--kind', 'ate']) == 1


def test_selftest(capsys):
    assert cli_main(['-q', 'selftest', '--cases', '12']) == 0
    assert 'FAILED' not in capsys.readouterr().out


@pytest.mark.parametrize('section, key', [('model', 'colour'), ('fit', 'fhat'), ('basis', 'kk')])
def test_oracle_rejects_unknown_nested_fields(tmp_path, capsys, section, key):
    spec = json.loads(json.dumps(ORACLE_FIXTURE))
    spec[section][key] = 1
    path = write_json(tmp_path / 'model.json', spec)
    assert cli_main(['-q', 'oracle', path]) == 1
    assert "field '{}.{}'".format(section, key) in capsys.readouterr().err


@pytest.mark.parametrize('change, field', [
    ({'truth': dict(EXPERIMENT['truth'], propensty=0.4)}, 'truth.propensty'),
    ({'k_schedule': {'rule': 'power', 'c': 'two', 'p': 0.5}}, 'k_schedule.c'),
    ({'truth': dict(EXPERIMENT['truth'], a=['two', 'four'])}, 'truth.a'),
])
def test_simulate_rejects_malformed_nested_fields(tmp_path, capsys, change, field):
    config = write_json(tmp_path / 'experiment.json', dict(EXPERIMENT, **change))
    assert cli_main(['-q', 'simulate', config, '--output-dir', str(tmp_path)]) == 1
    assert "field '{}'".format(field) in capsys.readouterr().err


def test_estimate_with_atoms_reads_a_discrete_covariate(tmp_path, capsys, missing_model):
    data = artificial.generate_dataset(missing_model, missing_model.kind, 1000, seed=8)
    path = str(tmp_path / 'sample.csv')
    data.to_dataframe().to_csv(path, index=False)
    assert cli_main(['-q', 'estimate', path, '--kind', 'missing', '--atoms', '2', '--k', '1']) == 0
    assert json.loads(capsys.readouterr().out)['k_used'] == 1
