import filecmp
import tracemalloc
import warnings

import numpy as np
import pandas as pd
import pytest

from pyHOIF.benchmarks import Measures, benchmarks
from pyHOIF.benchmarks.Util import ResultTable
from pyHOIF.common.Exceptions import ArgumentError, ConfigurationError, DataError, ExperimentError, ParameterError
from pyHOIF.common.Quadrature import MidpointGrid
from pyHOIF.data import artificial
from pyHOIF.estimators import oracle, report
from pyHOIF.models import get_model_kinds, model
from pyHOIF.models.discrete import DiscreteModel
from pyHOIF.models.missing import MissingData


MISSING_TRUTH = {'type': 'discrete', 'f': [0.5, 0.5], 'a': [2.0, 4.0], 'b': [0.3, 0.6]}


def config(**kwargs):
    spec = {'kind': 'missing', 'truth': MISSING_TRUTH, 'n_grid': [200, 400, 800], 'k_schedule': [1, 1, 2],
            'replications': 20, 'seed': 7}
    spec.update(kwargs)
    return benchmarks.ExperimentConfig(**spec)


def test_empty_sample(missing_model):
    data = artificial.generate_dataset(missing_model, missing_model.kind, 0, seed=1)
    assert len(data) == 0


def test_fully_observed_outcomes():
    dmodel = DiscreteModel([0.5, 0.5], [1.0, 1.0], [0.3, 0.6], MissingData())
    data = artificial.generate_dataset(dmodel, dmodel.kind, 500, seed=3)
    assert np.all(data.a == 1)


@pytest.mark.parametrize('kind', [cls() for cls in get_model_kinds()], ids=lambda k: k.tag)
def test_atom_frequencies(kind, rng):
    dmodel = artificial.random_discrete_model(kind, 3, rng)
    n = 20000
    data = artificial.generate_dataset(dmodel, kind, n, seed=11)
    atoms = dmodel.atoms
    for i, p in enumerate(dmodel.probs):
        mask = (data.z == atoms.z[i]) & (data.y1 == atoms.y1[i]) & (data.a == atoms.a[i])
        if kind.has_y2:
            mask &= data.y2 == atoms.y2[i]
        assert abs(np.mean(mask) - p) <= 4 * np.sqrt(p * (1 - p) / n) + 1e-12


def test_generation_is_deterministic(covariance_model):
    first = artificial.generate_dataset(covariance_model, covariance_model.kind, 300, seed=42)
    second = artificial.generate_dataset(covariance_model, covariance_model.kind, 300, seed=42)
    assert np.array_equal(first.y1, second.y1)
    assert np.array_equal(first.a, second.a)
    assert np.array_equal(first.z, second.z)


def test_continuous_sample_lies_in_the_cube():
    kind = get_model_kinds()[1]()
    truth = artificial.continuous_truth(kind, d=2, levels=3, quadrature_level=5)
    data = artificial.generate_dataset(truth, kind, 400, seed=2)
    assert data.z.shape == (400, 2)
    assert np.all((data.z >= 0) & (data.z <= 1))


def test_lacunary_cosine_range():
    g = artificial.LacunaryCosine(0.5, center=0.5, amplitude=0.3, levels=6)
    values = g(MidpointGrid(1, 10).nodes)
    assert np.all(values >= 0.2 - 1e-12) and np.all(values <= 0.8 + 1e-12)
    with pytest.raises(ParameterError):
        artificial.LacunaryCosine(0.0)


def test_continuous_truth():
    for cls in get_model_kinds():
        truth = artificial.continuous_truth(cls(), alpha=0.5, beta=1.5, levels=4)
        assert np.isfinite(model.functional_chi(truth))
        assert truth.domain.integrate(truth.f) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ParameterError):
        artificial.continuous_truth(MissingData(), levels=6, quadrature_level=6)


def test_measures():
    estimates = [0.48, 0.52, 0.55, 0.45, 0.5]
    assert Measures.mean(estimates) == pytest.approx(0.5, abs=1e-15)
    assert Measures.bias(estimates, 0.4) == pytest.approx(0.1, abs=1e-15)
    rmse = Measures.rmse(estimates, 0.4)
    assert rmse ** 2 == pytest.approx(Measures.bias(estimates, 0.4) ** 2 + Measures.variance(estimates), abs=1e-12)
    assert Measures.standard_error(estimates) == pytest.approx(np.std(estimates, ddof=1) / np.sqrt(5))


def _rate_table(power, grid=(100, 400, 1600, 6400)):
    table = ResultTable()
    for n in grid:
        table.append(estimator='first', n=n, k=1, mean=0.0, bias=0.0, variance=0.0, rmse=3.0 * n ** power,
                     replications=10, failures=0, seed=0)
    return table


def test_rate_slope():
    assert Measures.rate_slope(_rate_table(-0.5), 'first') == pytest.approx(-0.5, abs=1e-10)
    assert Measures.rate_slope(_rate_table(-1.0 / 3.0), 'first') == pytest.approx(-1.0 / 3.0, abs=1e-10)
    with pytest.raises(ArgumentError):
        Measures.rate_slope(_rate_table(-0.5, grid=(100, 400)), 'first')


def test_default_truncation():
    assert benchmarks.default_k(100, 1, 1) == 22
    assert benchmarks.default_k(16, 1, 0.1) == 4
    assert benchmarks.k_schedule(config(k_schedule={'rule': 'power', 'c': 1, 'p': 0.5})) == [15, 20, 29]
    assert benchmarks.auto_nuisance_level(1024, 1, {'alpha': 1.0, 'beta': 2.0}) == 3


@pytest.mark.parametrize('kwargs, field', [
    ({'colour': 'red'}, 'colour'),
    ({'k_schedule': [1, 2]}, 'k_schedule'),
    ({'k_schedule': [1, -1, 2]}, 'k_schedule'),
    ({'kind': 'regression'}, 'kind'),
    ({'folds': 0}, 'folds'),
    ({'fit_mode': 'fixed'}, 'fixed_fit'),
    ({'k_schedule': {'rule': 'power', 'c': 'two', 'p': 0.5}}, 'k_schedule.c'),
    ({'k_schedule': {'rule': 'power', 'c': 1, 'p': -0.5}}, 'k_schedule.p'),
    ({'truth': dict(MISSING_TRUTH, propensty=0.3)}, 'truth.propensty'),
    ({'truth': {'type': 'lacunary', 'levels': 'six'}}, 'truth.levels'),
    ({'fit_mode': 'fixed', 'fixed_fit': {'a_hat': [2.5, 3.5], 'b_hat': [0.4, 0.5], 'fhat': [0.5, 0.5]}},
     'fixed_fit.fhat'),
])
def test_configuration_errors(kwargs, field):
    with pytest.raises(ConfigurationError) as err:
        config(**kwargs)
    assert err.value.field == field


def test_missing_required_field():
    with pytest.raises(ConfigurationError) as err:
        benchmarks.ExperimentConfig(kind='missing', truth=MISSING_TRUTH)
    assert err.value.field == 'n_grid'


def test_experiment_output_is_reproducible(tmp_path):
    first = benchmarks.run_experiment(config())
    second = benchmarks.run_experiment(config())
    first.save(str(tmp_path / 'a.csv'))
    second.save(str(tmp_path / 'b.csv'))
    assert filecmp.cmp(str(tmp_path / 'a.csv'), str(tmp_path / 'b.csv'), shallow=False)

    df = first.to_dataframe()
    assert list(df['estimator'].unique()) == ['first', 'plugin', 'second']
    assert len(df) == 9
    assert (df['failures'] == 0).all()
    first.check_consistency()


def test_experiment_does_not_depend_on_jobs(tmp_path):
    serial = benchmarks.run_experiment(config(replications=8), n_jobs=1)
    parallel = benchmarks.run_experiment(config(replications=8), n_jobs=2)
    serial.save(str(tmp_path / 'serial.csv'))
    parallel.save(str(tmp_path / 'parallel.csv'))
    assert filecmp.cmp(str(tmp_path / 'serial.csv'), str(tmp_path / 'parallel.csv'), shallow=False)


def test_truth_fit_plugin_is_exact():
    table = benchmarks.run_experiment(config(fit_mode='truth', estimators=['plugin', 'first']))
    df = table.to_dataframe()
    plugin = df[df['estimator'] == 'plugin']
    assert np.all(np.abs(plugin['bias']) <= 1e-14)
    assert np.all(plugin['variance'] <= 1e-28)


def test_fixed_fit_mode(missing_model, miscalibrated_fit):
    fixed = {'a_hat': [2.5, 3.5], 'b_hat': [0.4, 0.5]}
    table = benchmarks.run_experiment(config(fit_mode='fixed', fixed_fit=fixed, replications=5))
    assert len(table) == 9

    cfg = config(fit_mode='fixed', fixed_fit=fixed, n_grid=[500], k_schedule=[1], estimators=['first'],
                 replications=1000)
    row = benchmarks.run_experiment(cfg).to_dataframe().iloc[0]
    expected = oracle.exact_bias_first_order(missing_model, miscalibrated_fit)[0]
    assert abs(row['bias'] - expected) <= 4 * np.sqrt(row['variance'] / row['replications'])

    for fixed_fit, field in (({'a_hat': [2.5], 'b_hat': [0.4, 0.5]}, 'fixed_fit.a_hat'),
                             ({'a_hat': ['x', 'y'], 'b_hat': [0.4, 0.5]}, 'fixed_fit.a_hat'),
                             ({'a_hat': [2.5, 3.5]}, 'fixed_fit.b_hat')):
        with pytest.raises(ConfigurationError) as err:
            benchmarks.run_experiment(config(fit_mode='fixed', fixed_fit=fixed_fit))
        assert err.value.field == field


def test_numerical_failures_are_counted(monkeypatch):
    estimate = report.estimate
    calls = []

    def failing_once(*args, **kwargs):
        calls.append(1)
        if len(calls) == 1:
            raise np.linalg.LinAlgError("Singular matrix")
        return estimate(*args, **kwargs)

    monkeypatch.setattr(report, 'estimate', failing_once)
    df = benchmarks.run_experiment(config(estimators=['first'])).to_dataframe()
    assert df['failures'].tolist() == [1, 0, 0]
    assert df['replications'].tolist() == [19, 20, 20]


def test_failing_cells_abort_the_experiment():
    cfg = config(kind='covariance', truth={'type': 'lacunary', 'levels': 3}, n_grid=[4], k_schedule=[1],
                 nuisance_level=5, replications=5)
    with pytest.raises(ExperimentError):
        benchmarks.run_experiment(cfg)


def test_continuous_sampling_memory():
    kind = get_model_kinds()[1]()
    truth = artificial.continuous_truth(kind, d=2, levels=3, quadrature_level=7)
    assert len(truth.domain.weights) == 16384
    tracemalloc.start()
    try:
        data = artificial.generate_dataset(truth, kind, 8000, seed=4)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert len(data) == 8000
    assert peak < 50 * 2 ** 20


@pytest.mark.slow
def test_first_order_rate_with_known_nuisances():
    cfg = config(n_grid=[100, 400, 1600, 6400], k_schedule=[1, 1, 1, 1], fit_mode='truth',
                 estimators=['first'], replications=400)
    slope = Measures.rate_slope(benchmarks.run_experiment(cfg), 'first')
    assert -0.6 <= slope <= -0.4


@pytest.mark.slow
@pytest.mark.parametrize('kind', ['covariance', 'missing'])
def test_rates_with_fitted_series_nuisances(kind):
    cfg = config(kind=kind, truth={'type': 'lacunary'}, n_grid=[500, 2000, 8000], k_schedule=[1, 1, 1],
                 estimators=['plugin', 'first'], replications=500)
    table = benchmarks.run_experiment(cfg)
    first = Measures.rate_slope(table, 'first')
    plugin = Measures.rate_slope(table, 'plugin')
    assert -0.6 <= first <= -0.4
    assert plugin > first - 0.05
    if plugin - first < 0.05:
        warnings.warn("plug-in slope {:.3f} within 0.05 of the first order slope {:.3f}".format(plugin, first))


def test_result_table_files(tmp_path):
    table = _rate_table(-0.5)
    path = str(tmp_path / 'rates.csv')
    table.save(path)
    loaded = ResultTable.load(path)
    assert loaded.to_dataframe()['rmse'].tolist() == table.to_dataframe()['rmse'].tolist()
    pd.DataFrame({'estimator': ['first'], 'n': [10]}).to_csv(path, index=False)
    with pytest.raises(DataError):
        ResultTable.load(path)
