import logging

import numpy as np
import pytest

from pyHOIF.basis import Haar
from pyHOIF.basis.Atoms import AtomBasis
from pyHOIF.common.Exceptions import ConfigurationError
from pyHOIF.data.artificial import continuous_truth, generate_dataset, random_discrete_model, random_fixed_errors
from pyHOIF.estimators import first_order, oracle, report, second_order
from pyHOIF.models import discrete, get_model_kinds, model
from pyHOIF.models.ate import ATE
from pyHOIF.models.covariance import Covariance
from pyHOIF.nuisance.fit import NuisanceFit, fit_nuisances
from pyHOIF.ustat import hoeffding
from pyHOIF.ustat.ustatistic import ustat_order2


def all_kinds():
    return [cls() for cls in get_model_kinds()]


def random_cases(rng, count):
    kinds = all_kinds()
    for i in range(count):
        kind = kinds[i % 3]
        dmodel = random_discrete_model(kind, int(rng.integers(2, 11)), rng)
        da, db = random_fixed_errors(dmodel, rng)
        yield dmodel, da, db


def random_basis(rng, J, k):
    """k orthonormal columns spanning a random subspace of R^J"""
    q, _ = np.linalg.qr(rng.normal(size=(J, J)))
    return AtomBasis(q[:, :k])


def test_first_order_bias_fixture(missing_model, miscalibrated_fit):
    enumerated, formula = oracle.exact_bias_first_order(missing_model, miscalibrated_fit)
    assert enumerated == pytest.approx(-0.01875, abs=1e-12)
    assert formula == pytest.approx(-0.01875, abs=1e-12)


def test_first_order_bias_does_not_involve_f_hat(missing_model, miscalibrated_fit):
    fit = oracle.fixed_fit(missing_model, miscalibrated_fit.a_hat.table, miscalibrated_fit.b_hat.table,
                           f_hat=[0.9, 0.1])
    enumerated, _ = oracle.exact_bias_first_order(missing_model, fit)
    assert enumerated == pytest.approx(-0.01875, abs=1e-12)


def test_quadratic_bias_identity(rng):
    worst = 0.0
    for dmodel, da, db in random_cases(rng, 120):
        fit = oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b + db)
        enumerated, formula = oracle.exact_bias_first_order(dmodel, fit)
        worst = max(worst, abs(enumerated - formula))
    assert worst <= 1e-10


def test_double_robustness_and_bilinearity(rng):
    for dmodel, da, db in random_cases(rng, 60):
        for fit in (oracle.fixed_fit(dmodel, dmodel.a, dmodel.b + db), oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b)):
            enumerated, formula = oracle.exact_bias_first_order(dmodel, fit)
            assert abs(enumerated) <= 1e-12
            assert abs(formula) <= 1e-12
        base = oracle.exact_bias_first_order(dmodel, oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b + db))[1]
        scaled = oracle.exact_bias_first_order(dmodel, oracle.fixed_fit(dmodel, dmodel.a + 3 * da, dmodel.b + db))[1]
        assert scaled == pytest.approx(3 * base, abs=1e-12)


def test_estimate_first_order_on_a_fold(missing_model, miscalibrated_fit):
    data = generate_dataset(missing_model, missing_model.kind, 400, seed=5)
    chi_plugin, chi_first, var_first = first_order.estimate_first_order(data, miscalibrated_fit, missing_model.kind)
    values = model.first_order_if(missing_model.kind, miscalibrated_fit, chi_plugin, data)
    assert chi_plugin == pytest.approx(miscalibrated_fit.f_hat.table @ miscalibrated_fit.b_hat.table, abs=1e-15)
    assert chi_first == pytest.approx(chi_plugin + np.mean(values), abs=1e-12)
    assert var_first == pytest.approx(np.var(values, ddof=1) / 400, rel=1e-12)


def test_representation_bias_fixture(missing_model, miscalibrated_fit):
    pk = oracle.true_projection_kernel(missing_model, AtomBasis.constant(2))
    enumerated, formula = oracle.exact_bias_second_order(missing_model, miscalibrated_fit, pk)
    assert formula == pytest.approx(-1.0 / 60.0, abs=1e-12)
    assert enumerated == pytest.approx(formula, abs=1e-10)


def test_representation_bias_limits(missing_model, miscalibrated_fit):
    full = oracle.true_projection_kernel(missing_model, AtomBasis.indicator(2))
    enumerated, formula = oracle.exact_bias_second_order(missing_model, miscalibrated_fit, full)
    assert abs(enumerated) <= 1e-10 and abs(formula) <= 1e-10

    empty = oracle.true_projection_kernel(missing_model, AtomBasis.empty(2))
    first = oracle.exact_bias_first_order(missing_model, miscalibrated_fit)[0]
    enumerated, formula = oracle.exact_bias_second_order(missing_model, miscalibrated_fit, empty)
    assert enumerated == pytest.approx(first, abs=1e-12)
    assert formula == pytest.approx(first, abs=1e-12)


def test_orthogonal_errors_are_not_corrected(missing_model):
    # (0.5, -1) is orthogonal to the constants in L2(w), w = (-0.25, -0.125)
    fit = oracle.fixed_fit(missing_model, missing_model.a + np.array([0.5, -1.0]), missing_model.b + np.array([0.1, -0.1]))
    pk = oracle.true_projection_kernel(missing_model, AtomBasis.constant(2))
    kernel = second_order.build_second_order_kernel(fit, missing_model.kind, pk)
    assert abs(discrete.exact_expectation(missing_model, kernel, order=2)) <= 1e-10
    second, _ = oracle.exact_bias_second_order(missing_model, fit, pk)
    first, _ = oracle.exact_bias_first_order(missing_model, fit)
    assert second == pytest.approx(first, abs=1e-10)


def test_representation_bias_identity_randomized(rng):
    for dmodel, da, db in random_cases(rng, 100):
        k = int(rng.integers(0, dmodel.J + 1))
        basis = random_basis(rng, dmodel.J, k)
        pk = oracle.true_projection_kernel(dmodel, basis)
        fit = oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b + db)
        enumerated, formula = oracle.exact_bias_second_order(dmodel, fit, pk)
        assert abs(enumerated - formula) <= 1e-10

        in_span = basis.matrix @ rng.normal(size=k), basis.matrix @ rng.normal(size=k)
        fit = oracle.fixed_fit(dmodel, dmodel.a + in_span[0], dmodel.b + in_span[1])
        assert abs(oracle.exact_bias_second_order(dmodel, fit, pk)[0]) <= 1e-10


def test_degeneracy_at_truth(rng):
    for dmodel, _, _ in random_cases(rng, 60):
        basis = random_basis(rng, dmodel.J, int(rng.integers(1, dmodel.J + 1)))
        pk = oracle.true_projection_kernel(dmodel, basis)
        kernel = second_order.build_second_order_kernel(oracle.fixed_fit(dmodel, dmodel.a, dmodel.b), dmodel.kind, pk)
        assert hoeffding.degeneracy_check(dmodel, kernel) <= 1e-10


def test_residual_conditional_means(rng):
    for dmodel, da, db in random_cases(rng, 30):
        fit = oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b + db)
        s1 = model.stilde(dmodel.kind, dmodel.params)[0](dmodel.domain.nodes)
        ea = discrete.conditional_expectation(dmodel, lambda x: model.residuals(dmodel.kind, fit.a_hat, fit.b_hat, x)[0])
        eb = discrete.conditional_expectation(dmodel, lambda x: model.residuals(dmodel.kind, fit.a_hat, fit.b_hat, x)[1])
        assert np.max(np.abs(ea - s1 * da)) <= 1e-12
        assert np.max(np.abs(eb - s1 * db)) <= 1e-12


def test_bias_decreases_along_nested_bases(rng):
    for _ in range(20):
        dmodel = random_discrete_model(all_kinds()[int(rng.integers(0, 3))], 8, rng)
        delta = rng.normal(0, 0.2, 8)
        fit = oracle.fixed_fit(dmodel, dmodel.a + delta, dmodel.b + delta)
        matrix = random_basis(rng, 8, 8).matrix
        biases = [abs(oracle.exact_bias_second_order(dmodel, fit, oracle.true_projection_kernel(
            dmodel, AtomBasis(matrix).truncate(k)))[0]) for k in range(9)]
        assert all(b2 <= b1 + 1e-12 for b1, b2 in zip(biases, biases[1:]))


def test_weight_estimation_bias_is_first_order_in_delta(rng):
    dmodel = random_discrete_model(all_kinds()[0], 6, rng)
    basis = random_basis(rng, 6, 3)
    fit = oracle.fixed_fit(dmodel, dmodel.a + basis.matrix @ [0.1, -0.2, 0.05],
                           dmodel.b + basis.matrix @ [0.05, 0.02, -0.1])
    direction = rng.uniform(-1, 1, 6) * np.abs(dmodel.weight().table)
    sweep = oracle.weight_perturbation_sweep(dmodel, fit, basis, direction, [0.02, 0.01, 0.005, 0.0025, 0.0])
    biases = [abs(b) for _, b in sweep]
    assert biases[-1] <= 1e-10
    for larger, smaller in zip(biases[:-2], biases[1:-1]):
        assert smaller <= 1.2 * larger / 2


def test_zero_rank_second_order_equals_first_order(missing_model, miscalibrated_fit):
    data = generate_dataset(missing_model, missing_model.kind, 50, seed=2)
    pk = oracle.true_projection_kernel(missing_model, AtomBasis.empty(2))
    chi_first = first_order.estimate_first_order(data, miscalibrated_fit, missing_model.kind)[1]
    assert second_order.estimate_second_order(data, miscalibrated_fit, missing_model.kind, pk) == chi_first


@pytest.mark.parametrize('kind', all_kinds(), ids=lambda k: k.tag)
def test_fast_u_statistic_matches_direct_sum(kind):
    truth = continuous_truth(kind, d=1, levels=3, quadrature_level=8)
    data = generate_dataset(truth, kind, 120, seed=4)
    fit = fit_nuisances(kind, data, Haar.build_tensor_haar(1, 2))
    pk = second_order.build_projection_kernel(fit, kind, Haar.build_tensor_haar(1, 3))
    kernel = second_order.build_second_order_kernel(fit, kind, pk)
    direct = ustat_order2(data, kernel)
    assert kernel.u_statistic(data) == pytest.approx(direct, abs=1e-10)
    rows = np.array([np.sum(np.delete(kernel(data[i], data), i)) / (len(data) - 1) for i in range(len(data))])
    assert np.max(np.abs(kernel.row_means(data) - rows)) <= 1e-10
    fast = second_order.estimate_second_order(data, fit, kind, pk)
    slow = second_order.estimate_second_order(data, fit, kind, pk, method='direct')
    assert fast == pytest.approx(slow, abs=1e-10)


def test_projection_weight_options(missing_model, miscalibrated_fit):
    direct = second_order.projection_weight(miscalibrated_fit, missing_model.kind, 'direct')
    plugin = second_order.projection_weight(miscalibrated_fit, missing_model.kind, 'plugin')
    atoms = np.arange(2)
    assert np.allclose(direct(atoms), [-0.25, -0.125])
    # stilde_1(eta_hat) f_hat = -f / a_hat
    assert np.allclose(plugin(atoms), -0.5 / miscalibrated_fit.a_hat.table)
    with pytest.raises(ConfigurationError):
        second_order.projection_weight(miscalibrated_fit, missing_model.kind, 'lebesgue')


def test_report_interval():
    rpt = report.EstimateReport(0.4, 0.5, 0.52, 0.0004, 3)
    lo, hi = rpt.ci_first(0.05)
    assert lo == pytest.approx(0.5 - 1.959963984540054 * 0.02, abs=1e-12)
    assert hi - 0.5 == pytest.approx(0.5 - lo, abs=1e-15)
    assert rpt.estimate('second') == 0.52
    assert rpt.to_dict()['k_used'] == 3


@pytest.mark.parametrize('kind', [Covariance(), ATE(propensity=0.4)], ids=['covariance', 'ate'])
def test_cross_fitting_driver(kind):
    truth = continuous_truth(kind, d=1, levels=3, quadrature_level=8)
    data = generate_dataset(truth, kind, 600, seed=9)
    basis = Haar.build_tensor_haar(1, 2)
    first = report.estimate(data, kind, basis, folds=2, seed=1)
    again = report.estimate(data, kind, basis, folds=2, seed=1)
    assert first.chi_second == again.chi_second
    assert np.isfinite([first.chi_plugin, first.chi_first, first.chi_second]).all()
    assert first.var_first >= 0
    assert first.k_used == 4
    assert first.diagnostics['folds'] == 2
    assert abs(first.chi_first - model.functional_chi(truth)) < 0.2


def test_no_split_is_allowed_with_a_warning(missing_model, caplog):
    data = generate_dataset(missing_model, missing_model.kind, 300, seed=1)
    with caplog.at_level(logging.WARNING):
        rpt = report.estimate(data, missing_model.kind, AtomBasis.indicator(2), folds=1)
    assert rpt.diagnostics['folds'] == 1
    assert 'No sample splitting' in caplog.text


def test_truth_fit_has_no_bias(missing_model):
    fit = oracle.fixed_fit(missing_model, missing_model.a, missing_model.b)
    assert oracle.exact_bias_first_order(missing_model, fit)[0] == pytest.approx(0.0, abs=1e-12)
    params_fit = NuisanceFit.from_params(missing_model.params, missing_model.kind)
    assert first_order.plugin_estimate(params_fit, missing_model.kind) == pytest.approx(missing_model.chi(), abs=1e-15)


def _monte_carlo(dmodel, fit, basis, n, R):
    pk = oracle.true_projection_kernel(dmodel, basis)
    firsts, seconds = [], []
    for rep in range(R):
        data = generate_dataset(dmodel, dmodel.kind, n, seed=np.random.SeedSequence(99, spawn_key=(rep,)))
        _, chi_first, _ = first_order.estimate_first_order(data, fit, dmodel.kind)
        firsts.append(chi_first)
        seconds.append(second_order.estimate_second_order(data, fit, dmodel.kind, pk, chi_first=chi_first))
    return np.array(firsts), np.array(seconds), pk


@pytest.mark.slow
def test_monte_carlo_calibration(missing_model, miscalibrated_fit):
    basis = AtomBasis.constant(2)
    firsts, seconds, pk = _monte_carlo(missing_model, miscalibrated_fit, basis, 500, 2000)
    chi = missing_model.chi()
    first_bias = oracle.exact_bias_first_order(missing_model, miscalibrated_fit)[0]
    second_bias = oracle.exact_bias_second_order(missing_model, miscalibrated_fit, pk)[0]
    se = firsts.std(ddof=1) / np.sqrt(len(firsts))
    assert abs(firsts.mean() - chi - first_bias) <= 4 * se
    se = seconds.std(ddof=1) / np.sqrt(len(seconds))
    assert abs(seconds.mean() - chi - second_bias) <= 4 * se
