"""
Randomized invariant suite on exact discrete models
"""

import logging
import numpy as np

from pyHOIF.basis.Atoms import AtomBasis
from pyHOIF.data import artificial
from pyHOIF.estimators import oracle, second_order
from pyHOIF.models import discrete, get_model_kinds, model
from pyHOIF.ustat import hoeffding
from pyHOIF.ustat.ustatistic import ustat_order2


logger = logging.getLogger(__name__)


class CheckResult(object):
    def __init__(self, name, worst, tol):
        self.name = name
        self.worst = worst
        self.tol = tol

    @property
    def passed(self):
        return self.worst <= self.tol

    def __repr__(self):
        return "{:<28} {:>12.3e} <= {:.0e} {}".format(self.name, self.worst, self.tol,
                                                      'ok' if self.passed else 'FAILED')


def _random_cases(cases, rng):
    kinds = [cls() for cls in get_model_kinds()]
    for i in range(cases):
        kind = kinds[i % len(kinds)]
        dmodel = artificial.random_discrete_model(kind, int(rng.integers(2, 11)), rng)
        da, db = artificial.random_fixed_errors(dmodel, rng)
        yield dmodel, da, db


def _missing_data_fixture():
    kind = get_model_kinds()[0]()
    dmodel = discrete.DiscreteModel([0.5, 0.5], [2.0, 4.0], [0.3, 0.6], kind)
    fit = oracle.fixed_fit(dmodel, dmodel.a + [0.5, -0.5], dmodel.b + [0.1, -0.1])
    enumerated, formula = oracle.exact_bias_first_order(dmodel, fit)
    return max(abs(enumerated + 0.01875), abs(formula + 0.01875))


def run_selftest(cases=100, seed=0):
    """
    Run the invariant checks
    :param cases: number of random discrete models
    :param seed: seed of the random models
    :return: list of CheckResult
    """
    rng = np.random.default_rng(seed)
    worst = {'mean zero influence': 0.0, 'conditional means': 0.0, 'quadratic bias identity': 0.0,
             'double robustness': 0.0, 'representation bias': 0.0, 'degeneracy at truth': 0.0}
    for dmodel, da, db in _random_cases(cases, rng):
        kind = dmodel.kind
        truth = dmodel.params
        chi = dmodel.chi()
        mean_if = discrete.exact_expectation(dmodel, lambda x: model.first_order_if(kind, truth, chi, x), order=1)
        worst['mean zero influence'] = max(worst['mean zero influence'], abs(mean_if))

        st = model.stilde(kind, truth)
        for i, field in enumerate(('s1', 's2', 's3')):
            enumerated = discrete.conditional_expectation(dmodel, lambda x: getattr(kind.statistic(x), field))
            worst['conditional means'] = max(worst['conditional means'],
                                             float(np.max(np.abs(enumerated - st[i](dmodel.domain.nodes)))))

        fit = oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b + db)
        enumerated, formula = oracle.exact_bias_first_order(dmodel, fit)
        worst['quadratic bias identity'] = max(worst['quadratic bias identity'], abs(enumerated - formula))
        for partial in (oracle.fixed_fit(dmodel, dmodel.a, dmodel.b + db), oracle.fixed_fit(dmodel, dmodel.a + da, dmodel.b)):
            worst['double robustness'] = max(worst['double robustness'],
                                             *map(abs, oracle.exact_bias_first_order(dmodel, partial)))

        k = int(rng.integers(0, dmodel.J + 1))
        basis = AtomBasis(np.linalg.qr(rng.normal(size=(dmodel.J, dmodel.J)))[0][:, :k])
        pk = oracle.true_projection_kernel(dmodel, basis)
        enumerated, formula = oracle.exact_bias_second_order(dmodel, fit, pk)
        worst['representation bias'] = max(worst['representation bias'], abs(enumerated - formula))

        kernel = second_order.build_second_order_kernel(oracle.fixed_fit(dmodel, dmodel.a, dmodel.b), kind, pk)
        worst['degeneracy at truth'] = max(worst['degeneracy at truth'], hoeffding.degeneracy_check(dmodel, kernel))

    results = [CheckResult(name, value, 1e-10) for name, value in worst.items()]
    results.append(CheckResult('missing data fixture', _missing_data_fixture(), 1e-12))
    results.append(CheckResult('order 2 U-statistic', abs(ustat_order2(np.array([1.0, 2.0, 3.0]),
                                                                       lambda x1, x2: x1 * x2) - 11.0 / 3.0), 1e-12))
    results.append(CheckResult('Hoeffding variance', _hoeffding_check(rng), 1e-12))
    for result in results:
        log = logger.info if result.passed else logger.error
        log("%r", result)
    return results


def _hoeffding_check(rng):
    kind = get_model_kinds()[1]()
    dmodel = discrete.DiscreteModel([0.5, 0.5], rng.uniform(0.2, 0.8, 2), rng.uniform(0.2, 0.8, 2), kind)

    def kernel(x1, x2):
        h1 = x1.a + 0.5 * x1.y1 + 0.1 * x1.z
        h2 = x2.a + 0.5 * x2.y1 + 0.1 * x2.z
        return h1 * h2 + x1.a * x2.y1

    return max(abs(hoeffding.hoeffding_variance(dmodel, kernel, n) - hoeffding.brute_force_variance(dmodel, kernel, n))
               for n in (2, 3, 4))
