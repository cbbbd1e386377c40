"""
Estimate reports and the cross-fitting driver
"""

import logging
import math

from scipy.stats import norm

from pyHOIF.common.Exceptions import ArgumentError
from pyHOIF.estimators import first_order, second_order
from pyHOIF.nuisance import fit as nuisance_fit
from pyHOIF.nuisance.split import sample_split


logger = logging.getLogger(__name__)


class EstimateReport(object):
    """
    The three estimates of a functional on a sample
    :param chi_plugin: plug-in estimate chi(eta_hat)
    :param chi_first: first order corrected estimate
    :param chi_second: second order corrected estimate (None when not computed)
    :param var_first: estimated variance of chi_first
    :param k_used: size of the truncation basis
    :param diagnostics: dict with the degeneracy measure, the Gram condition number, clipping events...
    """
    def __init__(self, chi_plugin, chi_first, chi_second=None, var_first=0.0, k_used=0, diagnostics=None):
        self.chi_plugin = chi_plugin
        self.chi_first = chi_first
        self.chi_second = chi_second
        self.var_first = var_first
        self.k_used = k_used
        self.diagnostics = dict(diagnostics) if diagnostics is not None else {}

    def ci_first(self, alpha=0.05):
        """Normal approximation interval chi_first -/+ z_(1-alpha/2) sqrt(var_first)"""
        half = norm.ppf(1.0 - alpha / 2.0) * math.sqrt(self.var_first)
        return self.chi_first - half, self.chi_first + half

    def estimate(self, name):
        """The estimate of an estimator name: 'plugin', 'first' or 'second'"""
        return {'plugin': self.chi_plugin, 'first': self.chi_first, 'second': self.chi_second}[name]

    def to_dict(self, alpha=0.05):
        lo, hi = self.ci_first(alpha)
        return {'chi_plugin': self.chi_plugin, 'chi_first': self.chi_first, 'chi_second': self.chi_second,
                'var_first': self.var_first, 'ci_first': [lo, hi], 'k_used': self.k_used,
                'diagnostics': self.diagnostics}

    def __repr__(self):
        return "EstimateReport(plugin={:.6g}, first={:.6g}, second={}, var_first={:.3g}, k={})".format(
            self.chi_plugin, self.chi_first,
            'None' if self.chi_second is None else '{:.6g}'.format(self.chi_second), self.var_first, self.k_used)


def estimate_on_fold(data_fold, fit, kind, basis, **kwargs):
    """
    The estimates on one fold for a given fit
    :param data_fold: Dataset
    :param fit: NuisanceFit
    :param kind: ModelKind
    :param basis: truncation BasisSystem, None to skip the second order estimator
    :keyword projection_weight: 'direct' or 'plugin'
    :return: EstimateReport
    """
    chi_plugin, chi_first, var_first = first_order.estimate_first_order(data_fold, fit, kind)
    diagnostics = {'clip_events': fit.meta.get('clip_events', 0)}
    chi_second = None
    k_used = 0
    if basis is not None:
        pk = second_order.build_projection_kernel(fit, kind, basis,
                                                  projection_weight=kwargs.get('projection_weight', 'direct'))
        kernel = second_order.build_second_order_kernel(fit, kind, pk)
        chi_second = chi_first + kernel.u_statistic(data_fold)
        k_used = basis.size
        diagnostics['condition'] = pk.condition
        diagnostics['degeneracy'] = kernel.degeneracy_diagnostic(data_fold)
    return EstimateReport(chi_plugin, chi_first, chi_second, var_first, k_used, diagnostics)


def _average(reports):
    F = len(reports)
    chi_second = None
    if all(r.chi_second is not None for r in reports):
        chi_second = math.fsum(r.chi_second for r in reports) / F
    diagnostics = {'folds': F, 'clip_events': sum(r.diagnostics.get('clip_events', 0) for r in reports)}
    if 'condition' in reports[0].diagnostics:
        diagnostics['condition'] = max(r.diagnostics['condition'] for r in reports)
        diagnostics['degeneracy'] = max(r.diagnostics['degeneracy'] for r in reports)
    return EstimateReport(math.fsum(r.chi_plugin for r in reports) / F,
                          math.fsum(r.chi_first for r in reports) / F,
                          chi_second,
                          math.fsum(r.var_first for r in reports) / F ** 2,
                          reports[0].k_used, diagnostics)


def estimate(data, kind, basis, **kwargs):
    """
    Cross-fitted estimates: for each fold the nuisances are fit on the other folds, and the fold
    estimates are averaged.
    :param data: Dataset
    :param kind: ModelKind
    :param basis: truncation BasisSystem of the second order kernel, None for first order only
    :keyword
        nuisance_basis: BasisSystem of the nuisance regressions, default basis
        partition: Partition of the histograms, default nuisance_basis.partition
        folds: number of folds F, default 2; F = 1 fits and estimates on the same sample
        seed: seed of the sample split
        clip: propensity clipping level, default 0.05
        projection_weight: 'direct' (default) or 'plugin'
    :return: EstimateReport
    """
    nuisance_basis = kwargs.get('nuisance_basis', None)
    if nuisance_basis is None:
        nuisance_basis = basis
    if nuisance_basis is None:
        raise ArgumentError("A nuisance basis is required")
    folds = kwargs.get('folds', 2)
    fit_args = {'partition': kwargs.get('partition', None), 'clip': kwargs.get('clip', 0.05)}
    projection_weight = kwargs.get('projection_weight', 'direct')
    n = len(data)
    if n < 2:
        raise ArgumentError("Estimation needs at least two observations, got {}".format(n))

    if folds == 1:
        logger.warning("No sample splitting: nuisances fit and evaluated on the same %d observations", n)
        fit = nuisance_fit.fit_nuisances(kind, data, nuisance_basis, fold=0, **fit_args)
        return _average([estimate_on_fold(data, fit, kind, basis, projection_weight=projection_weight)])

    plan = sample_split(n, folds, kwargs.get('seed', None))
    reports = []
    for i, (fold, rest) in enumerate(plan.pairs()):
        fit = nuisance_fit.fit_nuisances(kind, data.subset(rest), nuisance_basis, fold=i, **fit_args)
        reports.append(estimate_on_fold(data.subset(fold), fit, kind, basis, projection_weight=projection_weight))
    return _average(reports)
