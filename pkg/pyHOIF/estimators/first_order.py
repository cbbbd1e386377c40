"""
Plug-in and first order corrected estimators

    chi_plugin = chi(eta_hat)
    chi_first  = chi(eta_hat) + P_n chi1_eta_hat
"""

import math

import numpy as np

from pyHOIF.models import model


def plugin_estimate(fit, kind):
    """chi(eta_hat), integrated against f_hat on the fit's domain"""
    return model.functional_chi(fit.params(kind))


def influence_values(data_fold, fit, kind, chi):
    """Values of the first order influence function of the fit, centered at chi, on a sample"""
    return np.asarray(model.first_order_if(kind, fit, chi, data_fold), dtype=float)


def estimate_first_order(data_fold, fit, kind):
    """
    First order corrected estimator on an estimation fold
    :param data_fold: Dataset, independent of the data the fit was computed on
    :param fit: NuisanceFit
    :param kind: ModelKind
    :return: tuple (chi_plugin, chi_first, var_first), var_first being the sample variance of the
             influence function over the fold divided by the fold size
    """
    n = len(data_fold)
    chi_plugin = plugin_estimate(fit, kind)
    if n == 0:
        return chi_plugin, chi_plugin, 0.0
    values = influence_values(data_fold, fit, kind, chi_plugin)
    chi_first = chi_plugin + math.fsum(values) / n
    var_first = float(np.var(values, ddof=1)) / n if n > 1 else 0.0
    return chi_plugin, chi_first, var_first
