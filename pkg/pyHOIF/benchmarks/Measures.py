# -*- coding: utf8 -*-

"""
pyHOIF module for the accuracy measures of the Monte Carlo experiments
"""

import math

import numpy as np
import statsmodels.api as sm

from pyHOIF.common.Exceptions import ArgumentError


def _array(values):
    return np.asarray(values, dtype=float).reshape(-1)


def mean(estimates):
    estimates = _array(estimates)
    return math.fsum(estimates) / len(estimates)


def bias(estimates, truth):
    """
    Empirical bias of the estimates of a known value
    :param estimates: list of estimates
    :param truth: true value of the functional
    :return: mean(estimates) - truth
    """
    return mean(estimates) - truth


def variance(estimates):
    """Empirical variance (divided by the number of replications)"""
    estimates = _array(estimates)
    return math.fsum((estimates - mean(estimates)) ** 2) / len(estimates)


def rmse(estimates, truth):
    """
    Root mean squared error. RMSE^2 = bias^2 + variance up to rounding.
    """
    return math.sqrt(bias(estimates, truth) ** 2 + variance(estimates))


def standard_error(estimates):
    """Monte Carlo standard error of the mean of the estimates"""
    estimates = _array(estimates)
    if len(estimates) < 2:
        return 0.0
    return float(np.std(estimates, ddof=1)) / math.sqrt(len(estimates))


def rate_slope(table, estimator):
    """
    Ordinary least squares slope of log(RMSE) against log(n)
    :param table: ResultTable (or DataFrame with the ResultTable columns)
    :param estimator: estimator name
    :return: the slope
    """
    df = table.to_dataframe() if hasattr(table, 'to_dataframe') else table
    rows = df[df['estimator'] == estimator]
    if rows['n'].nunique() < 3:
        raise ArgumentError("The rate of {} needs at least 3 distinct sample sizes, got {}"
                            .format(estimator, rows['n'].nunique()))
    x = sm.add_constant(np.log(rows['n'].values.astype(float)))
    model = sm.OLS(np.log(rows['rmse'].values.astype(float)), x).fit()
    return float(model.params[1])
