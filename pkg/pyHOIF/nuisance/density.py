"""
Histogram estimators of the covariate density f and of the weight stilde_1 f
"""

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import ArgumentError


def _histogram(z_data, partition, n):
    counts = np.bincount(np.asarray(partition.cell_index(z_data), dtype=int).reshape(-1),
                         minlength=partition.ncells).astype(float)
    return counts / (n * partition.volumes())


def fit_density_histogram(z_data, partition):
    """
    Histogram density: cell frequencies divided by cell volumes. It integrates to 1 and empty
    cells get density 0.
    :param z_data: covariates of the sample
    :param partition: Partition of the covariate domain
    :return: PiecewiseConstant
    """
    n = len(z_data)
    if n == 0:
        raise ArgumentError("Density estimation needs at least one observation")
    return functions.PiecewiseConstant(partition, _histogram(z_data, partition, n))


def fit_weight(kind, data, partition):
    """
    Direct estimate of the weight w = stilde_1 f of the second order bias.

    For missing data w = -f P(A=1|Z), minus the histogram of the covariates of the observed
    (A=1) records normalized by the total sample size. For the covariance and ATE models
    stilde_1 = -1 and w = -f.
    :param kind: ModelKind
    :param data: Dataset
    :param partition: Partition of the covariate domain
    :return: PiecewiseConstant
    """
    n = len(data)
    if n == 0:
        raise ArgumentError("Weight estimation needs at least one observation")
    if kind.tag == 'missing':
        observed = data.a == 1
        values = -_histogram(data.z[observed], partition, n)
    else:
        values = -_histogram(data.z, partition, n)
    return functions.PiecewiseConstant(partition, values)
