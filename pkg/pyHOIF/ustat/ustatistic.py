"""
U-statistics

    U_n f = 1/(n(n-1)) sum_{i != j} f(X_i, X_j)

evaluated exactly with a direct O(n^2) loop. Rows are summed in fixed blocks with compensated
summation, so the result does not depend on the number of parallel jobs.
"""

import math

import numpy as np
from joblib import Parallel, delayed

from pyHOIF.common.Exceptions import ArgumentError


DEFAULT_BLOCK_SIZE = 256


class Kernel2(object):
    """
    Symmetric kernel of two observations. A function that is not known to be symmetric is
    symmetrized on construction.
    :param func: vectorized function f(x1, x2), called with a single observation against a sample
    :param symmetric: True if func is already symmetric
    :param degenerate: advisory flag, True if the kernel is claimed degenerate
    """
    order = 2

    def __init__(self, func, symmetric=False, degenerate=False, **kwargs):
        if symmetric:
            self.func = func
        else:
            self.func = lambda x1, x2: 0.5 * (func(x1, x2) + func(x2, x1))
        self.degenerate = degenerate
        self.name = kwargs.get('name', getattr(func, '__name__', 'kernel'))

    def __call__(self, x1, x2):
        return self.func(x1, x2)

    def __repr__(self):
        return "Kernel2({})".format(self.name)


def symmetrize(f):
    """
    Symmetrized kernel (x1, x2) -> (f(x1, x2) + f(x2, x1)) / 2
    :param f: function of two observations
    :return: Kernel2
    """
    if isinstance(f, Kernel2):
        return f
    return Kernel2(f, symmetric=False)


def ustat_order1(data, g):
    """
    Empirical mean of g
    :param data: sample (Dataset or array of pseudo observations)
    :param g: vectorized function of one observation
    :return: float
    """
    n = len(data)
    if n < 1:
        raise ArgumentError("A U-statistic of order 1 needs at least one observation")
    values = np.broadcast_to(np.asarray(g(data), dtype=float), (n,))
    return math.fsum(values) / n


def _block_sum(data, f, lo, hi):
    n = len(data)
    sums = []
    for i in range(lo, hi):
        row = np.array(np.broadcast_to(np.asarray(f(data[i], data), dtype=float), (n,)))
        row[i] = 0.0
        sums.append(math.fsum(row))
    return math.fsum(sums)


def ustat_order2(data, f, **kwargs):
    """
    U-statistic of order 2 over the ordered pairs of distinct observations
    :param data: sample (Dataset or array of pseudo observations)
    :param f: function of two observations, vectorized in its second argument
    :keyword
        n_jobs: number of parallel jobs (joblib), default 1
        block_size: number of rows summed per job, default 256
    :return: float
    """
    n = len(data)
    if n < 2:
        raise ArgumentError("A U-statistic of order 2 needs at least two observations")
    n_jobs = kwargs.get('n_jobs', 1)
    block_size = kwargs.get('block_size', DEFAULT_BLOCK_SIZE)
    blocks = [(lo, min(lo + block_size, n)) for lo in range(0, n, block_size)]
    if n_jobs == 1 or len(blocks) == 1:
        sums = [_block_sum(data, f, lo, hi) for lo, hi in blocks]
    else:
        sums = Parallel(n_jobs=n_jobs)(delayed(_block_sum)(data, f, lo, hi) for lo, hi in blocks)
    return math.fsum(sums) / (n * (n - 1))
