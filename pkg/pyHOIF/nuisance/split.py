"""
Sample splitting
"""

import numpy as np

from pyHOIF.common.Exceptions import ArgumentError


class SplitPlan(object):
    """
    Assignment of the indexes 0..n-1 to F folds. The nuisances used on a fold are fit on its complement.
    """
    def __init__(self, n, folds):
        self.n = n
        self.folds = [np.sort(np.asarray(f, dtype=int)) for f in folds]

    def __len__(self):
        return len(self.folds)

    def fold(self, i):
        return self.folds[i]

    def complement(self, i):
        mask = np.ones(self.n, dtype=bool)
        mask[self.folds[i]] = False
        return np.flatnonzero(mask)

    def pairs(self):
        """Generator of (estimation fold, fitting indexes)"""
        for i in range(len(self)):
            yield self.fold(i), self.complement(i)

    def sizes(self):
        return [len(f) for f in self.folds]

    def __repr__(self):
        return "SplitPlan(n={}, sizes={})".format(self.n, self.sizes())


def sample_split(n, F, seed=None):
    """
    Balanced pseudo-random partition of the sample indexes
    :param n: sample size
    :param F: number of folds, at least 2
    :param seed: anything accepted by numpy.random.default_rng
    :return: SplitPlan with fold sizes differing by at most 1
    """
    if F < 2:
        raise ArgumentError("Sample splitting needs at least 2 folds, got {}".format(F))
    if n < F:
        raise ArgumentError("Cannot split {} observations in {} folds".format(n, F))
    permutation = np.random.default_rng(seed).permutation(n)
    return SplitPlan(n, np.array_split(permutation, F))
