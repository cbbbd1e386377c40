"""Tensor product Haar system on [0,1]^d"""

import numpy as np

from pyHOIF.basis import basis, partitioner
from pyHOIF.common.Exceptions import ConfigurationError
from pyHOIF.common.Quadrature import MidpointGrid


DEFAULT_MAX_K = 4096


class HaarBasis(basis.BasisSystem):
    """
    Piecewise constant Haar scaling functions at a resolution level: the indicators of the
    2^(level*d) cells of the dyadic grid, scaled by 2^(level*d/2) so that they are orthonormal
    in L2(Lebesgue).
    """
    def __init__(self, d, level, **kwargs):
        part = partitioner.DyadicPartition(d, level)
        super(HaarBasis, self).__init__(name=kwargs.get('name', "Haar"), dim_domain=d, size=part.ncells,
                                        partition=part)
        self.level = level
        self.scale = 2.0 ** (level * d / 2.0)

    def design(self, z):
        idx = self.partition.cell_index(z)
        out = np.zeros(np.shape(idx) + (self.size,))
        np.put_along_axis(out, np.expand_dims(idx, -1), self.scale, axis=-1)
        return out

    def default_domain(self):
        return MidpointGrid(self.dim_domain, self.level)

    def __str__(self):
        return "Haar(d={}, level={}, k={})".format(self.dim_domain, self.level, self.size)


def build_tensor_haar(d, level, max_k=DEFAULT_MAX_K):
    """
    Tensor product Haar system
    :param d: dimension of the covariate domain
    :param level: resolution level
    :param max_k: largest admissible number of functions
    :return: HaarBasis with 2^(level*d) functions
    """
    if d < 1 or level < 0:
        raise ConfigurationError("Haar basis requires d >= 1 and level >= 0", field='level')
    if 2 ** (level * d) > max_k:
        raise ConfigurationError("Haar basis of level {} on [0,1]^{} has {} functions, more than max_k = {}"
                                 .format(level, d, 2 ** (level * d), max_k), field='level')
    return HaarBasis(d, level)


def level_for_size(k, d):
    """Largest resolution level whose Haar system has at most k functions (0 when k < 2^d)"""
    level = 0
    while 2 ** ((level + 1) * d) <= k:
        level += 1
    return level
