"""
Partitions of the covariate domain into cells. Histograms and piecewise constant bases are
built on them.
"""

import numpy as np


class Partition(object):
    """
    Partition of the covariate domain in cells
    """
    def __init__(self, **kwargs):
        """
        :param name: partition name
        :param ncells: number of cells
        """
        self.name = kwargs.get('name', "")
        self.ncells = kwargs.get('ncells', 0)

    def cell_index(self, z):
        """
        Index of the cell of each covariate point
        :param z: covariates
        :return: integer array
        """
        raise NotImplementedError('Cell lookup not implemented for this partition!')

    def volumes(self):
        """Dominating measure of each cell"""
        raise NotImplementedError('Cell volumes not implemented for this partition!')

    def __len__(self):
        return self.ncells

    def __str__(self):
        return "{}({} cells)".format(self.name, self.ncells)


class DyadicPartition(Partition):
    """Even length grid of [0,1]^d with 2^level intervals per axis"""

    def __init__(self, d, level, **kwargs):
        super(DyadicPartition, self).__init__(name=kwargs.get('name', "Dyadic"), ncells=2 ** (level * d))
        self.d = d
        self.level = level
        self.m = 2 ** level

    def cell_index(self, z):
        z = np.asarray(z, dtype=float)
        idx = np.clip(np.floor(z * self.m).astype(int), 0, self.m - 1)
        if self.d == 1:
            return idx[..., 0]
        return np.ravel_multi_index(tuple(np.moveaxis(idx, -1, 0)), (self.m,) * self.d)

    def volumes(self):
        return np.full(self.ncells, 1.0 / self.ncells)


class AtomPartition(Partition):
    """The atoms of a discrete support, each one a cell of unit (counting) measure"""

    def __init__(self, J, **kwargs):
        super(AtomPartition, self).__init__(name=kwargs.get('name', "Atoms"), ncells=J)
        self.J = J

    def cell_index(self, z):
        return np.asarray(z, dtype=int)

    def volumes(self):
        return np.ones(self.J)
