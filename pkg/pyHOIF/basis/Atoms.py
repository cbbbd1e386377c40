"""Bases on a discrete covariate support"""

import numpy as np

from pyHOIF.basis import basis, partitioner
from pyHOIF.common.Exceptions import ConfigurationError
from pyHOIF.common.Quadrature import DiscreteSupport


class AtomBasis(basis.BasisSystem):
    """
    Basis on the J atoms of a discrete support, given by the J x k matrix of its values
    """
    def __init__(self, matrix, **kwargs):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2:
            raise ConfigurationError("An atom basis is given by a J x k matrix", field='basis')
        J, k = matrix.shape
        if k > J or (k > 0 and np.linalg.matrix_rank(matrix) < k):
            raise ConfigurationError("Atom basis functions must be linearly independent", field='basis')
        super(AtomBasis, self).__init__(name=kwargs.get('name', "Atoms"), dim_domain=1, size=k,
                                        partition=partitioner.AtomPartition(J))
        self.J = J
        self.matrix = matrix
        self.matrix.setflags(write=False)

    def design(self, z):
        return self.matrix[np.asarray(z, dtype=int)]

    def default_domain(self):
        return DiscreteSupport(self.J)

    def truncate(self, k):
        """The basis of the first k functions"""
        return AtomBasis(self.matrix[:, :k], name=self.name)

    @staticmethod
    def indicator(J, k=None):
        """
        Indicators of k contiguous groups of atoms (k = J gives the full indicator basis)
        """
        k = J if k is None else k
        if not 0 <= k <= J:
            raise ConfigurationError("An indicator basis on {} atoms has at most {} functions".format(J, J),
                                     field='k')
        matrix = np.zeros((J, k))
        for col, group in enumerate(np.array_split(np.arange(J), k) if k > 0 else []):
            matrix[group, col] = 1.0
        return AtomBasis(matrix, name="Indicator")

    @staticmethod
    def constant(J):
        return AtomBasis(np.ones((J, 1)), name="Constant")

    @staticmethod
    def empty(J):
        return AtomBasis(np.zeros((J, 0)), name="Empty")

    def __str__(self):
        return "{}(J={}, k={})".format(self.name, self.J, self.size)
