"""
Basis systems: finite families of evaluable functions on the covariate domain
"""

import numpy as np

from pyHOIF.common import functions


class BasisSystem(object):
    """
    A family of k linearly independent functions phi_1..phi_k on the covariate domain
    """
    def __init__(self, **kwargs):
        """
        :param name: basis name
        :param dim_domain: dimension d of the covariate domain
        :param size: number of functions k
        :param partition: partition on whose cells the functions are constant, if any
        """
        self.name = kwargs.get('name', "")
        self.dim_domain = kwargs.get('dim_domain', 1)
        self.size = kwargs.get('size', 0)
        self.partition = kwargs.get('partition', None)

    def design(self, z):
        """
        The vector of basis functions at each covariate point
        :param z: covariates
        :return: array with shape (..., k)
        """
        raise NotImplementedError('Basis evaluation not implemented!')

    def __call__(self, z):
        return self.design(z)

    def __len__(self):
        return self.size

    def default_domain(self):
        """An integration domain on which the basis integrals are exact"""
        raise NotImplementedError('No default domain for this basis!')

    def __str__(self):
        return "{}(k={})".format(self.name, self.size)


class SeriesFunction(functions.Function):
    """
    Finite expansion z -> phi(z)' c on a basis system
    """
    def __init__(self, basis, coefficients):
        self.basis = basis
        self.coefficients = np.array(coefficients, dtype=float).reshape(-1)
        if len(self.coefficients) != basis.size:
            raise ValueError("One coefficient per basis function is required")
        self.coefficients.setflags(write=False)

    def __call__(self, z):
        if self.basis.size == 0:
            return np.zeros(functions.points_shape(z))
        return self.basis.design(z) @ self.coefficients

    def __repr__(self):
        return "SeriesFunction({}, {})".format(self.basis, np.array2string(self.coefficients, precision=4))
