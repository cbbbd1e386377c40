"""
Weighted Gram matrices and rank-k projection kernels.

For a basis phi = (phi_1..phi_k) and a (possibly signed) weight measure w, the projection kernel

    Pi_k(z1, z2) = phi(z1)' Omega^-1 phi(z2),   Omega = int phi phi' w dnu

reproduces span(phi) in L2(w): int Pi_k(z, z2) g(z) w(z) dnu(z) = g(z2) for every g in the span.
"""

import logging

import numpy as np

from pyHOIF.basis.basis import SeriesFunction
from pyHOIF.common import functions
from pyHOIF.common.Exceptions import DegenerateWeightError


logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


class WeightMeasure(object):
    """
    A signed measure w dnu on the covariate domain. On discrete supports the values are the
    atom weights (any density factor already included).
    :param w: evaluable weight function
    :param domain: Quadrature used to integrate against the weight
    """
    def __init__(self, w, domain=None, **kwargs):
        self.w = functions.as_function(w)
        self.domain = domain
        self.name = kwargs.get('name', '')

    def __call__(self, z):
        return self.w(z)

    def scaled(self, factor):
        return WeightMeasure(self.w * factor, self.domain, name=self.name)

    def __repr__(self):
        return "WeightMeasure({})".format(self.name or self.w)


def _domain(basis, weight, domain):
    if domain is not None:
        return domain
    if getattr(weight, 'domain', None) is not None:
        return weight.domain
    return basis.default_domain()


def _as_weight(weight):
    return weight if isinstance(weight, WeightMeasure) else WeightMeasure(weight)


def gram(basis, weight, domain=None, max_condition=MAX_CONDITION):
    """
    Weighted Gram matrix Omega_ij = int phi_i phi_j w dnu
    :param basis: BasisSystem
    :param weight: WeightMeasure (or evaluable weight function)
    :param domain: Quadrature (discrete support or grid); defaults to the weight's, then the basis'
    :param max_condition: largest admissible condition number
    :return: k x k matrix
    """
    weight = _as_weight(weight)
    domain = _domain(basis, weight, domain)
    phi = basis.design(domain.nodes)
    wts = np.asarray(weight(domain.nodes), dtype=float) * domain.weights
    omega = phi.T @ (phi * wts[:, None])
    if basis.size > 0:
        cond = np.linalg.cond(omega)
        if not np.isfinite(cond) or cond > max_condition:
            logger.debug("Rejecting weight %s: Gram condition number %g", weight, cond)
            raise DegenerateWeightError("Gram matrix of {} is singular with respect to the weight "
                                        "(condition number {:g})".format(basis, cond), condition=cond)
    return omega


class ProjectionKernel(object):
    """
    Rank-k reproducing kernel of span(basis) in L2(weight)
    :param basis: BasisSystem
    :param weight: WeightMeasure
    :param domain: integration domain of the Gram matrix
    """
    def __init__(self, basis, weight, domain=None, **kwargs):
        self.basis = basis
        self.weight = _as_weight(weight)
        self.domain = _domain(basis, self.weight, domain)
        self.omega = gram(basis, self.weight, self.domain, kwargs.get('max_condition', MAX_CONDITION))
        if basis.size > 0:
            inv = np.linalg.inv(self.omega)
            self.omega_inverse = (inv + inv.T) / 2.0
            self.condition = float(np.linalg.cond(self.omega))
        else:
            self.omega_inverse = np.zeros((0, 0))
            self.condition = 1.0

    @property
    def rank(self):
        return self.basis.size

    def __call__(self, z1, z2):
        return projection_kernel_eval(self, z1, z2)

    def inner_products(self, g):
        """The vector int phi g w dnu"""
        g = functions.as_function(g)
        nodes = self.domain.nodes
        wts = np.asarray(self.weight(nodes), dtype=float) * self.domain.weights
        return self.basis.design(nodes).T @ (np.asarray(g(nodes), dtype=float) * wts)

    def __repr__(self):
        return "ProjectionKernel({}, {})".format(self.basis, self.weight)


def projection_kernel_eval(pk, z1, z2):
    """
    Kernel value Pi_k(z1, z2), broadcasting over the leading axes of z1 and z2
    """
    if pk.rank == 0:
        return np.zeros(np.broadcast_shapes(functions.points_shape(z1), functions.points_shape(z2)))
    return np.sum((pk.basis.design(z1) @ pk.omega_inverse) * pk.basis.design(z2), axis=-1)


def project_function(pk, g):
    """
    Projection Pi_k g of a function on span(basis) in L2(weight)
    :param pk: ProjectionKernel
    :param g: evaluable function
    :return: tuple (coefficients, projected function)
    """
    coefficients = pk.omega_inverse @ pk.inner_products(g) if pk.rank > 0 else np.zeros(0)
    return coefficients, SeriesFunction(pk.basis, coefficients)
