"""
Exact moments of order 2 U-statistics under discrete models, through the Hoeffding decomposition

    Var(U_n f) = 4(n-2)/(n(n-1)) zeta_1 + 2/(n(n-1)) zeta_2

with zeta_1 = Var f_1(X), f_1(x) = E f(x, X_2), and zeta_2 = Var f(X_1, X_2) for the symmetrized f.
"""

import itertools
import math

import numpy as np

from pyHOIF.common.Exceptions import ArgumentError


def kernel_matrix(model, f):
    """
    Values f(x_i, x_j) on all pairs of support atoms of a discrete model
    :return: m x m matrix
    """
    atoms = model.atoms
    m = len(model.probs)
    return np.array([np.broadcast_to(np.asarray(f(atoms[i], atoms), dtype=float), (m,)) for i in range(m)])


def degeneracy_check(model, f):
    """
    Largest absolute first-coordinate projection max_x |E f(x, X_2)|. The kernel is degenerate
    when it is at most 1e-10.
    :param model: DiscreteModel
    :param f: function of two observations
    :return: float
    """
    F = kernel_matrix(model, f)
    p = model.probs
    return float(max(abs(math.fsum(row * p)) for row in F))


def hoeffding_components(model, f):
    """
    Mean and variance components of the symmetrized kernel
    :return: tuple (theta = P^2 f, zeta_1, zeta_2)
    """
    F = kernel_matrix(model, f)
    F = (F + F.T) / 2.0
    p = model.probs
    theta = math.fsum((F * np.outer(p, p)).reshape(-1))
    f1 = np.array([math.fsum(row * p) for row in F])
    zeta1 = math.fsum(p * (f1 - theta) ** 2)
    zeta2 = math.fsum((np.outer(p, p) * (F - theta) ** 2).reshape(-1))
    return theta, zeta1, zeta2


def hoeffding_variance(model, f, n):
    """
    Exact finite sample variance of U_n f
    :param model: DiscreteModel
    :param f: function of two observations
    :param n: sample size, at least 2
    :return: float
    """
    if n < 2:
        raise ArgumentError("The variance of a U-statistic of order 2 needs n >= 2")
    _, zeta1, zeta2 = hoeffding_components(model, f)
    return 2.0 / (n * (n - 1)) * (2.0 * (n - 2) * zeta1 + zeta2)


def brute_force_variance(model, f, n):
    """
    Variance of U_n f by enumeration of every n-tuple of support atoms. Exponential in n, for
    validation on tiny supports only.
    """
    if n < 2:
        raise ArgumentError("The variance of a U-statistic of order 2 needs n >= 2")
    F = kernel_matrix(model, f)
    p = model.probs
    theta = math.fsum((F * np.outer(p, p)).reshape(-1))
    offdiag = ~np.eye(n, dtype=bool)
    terms = []
    for tup in itertools.product(range(len(p)), repeat=n):
        idx = np.asarray(tup)
        u = math.fsum(F[np.ix_(idx, idx)][offdiag]) / (n * (n - 1))
        terms.append(np.prod(p[idx]) * (u - theta) ** 2)
    return math.fsum(terms)
