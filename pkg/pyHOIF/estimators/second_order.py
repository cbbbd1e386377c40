"""
Second order corrected estimator

    chi_second = chi_first + U_n chi2

with the degenerate kernel

    chi2(x1, x2) = -sym( eps_a(x1) Pi_k(z1, z2) eps_b(x2) )

where eps_a = S1 a_hat + S3 and eps_b = S1 b_hat + S2 are the residuals of the fit and Pi_k is
the projection kernel of the truncation basis in L2(w_hat). At the true parameters the residuals
have zero conditional mean given Z, so the kernel is degenerate. For fixed fits and w_hat = w,
E chi2 = -<Pi_k (a_hat - a), b_hat - b>_w, which cancels the projected part of the first order
bias and leaves <(I - Pi_k)(a_hat - a), (I - Pi_k)(b_hat - b)>_w.
"""

import logging

import numpy as np

from pyHOIF.basis.projection import ProjectionKernel, WeightMeasure
from pyHOIF.common.Exceptions import ArgumentError, ConfigurationError
from pyHOIF.common.Quadrature import MidpointGrid
from pyHOIF.estimators import first_order
from pyHOIF.models import model
from pyHOIF.ustat.ustatistic import Kernel2, ustat_order2


logger = logging.getLogger(__name__)

PROJECTION_WEIGHTS = ('direct', 'plugin')


class SecondOrderKernel(Kernel2):
    """
    Symmetric second order kernel of a fit, with an O(n k^2) evaluation of its U-statistic
    through the factorization Pi_k(z1, z2) = phi(z1)' M phi(z2)
    :param kind: ModelKind
    :param a_hat: evaluable estimate of a
    :param b_hat: evaluable estimate of b
    :param pk: ProjectionKernel
    """
    def __init__(self, kind, a_hat, b_hat, pk, **kwargs):
        self.kind = kind
        self.a_hat = a_hat
        self.b_hat = b_hat
        self.pk = pk
        super(SecondOrderKernel, self).__init__(self._evaluate, symmetric=True, degenerate=True,
                                                name=kwargs.get('name', 'chi2'))

    def _evaluate(self, x1, x2):
        ea1, eb1 = model.residuals(self.kind, self.a_hat, self.b_hat, x1)
        ea2, eb2 = model.residuals(self.kind, self.a_hat, self.b_hat, x2)
        pi = self.pk(x1.z, x2.z)
        return -0.5 * pi * (ea1 * eb2 + ea2 * eb1)

    def _factors(self, data):
        ea, eb = model.residuals(self.kind, self.a_hat, self.b_hat, data)
        ea = np.asarray(ea, dtype=float)
        eb = np.asarray(eb, dtype=float)
        if self.pk.rank == 0:
            zeros = np.zeros(len(data))
            return ea, eb, zeros, zeros, zeros
        phi = self.pk.basis.design(data.z)
        phim = phi @ self.pk.omega_inverse
        diag = np.sum(phim * phi, axis=-1)
        # u_i = sum_j Pi(z_i, z_j) eb_j and v_i = sum_j Pi(z_i, z_j) ea_j, diagonal included
        u = phim @ (phi.T @ eb)
        v = phim @ (phi.T @ ea)
        return ea, eb, diag, u, v

    def u_statistic(self, data):
        """U_n of the kernel in O(n k^2) operations"""
        n = len(data)
        if n < 2:
            raise ArgumentError("A U-statistic of order 2 needs at least two observations")
        ea, eb, diag, u, _ = self._factors(data)
        off_diagonal = float(ea @ u) - float(np.sum(ea * eb * diag))
        return -off_diagonal / (n * (n - 1))

    def row_means(self, data):
        """The averages (n-1)^-1 sum_{j != i} chi2(X_i, X_j), one per observation"""
        n = len(data)
        if n < 2:
            raise ArgumentError("Row means need at least two observations")
        ea, eb, diag, u, v = self._factors(data)
        rows = -0.5 * (ea * (u - diag * eb) + eb * (v - diag * ea))
        return rows / (n - 1)

    def degeneracy_diagnostic(self, data):
        """Empirical degeneracy measure max_i |row mean i|, close to 0 when the fit is close to the truth"""
        return float(np.max(np.abs(self.row_means(data))))


def projection_domain(fit, basis):
    """The fit's integration domain, refined when the truncation basis is finer than it"""
    domain = fit.domain
    if domain.discrete:
        return domain
    level = max(domain.level, getattr(basis, 'level', 0))
    return domain if level == domain.level else MidpointGrid(domain.d, level)


def projection_weight(fit, kind, method='direct'):
    """
    The weight of the projection kernel
    :param method: 'direct' for w_hat, 'plugin' for stilde_1(eta_hat) f_hat
    :return: WeightMeasure
    """
    if method == 'direct':
        return WeightMeasure(fit.w_hat, fit.domain, name='w_hat')
    if method == 'plugin':
        s1 = kind.stilde(fit.params(kind))[0]
        return WeightMeasure(s1 * fit.f_hat, fit.domain, name='s1_hat f_hat')
    raise ConfigurationError("Unknown projection weight '{}', expected one of {}"
                             .format(method, PROJECTION_WEIGHTS), field='projection_weight')


def build_projection_kernel(fit, kind, basis, **kwargs):
    """
    Projection kernel of the truncation basis in L2 of the fitted weight
    :keyword projection_weight: 'direct' (default) or 'plugin'
    :return: ProjectionKernel
    """
    weight = projection_weight(fit, kind, kwargs.get('projection_weight', 'direct'))
    return ProjectionKernel(basis, weight, projection_domain(fit, basis))


def build_second_order_kernel(fit, kind, pk):
    """
    The second order kernel -sym(eps_a(x1) Pi_k(z1, z2) eps_b(x2)) of a fit
    :param fit: NuisanceFit
    :param kind: ModelKind
    :param pk: ProjectionKernel, built in L2(w_hat)
    :return: SecondOrderKernel
    """
    return SecondOrderKernel(kind, fit.a_hat, fit.b_hat, pk)


def estimate_second_order(data_fold, fit, kind, pk, **kwargs):
    """
    Second order corrected estimator on an estimation fold
    :param data_fold: Dataset with at least 2 observations, independent of the fit
    :param fit: NuisanceFit
    :param kind: ModelKind
    :param pk: ProjectionKernel
    :keyword
        chi_first: the first order estimate on the fold, computed when absent
        method: 'fast' (default) for the factorized U-statistic, 'direct' for the O(n^2) double sum
        n_jobs: parallel jobs of the direct evaluation
    :return: chi_second
    """
    chi_first = kwargs.get('chi_first', None)
    if chi_first is None:
        chi_first = first_order.estimate_first_order(data_fold, fit, kind)[1]
    kernel = build_second_order_kernel(fit, kind, pk)
    method = kwargs.get('method', 'fast')
    if method == 'fast':
        correction = kernel.u_statistic(data_fold)
    elif method == 'direct':
        correction = ustat_order2(data_fold, kernel, n_jobs=kwargs.get('n_jobs', 1))
    else:
        raise ConfigurationError("Unknown U-statistic method '{}'".format(method), field='method')
    return chi_first + correction
