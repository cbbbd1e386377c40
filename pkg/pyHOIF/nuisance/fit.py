"""
The initial estimator of the nuisance parameters: (a_hat, b_hat, f_hat) and the weight w_hat
"""

import logging

from pyHOIF.basis import partitioner
from pyHOIF.common import functions
from pyHOIF.common.Quadrature import DiscreteSupport, MidpointGrid
from pyHOIF.models import model
from pyHOIF.nuisance import density, series


logger = logging.getLogger(__name__)


class NuisanceFit(object):
    """
    Fitted (or fixed) nuisance functions
    :param a_hat: evaluable estimate of a
    :param b_hat: evaluable estimate of b
    :param f_hat: evaluable estimate of the covariate density
    :param w_hat: evaluable estimate of the weight stilde_1 f
    :param domain: integration domain of the covariate
    :param meta: dict with the fit bookkeeping (basis sizes, fold, clipping events)
    """
    def __init__(self, a_hat, b_hat, f_hat, w_hat, domain=None, meta=None):
        self.a_hat = functions.as_function(a_hat)
        self.b_hat = functions.as_function(b_hat)
        self.f_hat = functions.as_function(f_hat)
        self.w_hat = functions.as_function(w_hat)
        self.domain = domain
        self.meta = dict(meta) if meta is not None else {}

    # NuisanceParams interface, so a fit evaluates like a parameter triple
    @property
    def a(self):
        return self.a_hat

    @property
    def b(self):
        return self.b_hat

    @property
    def f(self):
        return self.f_hat

    def params(self, kind):
        return model.NuisanceParams(self.a_hat, self.b_hat, self.f_hat, kind=kind, domain=self.domain)

    @staticmethod
    def from_params(params, kind, **kwargs):
        """
        The fit equal to a parameter triple, with the exact weight stilde_1 f (oracle mode)
        """
        w = kind.stilde(params)[0] * params.f
        return NuisanceFit(params.a, params.b, params.f, w, domain=kwargs.get('domain', params.domain),
                           meta=kwargs.get('meta', {'mode': 'truth'}))

    def __repr__(self):
        return "NuisanceFit(a_hat={}, b_hat={}, f_hat={}, w_hat={})".format(self.a_hat, self.b_hat,
                                                                              self.f_hat, self.w_hat)


def integration_domain(partition, basis=None):
    """
    Integration domain on which histograms on the partition, and the basis functions, are
    integrated exactly
    """
    if isinstance(partition, partitioner.AtomPartition):
        return DiscreteSupport(partition.J)
    level = max(partition.level, getattr(basis, 'level', 0))
    return MidpointGrid(partition.d, level)


def fit_nuisances(kind, data, basis, **kwargs):
    """
    Fit the nuisance parameters of a model on a sample
    :param kind: ModelKind
    :param data: Dataset
    :param basis: BasisSystem of the series regressions
    :keyword
        partition: Partition of the histograms, default basis.partition
        clip: propensity clipping level of the missing data model, default 0.05
        fold: fold identifier kept in the metadata
    :return: NuisanceFit
    """
    partition = kwargs.get('partition', None)
    if partition is None:
        partition = basis.partition
    clip = kwargs.get('clip', series.DEFAULT_CLIP)
    kind.check_layout(data)
    meta = {'mode': 'fitted', 'basis': str(basis), 'k_nuisance': basis.size, 'n_fit': len(data),
            'fold': kwargs.get('fold', None), 'clip_events': 0}

    if kind.tag == 'missing':
        a_hat = series.fit_propensity_and_a(data, basis, clip=clip)
        meta['clip_events'] = a_hat.clip_events
        b_hat = series.fit_regression_series(data, 'y1', basis, restriction=data.a == 1)
    elif kind.tag == 'covariance':
        a_hat = series.fit_regression_series(data, 'a', basis)
        b_hat = series.fit_regression_series(data, 'y1', basis)
    else:
        # transformed outcomes: E(S3|Z) = a and E(S2|Z) = b under the known propensity
        s = model.statistic_S(kind, data)
        a_hat = series.fit_regression_series(data, lambda d: s.s3, basis)
        b_hat = series.fit_regression_series(data, lambda d: s.s2, basis)

    f_hat = density.fit_density_histogram(data.z, partition)
    w_hat = density.fit_weight(kind, data, partition)
    logger.debug("Fitted nuisances of %s on %d observations with %s", kind, len(data), basis)
    return NuisanceFit(a_hat, b_hat, f_hat, w_hat, domain=integration_domain(partition, basis), meta=meta)
