"""
Least squares series regression on a basis system
"""

import logging

import numpy as np
from scipy import linalg

from pyHOIF.basis.basis import SeriesFunction
from pyHOIF.common import functions
from pyHOIF.common.Exceptions import CollinearBasisError, DataError


logger = logging.getLogger(__name__)

MAX_CONDITION = 1e10
DEFAULT_CLIP = 0.05


def _target(data, target):
    if callable(target):
        return np.asarray(target(data), dtype=float).reshape(-1)
    values = getattr(data, target)
    if values is None:
        raise DataError("The sample has no field '{}'".format(target))
    return np.asarray(values, dtype=float)


def _mask(data, restriction):
    if restriction is None:
        return np.ones(len(data), dtype=bool)
    if callable(restriction):
        restriction = restriction(data)
    return np.asarray(restriction, dtype=bool)


def fit_regression_series(data, target, basis, restriction=None, **kwargs):
    """
    Least squares projection of a target on span(basis), using an optionally restricted subsample
    :param data: Dataset
    :param target: name of an observation field ('y1', 'y2', 'a') or a function of the Dataset
    :param basis: BasisSystem
    :param restriction: boolean mask, or a function of the Dataset returning one
    :keyword max_condition: largest admissible condition number of the design Gram matrix
    :return: SeriesFunction z -> phi(z)' c
    """
    max_condition = kwargs.get('max_condition', MAX_CONDITION)
    y = _target(data, target)
    mask = _mask(data, restriction)
    if not np.any(mask):
        raise DataError("Empty subsample for the regression of {}".format(target))
    if basis.size == 0:
        return SeriesFunction(basis, np.zeros(0))

    phi = basis.design(data.z[mask])
    G = phi.T @ phi
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > max_condition:
        logger.debug("Collinear design for %s: condition number %g on %d points", basis, cond, int(mask.sum()))
        raise CollinearBasisError("Design matrix of {} is singular on the subsample (condition number {:g})"
                                  .format(basis, cond), condition=cond)
    coefficients = linalg.solve(G, phi.T @ y[mask], assume_a='pos')
    return SeriesFunction(basis, coefficients)


class InversePropensity(functions.Function):
    """
    z -> 1 / clip(p_hat(z)), with the fitted propensity clipped into [clip, 1 - clip]
    """
    def __init__(self, p_hat, clip=DEFAULT_CLIP, clip_events=0):
        self.p_hat = p_hat
        self.clip = clip
        self.clip_events = clip_events

    def propensity(self, z):
        return np.clip(self.p_hat(z), self.clip, 1.0 - self.clip)

    def __call__(self, z):
        return 1.0 / self.propensity(z)

    def __repr__(self):
        return "InversePropensity({}, clip={})".format(self.p_hat, self.clip)


def fit_propensity_and_a(data, basis, **kwargs):
    """
    Missing data parameter a = 1 / P(A=1|Z) from a series regression of A
    :param data: Dataset
    :param basis: BasisSystem
    :keyword clip: the fitted propensity is clipped into [clip, 1 - clip], default 0.05
    :return: InversePropensity, whose clip_events counts the sample points where the fit was clipped
    """
    clip = kwargs.get('clip', DEFAULT_CLIP)
    p_hat = fit_regression_series(data, 'a', basis)
    fitted = p_hat(data.z)
    events = int(np.sum((fitted < clip) | (fitted > 1.0 - clip)))
    if events > 0:
        logger.info("Propensity fit clipped into [%g, %g] at %d of %d points", clip, 1.0 - clip, events, len(data))
    return InversePropensity(p_hat, clip, events)
