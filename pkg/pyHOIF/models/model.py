"""
Structured semiparametric models whose first order influence function has the form

    chi1(x) = a(z) b(z) S1(x) + a(z) S2(x) + b(z) S3(x) + S4(x) - chi

for a known statistic S = (S1, S2, S3, S4). Each model kind (missing data, covariance,
average treatment effect) defines S, the conditional means stilde_i(z) = E(S_i | Z=z), the
target functional chi and the conditional law of the observation given the covariate.
"""

import collections

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import LayoutError, ParameterError


SVector = collections.namedtuple('SVector', ['s1', 's2', 's3', 's4'])
SVector.__doc__ = "Values of the statistic S = (S1, S2, S3, S4) at one observation (or a Dataset, column-wise)"


class NuisanceParams(object):
    """
    The nuisance triple (a, b, f) of a structured model. The complementary parameter c is not
    part of it, as it plays no role in the functional or its influence function.
    :param a: evaluable function (meaning depends on the model kind)
    :param b: evaluable function (meaning depends on the model kind)
    :param f: density of Z with respect to the dominating measure
    :param kind: ModelKind
    :param domain: Quadrature used to integrate over the covariate domain
    """
    def __init__(self, a, b, f, kind=None, domain=None):
        self.a = functions.as_function(a)
        self.b = functions.as_function(b)
        self.f = functions.as_function(f)
        self.kind = kind
        self.domain = domain

    def __repr__(self):
        return "NuisanceParams(a={}, b={}, f={})".format(self.a, self.b, self.f)


class ModelKind(object):
    """
    Model class of a structured semiparametric model
    """
    tag = None
    name = ""
    has_y2 = False

    def statistic(self, obs):
        """
        The statistic S at an observation
        :param obs: Observation or Dataset
        :return: SVector
        """
        raise NotImplementedError('Statistic not implemented for this model!')

    def stilde(self, params):
        """
        Closed form conditional means of S1, S2, S3 given Z
        :param params: NuisanceParams
        :return: tuple of three evaluable functions
        """
        raise NotImplementedError('Conditional means not implemented for this model!')

    def chi_integrand(self, params):
        """The function integrated against the dominating measure to obtain chi"""
        raise NotImplementedError('Functional not implemented for this model!')

    def outcome_atoms(self, a, b, z, extra=None):
        """
        Conditional law of (Y1, Y2, A) given Z=z, vectorized over z.
        :param a: values of a at z
        :param b: values of b at z
        :param z: the covariates
        :param extra: values of the parameters completing the law (c), None for defaults
        :return: list of tuples (y1, y2, a, probability array)
        """
        raise NotImplementedError('Observation law not implemented for this model!')

    def check_values(self, a, b, extra=None):
        """Raise ParameterError if the values of (a, b) are outside the range of the model"""
        pass

    def check_layout(self, obs):
        if self.has_y2 and obs.y2 is None:
            raise LayoutError("{} observations require the outcome y2".format(self.name))
        if not self.has_y2 and obs.y2 is not None:
            raise LayoutError("{} observations must not carry the outcome y2".format(self.name))

    def check_params(self, params, domain=None):
        """
        Check the range constraints of the nuisance parameters on a domain (the discrete support
        or a validation grid)
        """
        domain = domain if domain is not None else params.domain
        if domain is None:
            return
        self.check_values(params.a.values(domain), params.b.values(domain))
        f = params.f.values(domain)
        if np.any(f < 0):
            raise ParameterError("The density f must be nonnegative")
        total = domain.integrate(f)
        if abs(total - 1.0) > (1e-10 if domain.discrete else 1e-6):
            raise ParameterError("The density f must integrate to 1, got {}".format(total))

    def __str__(self):
        return self.name

    def __repr__(self):
        return "{}()".format(self.__class__.__name__)


def _range(name, values, lower, upper, tol=1e-12):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values < lower - tol) or np.any(values > upper + tol):
        raise ParameterError("Parameter {} must lie in [{}, {}]".format(name, lower, upper))


def statistic_S(kind, obs):
    """
    The statistic S = (S1, S2, S3, S4) of the model at an observation
    :param kind: ModelKind
    :param obs: Observation or Dataset
    :return: SVector
    """
    kind.check_layout(obs)
    return kind.statistic(obs)


def stilde(kind, params):
    """
    Conditional means stilde_i(z) = E(S_i | Z=z), i = 1, 2, 3
    :param kind: ModelKind
    :param params: NuisanceParams
    :return: tuple of evaluable functions (s1, s2, s3)
    """
    return kind.stilde(params)


def functional_chi(params, kind=None, domain=None):
    """
    Value of the target functional
    :param params: NuisanceParams or DiscreteModel
    :param kind: ModelKind, defaults to the one attached to params
    :param domain: Quadrature (the discrete support, or a midpoint grid for continuous covariates)
    :return: float (an exact finite sum on discrete supports)
    """
    if hasattr(params, 'params'):
        params = params.params
    kind = kind if kind is not None else params.kind
    domain = domain if domain is not None else params.domain
    if kind is None or domain is None:
        raise ValueError("functional_chi requires a model kind and an integration domain")
    return domain.integrate(kind.chi_integrand(params))


def first_order_if(kind, params, chi, obs):
    """
    First order influence function a b S1 + a S2 + b S3 + S4 - chi
    :param kind: ModelKind
    :param params: NuisanceParams (or any object with evaluable attributes a and b)
    :param chi: value of the functional subtracted to center the function
    :param obs: Observation or Dataset
    :return: float or array with one value per observation
    """
    s = statistic_S(kind, obs)
    a = params.a(obs.z)
    b = params.b(obs.z)
    return a * b * s.s1 + a * s.s2 + b * s.s3 + s.s4 - chi


def residuals(kind, a_hat, b_hat, obs):
    """
    The residual functions of a pair (a_hat, b_hat):
    eps_a = S1 a_hat + S3 and eps_b = S1 b_hat + S2, whose conditional means given Z are
    stilde_1 (a_hat - a) and stilde_1 (b_hat - b).
    :return: tuple (eps_a, eps_b)
    """
    s = statistic_S(kind, obs)
    return s.s1 * a_hat(obs.z) + s.s3, s.s1 * b_hat(obs.z) + s.s2
