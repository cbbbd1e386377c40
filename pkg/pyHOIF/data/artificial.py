"""
Facilities to generate synthetic samples of the structured models
"""

import math

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import ParameterError
from pyHOIF.common.Observation import Dataset
from pyHOIF.common.Quadrature import MidpointGrid
from pyHOIF.models import discrete
from pyHOIF.models.model import NuisanceParams


def _choose(rng, probs):
    """Inverse CDF draw of one column index per row of a probability matrix"""
    probs = np.asarray(probs, dtype=float)
    cdf = np.cumsum(probs, axis=-1)
    u = rng.random(probs.shape[0])
    idx = np.sum(cdf <= u[:, None], axis=-1)
    return np.minimum(idx, probs.shape[-1] - 1)


def _draw_cells(rng, mass, n):
    """Inverse CDF draw of n indices from one vector of masses"""
    cdf = np.cumsum(np.asarray(mass, dtype=float))
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(n), side='right')
    return np.minimum(idx, len(cdf) - 1)


def _outcomes(rng, kind, a, b, z, extra):
    atoms = kind.outcome_atoms(a, b, z, extra)
    n = len(a)
    probs = np.stack([np.broadcast_to(np.asarray(p, dtype=float), (n,)) for _, _, _, p in atoms], axis=-1)
    if np.any(probs < -1e-12) or np.any(probs > 1 + 1e-12) or np.any(np.abs(probs.sum(axis=-1) - 1) > 1e-9):
        raise ParameterError("The parameters of the {} model do not define valid probabilities".format(kind))
    idx = _choose(rng, np.clip(probs, 0.0, 1.0))
    table = np.array([(y1, 0 if y2 is None else y2, treat) for y1, y2, treat, _ in atoms], dtype=float)
    y2 = table[idx, 1] if kind.has_y2 else None
    return table[idx, 0], y2, table[idx, 2]


def _sample_covariates(rng, params, n):
    domain = params.domain
    if domain is None or domain.discrete:
        raise ParameterError("Continuous truths need a midpoint grid domain to sample the covariates")
    mass = params.f.values(domain) * domain.weights
    if np.any(mass < 0):
        raise ParameterError("The density f must be nonnegative")
    cells = _draw_cells(rng, mass, n)
    half = 0.5 / 2 ** domain.level
    jitter = rng.uniform(-half, half, size=(n, domain.d))
    return np.clip(domain.nodes[cells] + jitter, 0.0, 1.0)


def generate_dataset(truth, kind, n, seed=None, c=None):
    """
    I.i.d. sample of a structured model
    :param truth: DiscreteModel, or NuisanceParams whose domain is a MidpointGrid of [0,1]^d
    :param kind: ModelKind
    :param n: sample size
    :param seed: anything accepted by numpy.random.default_rng
    :param c: parameters completing the observation law (see DiscreteModel), default the model's
    :return: Dataset
    """
    rng = np.random.default_rng(seed)
    if isinstance(truth, discrete.DiscreteModel):
        c = truth.c if c is None else np.asarray(c, dtype=float)
        z = _draw_cells(rng, truth.f, n) if n > 0 else np.zeros(0, dtype=int)
        a = truth.a[z]
        b = truth.b[z]
        extra = None if c is None else c[..., z]
    else:
        d = truth.domain.d
        z = _sample_covariates(rng, truth, n) if n > 0 else np.zeros((0, d))
        a = truth.a(z)
        b = truth.b(z)
        extra = None if c is None else functions.as_function(c)(z)
    if n == 0:
        return Dataset(np.zeros(0), np.zeros(0), z, y2=np.zeros(0) if kind.has_y2 else None)
    y1, y2, treat = _outcomes(rng, kind, a, b, z, extra)
    return Dataset(y1, treat, z, y2=y2)


class LacunaryCosine(functions.Function):
    """
    Holder type function on [0,1]^d

        g(z) = center + amplitude * sum_j 2^(-j alpha) cos(2 pi 2^j (z_1 + ... + z_d)) / sum_j 2^(-j alpha)

    for j = 1..levels. It takes values in [center - amplitude, center + amplitude] and the
    decay of its coefficients makes it alpha-smooth at the scales it resolves.
    """
    def __init__(self, alpha, center=0.5, amplitude=0.3, levels=6):
        if alpha <= 0:
            raise ParameterError("Smoothness exponents must be positive")
        self.alpha = alpha
        self.center = center
        self.amplitude = amplitude
        self.levels = levels
        self.coefficients = np.array([2.0 ** (-j * alpha) for j in range(1, levels + 1)])
        self.coefficients /= self.coefficients.sum()

    def __call__(self, z):
        s = np.sum(np.asarray(z, dtype=float), axis=-1)
        freqs = 2.0 ** np.arange(1, self.levels + 1)
        series = np.cos(2 * math.pi * s[..., None] * freqs) @ self.coefficients
        return self.center + self.amplitude * series

    def __repr__(self):
        return "LacunaryCosine(alpha={}, center={}, amplitude={})".format(self.alpha, self.center, self.amplitude)


def continuous_truth(kind, alpha=1.0, beta=1.0, gamma=1.0, d=1, **kwargs):
    """
    Smooth true parameters on [0,1]^d for the three model kinds
    :param kind: ModelKind
    :param alpha: smoothness of a
    :param beta: smoothness of b
    :param gamma: smoothness of the covariate density (and so of stilde_1 f, up to the smoothness of a)
    :param d: covariate dimension
    :keyword
        levels: number of frequencies of the series, default 6
        quadrature_level: resolution of the midpoint grid used to integrate and sample, default max(levels + 1, 12 // d)
    :return: NuisanceParams
    """
    levels = kwargs.get('levels', 6)
    quadrature_level = kwargs.get('quadrature_level', max(levels + 1, 12 // d))
    if quadrature_level <= levels:
        raise ParameterError("The quadrature level must exceed the number of frequencies of the truth")
    f = LacunaryCosine(gamma, center=1.0, amplitude=0.5, levels=levels)
    if kind.tag == 'missing':
        p = LacunaryCosine(alpha, center=0.6, amplitude=0.25, levels=levels)
        a = 1.0 / p
        b = LacunaryCosine(beta, center=0.5, amplitude=0.3, levels=levels)
    elif kind.tag == 'covariance':
        a = LacunaryCosine(alpha, center=0.5, amplitude=0.3, levels=levels)
        b = LacunaryCosine(beta, center=0.5, amplitude=0.3, levels=levels)
    else:
        a = LacunaryCosine(alpha, center=0.2, amplitude=0.3, levels=levels)
        b = LacunaryCosine(beta, center=0.2, amplitude=0.3, levels=levels)
    params = NuisanceParams(a, b, f, kind=kind, domain=MidpointGrid(d, quadrature_level))
    kind.check_params(params)
    return params


def random_discrete_model(kind, J, rng):
    """
    Random discrete model with J atoms, parameters drawn inside the range of the model kind
    :param kind: ModelKind
    :param J: number of covariate atoms
    :param rng: numpy Generator
    :return: DiscreteModel
    """
    f = rng.dirichlet(np.ones(J))
    f = np.maximum(f, 1e-3)
    f /= f.sum()
    if kind.tag == 'missing':
        a = 1.0 / rng.uniform(0.2, 0.9, J)
        b = rng.uniform(0.05, 0.95, J)
    elif kind.tag == 'covariance':
        a = rng.uniform(0.05, 0.95, J)
        b = rng.uniform(0.05, 0.95, J)
    else:
        a = rng.uniform(-0.5, 0.5, J)
        b = rng.uniform(-0.5, 0.5, J)
    return discrete.DiscreteModel(f, a, b, kind)


def random_fixed_errors(dmodel, rng, scale=0.2):
    """Random errors (a_hat - a, b_hat - b) on the atoms of a discrete model"""
    return rng.normal(0.0, scale, dmodel.J), rng.normal(0.0, scale, dmodel.J)
