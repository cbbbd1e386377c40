"""
Discrete covariate models: the exact oracle of the library.

With finitely many covariate atoms the observation itself has finite support (at most 3J atoms
for missing data, 4J for the covariance model and 8J for the ATE model), so every moment is an
exact finite sum.
"""

import inspect
import math

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import ParameterError
from pyHOIF.common.Observation import Dataset
from pyHOIF.common.Quadrature import DiscreteSupport
from pyHOIF.models import model


class DiscreteModel(object):
    """
    Finite support covariate model
    :param f: probability vector of the J covariate atoms
    :param a: values of the parameter a on the atoms
    :param b: values of the parameter b on the atoms
    :param kind: ModelKind
    :param support: coordinates (or labels) of the atoms, default 0..J-1
    :param c: parameters completing the observation law, only used to enumerate and sample it:
              the treatment effect function for the covariance model (length J), the pair of
              control arm means for the ATE model (shape (2, J)); None for the defaults
    """
    def __init__(self, f, a, b, kind, support=None, c=None):
        f = np.array(f, dtype=float).reshape(-1)
        a = np.array(a, dtype=float).reshape(-1)
        b = np.array(b, dtype=float).reshape(-1)
        self.J = len(f)
        if len(a) != self.J or len(b) != self.J:
            raise ParameterError("f, a and b must have one value per atom")
        if np.any(f < 0) or abs(math.fsum(f) - 1.0) > 1e-10:
            raise ParameterError("f must be a probability vector")
        self.kind = kind
        self.c = None if c is None else np.array(c, dtype=float)
        kind.check_values(a, b, self.c)
        self.support = list(range(self.J)) if support is None else list(support)
        self.domain = DiscreteSupport(self.J)
        self.params = model.NuisanceParams(functions.AtomFunction(a), functions.AtomFunction(b),
                                           functions.AtomFunction(f), kind=kind, domain=self.domain)
        kind.check_params(self.params)
        self._build_support()

    @property
    def f(self):
        return self.params.f.table

    @property
    def a(self):
        return self.params.a.table

    @property
    def b(self):
        return self.params.b.table

    def _build_support(self):
        z = np.arange(self.J)
        y1, y2, aa, zz, cond = [], [], [], [], []
        for _y1, _y2, _a, prob in self.kind.outcome_atoms(self.a, self.b, z, self.c):
            prob = np.broadcast_to(np.asarray(prob, dtype=float), (self.J,))
            for j in range(self.J):
                if prob[j] > 0:
                    y1.append(_y1)
                    y2.append(_y2)
                    aa.append(_a)
                    zz.append(j)
                    cond.append(prob[j])
        order = np.lexsort((aa, y2 if self.kind.has_y2 else y1, y1, zz))
        y2_arr = np.asarray(y2, dtype=float)[order] if self.kind.has_y2 else None
        self.atoms = Dataset(np.asarray(y1)[order], np.asarray(aa)[order], np.asarray(zz, dtype=int)[order],
                             y2=y2_arr)
        self.conditional_probs = np.asarray(cond)[order]
        self.probs = self.conditional_probs * self.f[self.atoms.z]
        self.conditional_probs.setflags(write=False)
        self.probs.setflags(write=False)

    def weight(self):
        """The weight stilde_1 f of the second order bias, as atom weights"""
        s1 = self.kind.stilde(self.params)[0]
        return functions.AtomFunction(s1(self.domain.nodes) * self.f)

    def chi(self):
        return model.functional_chi(self.params)

    def __len__(self):
        return self.J

    def __repr__(self):
        return "DiscreteModel({}, J={})".format(self.kind.name, self.J)


def _values(g, args, size):
    return np.broadcast_to(np.asarray(g(*args), dtype=float), (size,))


def _arity(g):
    order = getattr(g, 'order', None)
    if order is not None:
        return order
    try:
        params = [p for p in inspect.signature(g).parameters.values()
                  if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD) and p.default is p.empty]
    except (TypeError, ValueError):
        return 1
    return 2 if len(params) >= 2 else 1


def exact_expectation(model, g, order=None):
    """
    Exact expectation of a function of one observation, or of two independent observations,
    under a discrete model
    :param model: DiscreteModel
    :param g: vectorized function of one or two observations
    :param order: 1 or 2, inferred from g when None
    :return: sum g(x) p(x), or the double sum of g(x1, x2) p(x1) p(x2)
    """
    order = order if order is not None else _arity(g)
    atoms, probs = model.atoms, model.probs
    m = len(probs)
    if order == 1:
        return math.fsum(_values(g, (atoms,), m) * probs)
    total = [probs[i] * math.fsum(_values(g, (atoms[i], atoms), m) * probs) for i in range(m)]
    return math.fsum(total)


def conditional_expectation(model, g):
    """
    Exact conditional expectation E[g(X) | Z = z_j] on every covariate atom
    :param model: DiscreteModel
    :param g: vectorized function of one observation
    :return: array with J values
    """
    vals = _values(g, (model.atoms,), len(model.probs)) * model.conditional_probs
    out = np.zeros(model.J)
    for j in range(model.J):
        out[j] = math.fsum(vals[model.atoms.z == j])
    return out
