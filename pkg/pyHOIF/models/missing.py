"""
Missing data model: X = (YA, A, Z), with Y and A binary and conditionally independent given Z.

a(z) = 1 / P(A=1 | Z=z) (inverse propensity), b(z) = P(Y=1 | Z=z), chi = E Y = int b f.
"""

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import LayoutError
from pyHOIF.models import model


class MissingData(model.ModelKind):
    tag = 'missing'
    name = 'MissingData'

    def check_layout(self, obs):
        super(MissingData, self).check_layout(obs)
        if np.any(np.asarray(obs.y1) * (1 - np.asarray(obs.a)) != 0):
            raise LayoutError("MissingData observations carry y1 = Y*A, which must be 0 when a = 0")

    def statistic(self, obs):
        A = np.asarray(obs.a, dtype=float)
        return model.SVector(-A, np.asarray(obs.y1, dtype=float), np.ones_like(A), np.zeros_like(A))

    def stilde(self, params):
        return -1.0 / params.a, params.b / params.a, functions.ConstantFunction(1.0)

    def chi_integrand(self, params):
        return params.b * params.f

    def outcome_atoms(self, a, b, z, extra=None):
        p = 1.0 / np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return [(0, None, 0, 1.0 - p),
                (0, None, 1, p * (1.0 - b)),
                (1, None, 1, p * b)]

    def check_values(self, a, b, extra=None):
        model._range('a (inverse propensity)', a, 1.0, np.inf)
        model._range('b', b, 0.0, 1.0)
