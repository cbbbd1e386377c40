"""
Covariance model: X = (Y, A, Z) with Y and A binary.

a(z) = E(A | Z=z), b(z) = E(Y | Z=z), chi = E[E(Y|Z) E(A|Z)] = int a b f.

The statistic is S1 = -1, S2 = Y, S3 = A, S4 = 0. This is the assignment under which the
influence function is centered and stilde_1 b + stilde_2 = 0 = stilde_1 a + stilde_3 hold; the
roles of Y and A in S2 and S3 are the reverse of the assignment usually quoted for this model.

The joint law of (Y, A) given Z needs the treatment effect function
c(z) = E(Y|A=1,Z=z) - E(Y|A=0,Z=z), as P(Y=1|A,Z) = c(Z)(A - a(Z)) + b(Z). It is only used
to generate data (default c = 0, conditional independence).
"""

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import ParameterError
from pyHOIF.models import model


class Covariance(model.ModelKind):
    tag = 'covariance'
    name = 'Covariance'

    def statistic(self, obs):
        A = np.asarray(obs.a, dtype=float)
        return model.SVector(-np.ones_like(A), np.asarray(obs.y1, dtype=float), A, np.zeros_like(A))

    def stilde(self, params):
        return functions.ConstantFunction(-1.0), params.b, params.a

    def chi_integrand(self, params):
        return params.a * params.b * params.f

    def _conditional_y(self, a, b, extra):
        c = 0.0 if extra is None else np.asarray(extra, dtype=float)
        return b + c * (1.0 - a), b - c * a

    def outcome_atoms(self, a, b, z, extra=None):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        py1, py0 = self._conditional_y(a, b, extra)
        return [(0, None, 0, (1.0 - a) * (1.0 - py0)),
                (1, None, 0, (1.0 - a) * py0),
                (0, None, 1, a * (1.0 - py1)),
                (1, None, 1, a * py1)]

    def check_values(self, a, b, extra=None):
        model._range('a', a, 0.0, 1.0)
        model._range('b', b, 0.0, 1.0)
        if extra is not None:
            py1, py0 = self._conditional_y(np.asarray(a, dtype=float), np.asarray(b, dtype=float), extra)
            try:
                model._range('P(Y=1|A=1,Z)', py1, 0.0, 1.0)
                model._range('P(Y=1|A=0,Z)', py0, 0.0, 1.0)
            except ParameterError as ex:
                raise ParameterError("Treatment effect function c incompatible with (a, b): " + str(ex))
