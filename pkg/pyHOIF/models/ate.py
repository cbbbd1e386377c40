"""
Average treatment effect model: X = (Y1, Y2, A, Z) with binary outcomes and treatment.

a(z) = a1(z) and b(z) = a2(z) are the treatment effects E(Yj|A=1,Z) - E(Yj|A=0,Z) of the two
outcomes and chi = int a1 a2 f. The propensity pi(z) = P(A=1|Z=z) is a known function with
values in (0, 1).

With r = (A - pi(Z)) / (pi(Z)(1 - pi(Z))) the statistic is
S1 = 1 - 2 A r, S2 = Y2 r, S3 = Y1 r, S4 = C(Z) r, for a free function C (default C = 0).
"""

import numpy as np

from pyHOIF.common import functions
from pyHOIF.common.Exceptions import ParameterError
from pyHOIF.models import model


class ATE(model.ModelKind):
    """
    :param propensity: known propensity function pi(z), strictly inside (0, 1)
    :param C: the free function of S4, None for C = 0
    """
    tag = 'ate'
    name = 'ATE'
    has_y2 = True

    def __init__(self, propensity=0.5, C=None):
        self.propensity = functions.as_function(propensity)
        self.C = None if C is None else functions.as_function(C)

    def _ratio(self, obs):
        pi = self.propensity(obs.z)
        if np.any(pi <= 0) or np.any(pi >= 1):
            raise ParameterError("The propensity must lie strictly inside (0, 1)")
        return (np.asarray(obs.a, dtype=float) - pi) / (pi * (1.0 - pi))

    def statistic(self, obs):
        A = np.asarray(obs.a, dtype=float)
        r = self._ratio(obs)
        s4 = np.zeros_like(r) if self.C is None else self.C(obs.z) * r
        return model.SVector(1.0 - 2.0 * A * r, np.asarray(obs.y2, dtype=float) * r,
                             np.asarray(obs.y1, dtype=float) * r, s4)

    def stilde(self, params):
        return functions.ConstantFunction(-1.0), params.b, params.a

    def chi_integrand(self, params):
        return params.a * params.b * params.f

    def control_means(self, a, b, extra=None):
        """E(Y1|A=0,Z) and E(Y2|A=0,Z); default (1 - a_j) / 2, which keeps both arms inside [0, 1]"""
        if extra is None:
            return (1.0 - a) / 2.0, (1.0 - b) / 2.0
        return np.asarray(extra[0], dtype=float), np.asarray(extra[1], dtype=float)

    def outcome_atoms(self, a, b, z, extra=None):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        pi = self.propensity(z)
        m1, m2 = self.control_means(a, b, extra)
        atoms = []
        for treat, ptreat, q1, q2 in [(0, 1.0 - pi, m1, m2), (1, pi, m1 + a, m2 + b)]:
            for y1 in (0, 1):
                for y2 in (0, 1):
                    p1 = q1 if y1 == 1 else 1.0 - q1
                    p2 = q2 if y2 == 1 else 1.0 - q2
                    atoms.append((y1, y2, treat, ptreat * p1 * p2))
        return atoms

    def check_values(self, a, b, extra=None):
        model._range('a (first treatment effect)', a, -1.0, 1.0)
        model._range('b (second treatment effect)', b, -1.0, 1.0)
        if extra is not None:
            m1, m2 = self.control_means(np.asarray(a), np.asarray(b), extra)
            for name, m, eff in [('Y1', m1, a), ('Y2', m2, b)]:
                model._range('E({}|A=0,Z)'.format(name), m, 0.0, 1.0)
                model._range('E({}|A=1,Z)'.format(name), m + np.asarray(eff), 0.0, 1.0)

    def check_params(self, params, domain=None):
        super(ATE, self).check_params(params, domain)
        domain = domain if domain is not None else params.domain
        if domain is not None:
            pi = self.propensity.values(domain)
            if np.any(pi <= 0) or np.any(pi >= 1):
                raise ParameterError("The propensity must lie strictly inside (0, 1)")

    def __repr__(self):
        return "ATE(propensity={})".format(self.propensity)
