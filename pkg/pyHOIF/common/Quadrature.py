"""
Integration domains: a discrete support with the counting measure, or the unit cube
[0,1]^d with midpoint weights on a tensor grid.
"""

import math

import numpy as np


class Quadrature(object):
    """
    Nodes and weights of an integration rule. The integral of g is sum(g(node) * weight).
    """
    def __init__(self, nodes, weights, **kwargs):
        self.nodes = np.asarray(nodes)
        self.weights = np.asarray(weights, dtype=float)
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)
        self.name = kwargs.get('name', '')

    @property
    def discrete(self):
        return self.nodes.ndim == 1

    def __len__(self):
        return len(self.weights)

    def integrate(self, values):
        """
        Integral of a function given by its values on the nodes (or by the function itself)
        :param values: array of values on the nodes, or an evaluable function
        :return: float
        """
        if callable(values):
            values = values(self.nodes)
        return math.fsum(np.asarray(values, dtype=float) * self.weights)

    def __repr__(self):
        return "{}({} nodes)".format(self.name or self.__class__.__name__, len(self))


class DiscreteSupport(Quadrature):
    """The atoms 0..J-1 of a discrete covariate, with the counting measure"""
    def __init__(self, J, **kwargs):
        super(DiscreteSupport, self).__init__(np.arange(J, dtype=int), np.ones(J),
                                              name=kwargs.get('name', 'DiscreteSupport'))
        self.J = J


class MidpointGrid(Quadrature):
    """
    Midpoints of the 2^(level*d) cells of the dyadic grid of [0,1]^d, each weighted by its volume.
    The rule is exact for functions constant on the cells of dyadic partitions with resolution up to level.
    """
    def __init__(self, d, level, **kwargs):
        m = 2 ** level
        axis = (np.arange(m) + 0.5) / m
        mesh = np.meshgrid(*([axis] * d), indexing='ij')
        nodes = np.stack([g.reshape(-1) for g in mesh], axis=1)
        super(MidpointGrid, self).__init__(nodes, np.full(m ** d, 1.0 / m ** d),
                                           name=kwargs.get('name', 'MidpointGrid'))
        self.d = d
        self.level = level
