"""
Evaluable functions on the covariate domain.

A function is called with covariates z and returns one value per point: an integer array of
support indexes with shape (...) gives values with shape (...); a float array of points of
[0,1]^d with shape (..., d) gives values with shape (...).
"""

import operator

import numpy as np


def points_shape(z):
    """Shape of the value array for the covariates z"""
    z = np.asarray(z)
    if np.issubdtype(z.dtype, np.integer):
        return z.shape
    return z.shape[:-1]


class Function(object):
    """Base class of the evaluable functions"""

    def __call__(self, z):
        raise NotImplementedError('Function evaluation not implemented!')

    def values(self, quadrature):
        """Values on the nodes of a quadrature domain"""
        return np.asarray(self(quadrature.nodes), dtype=float)

    def __add__(self, other):
        return Composite(operator.add, self, as_function(other), '+')

    def __radd__(self, other):
        return Composite(operator.add, as_function(other), self, '+')

    def __sub__(self, other):
        return Composite(operator.sub, self, as_function(other), '-')

    def __rsub__(self, other):
        return Composite(operator.sub, as_function(other), self, '-')

    def __mul__(self, other):
        return Composite(operator.mul, self, as_function(other), '*')

    def __rmul__(self, other):
        return Composite(operator.mul, as_function(other), self, '*')

    def __truediv__(self, other):
        return Composite(operator.truediv, self, as_function(other), '/')

    def __rtruediv__(self, other):
        return Composite(operator.truediv, as_function(other), self, '/')

    def __neg__(self):
        return Composite(operator.mul, ConstantFunction(-1.0), self, '*')


class ConstantFunction(Function):
    def __init__(self, value):
        self.value = float(value)

    def __call__(self, z):
        return np.full(points_shape(z), self.value)

    def __repr__(self):
        return "Constant({})".format(self.value)


class AtomFunction(Function):
    """Function on a discrete support, given by its value on each atom"""
    def __init__(self, values):
        self.table = np.array(values, dtype=float).reshape(-1)
        self.table.setflags(write=False)

    def __call__(self, z):
        return self.table[np.asarray(z, dtype=int)]

    def __len__(self):
        return len(self.table)

    def __repr__(self):
        return "AtomFunction({})".format(np.array2string(self.table, precision=4))


class PiecewiseConstant(Function):
    """Function constant on the cells of a partition (see pyHOIF.basis.partitioner)"""
    def __init__(self, partition, values):
        self.partition = partition
        self.table = np.array(values, dtype=float).reshape(-1)
        if len(self.table) != partition.ncells:
            raise ValueError("One value per partition cell is required")
        self.table.setflags(write=False)

    def __call__(self, z):
        return self.table[self.partition.cell_index(z)]

    def __repr__(self):
        return "PiecewiseConstant({}, {})".format(self.partition, np.array2string(self.table, precision=4))


class LambdaFunction(Function):
    """Façade for a vectorized python callable"""
    def __init__(self, func, name=None):
        self.func = func
        self.name = name if name is not None else getattr(func, '__name__', 'lambda')

    def __call__(self, z):
        return np.asarray(self.func(z), dtype=float)

    def __repr__(self):
        return "LambdaFunction({})".format(self.name)


class Composite(Function):
    def __init__(self, op, left, right, symbol='?'):
        self.op = op
        self.left = left
        self.right = right
        self.symbol = symbol

    def __call__(self, z):
        return self.op(self.left(z), self.right(z))

    def __repr__(self):
        return "({} {} {})".format(self.left, self.symbol, self.right)


def as_function(obj):
    """
    Coerce numbers, arrays and callables into Function objects
    :param obj: a Function, a number (constant), a 1D array (values on discrete atoms) or a callable
    :return: Function
    """
    if isinstance(obj, Function):
        return obj
    if np.isscalar(obj):
        return ConstantFunction(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return AtomFunction(obj)
    if callable(obj):
        return LambdaFunction(obj)
    raise TypeError("Cannot interpret {!r} as an evaluable function".format(obj))
