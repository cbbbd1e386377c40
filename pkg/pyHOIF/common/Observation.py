"""
Observations and samples.

An observation is the record X = (Y1, [Y2], A, Z). The covariate Z is either a point of
[0,1]^d (float coordinates) or the index of an atom of a discrete support (integer).
A Dataset keeps the same fields as columnar numpy arrays, so every function written for a
single Observation also evaluates, vectorized, on a whole Dataset.
"""

import numpy as np
import pandas as pd

from pyHOIF.common.Exceptions import DataError


def _freeze(arr):
    arr.setflags(write=False)
    return arr


class Observation(object):
    """
    One sampled record
    :param y1: binary outcome (in the missing data model, the product Y*A)
    :param y2: second binary outcome, only present in the ATE model
    :param a: binary treatment / observation indicator
    :param z: covariate, a point of [0,1]^d or a discrete support index
    """
    __slots__ = ('y1', 'y2', 'a', 'z')

    def __init__(self, y1=0, y2=None, a=0, z=0):
        self.y1 = y1
        self.y2 = y2
        self.a = a
        self.z = z

    @property
    def discrete(self):
        return np.ndim(self.z) == 0

    def __eq__(self, other):
        return isinstance(other, Observation) and self.y1 == other.y1 and self.y2 == other.y2 \
            and self.a == other.a and np.array_equal(self.z, other.z)

    def __repr__(self):
        return "Observation(y1={}, y2={}, a={}, z={})".format(self.y1, self.y2, self.a, self.z)


class Dataset(object):
    """
    A sample of observations stored column-wise.
    Integer covariates are discrete support indexes with shape (n,); float covariates are
    points of [0,1]^d with shape (n, d).
    """

    def __init__(self, y1, a, z, y2=None):
        self.y1 = _freeze(np.asarray(y1, dtype=float).reshape(-1))
        self.a = _freeze(np.asarray(a, dtype=float).reshape(-1))
        self.y2 = None if y2 is None else _freeze(np.asarray(y2, dtype=float).reshape(-1))

        z = np.asarray(z)
        if np.issubdtype(z.dtype, np.integer):
            z = z.reshape(-1).astype(int)
        else:
            z = z.astype(float)
            if z.ndim == 1:
                z = z.reshape(-1, 1)
        self.z = _freeze(z)

        n = len(self.y1)
        if len(self.a) != n or len(self.z) != n or (self.y2 is not None and len(self.y2) != n):
            raise DataError("All observation fields must have the same length")

    @property
    def discrete(self):
        return self.z.ndim == 1

    @property
    def dim(self):
        return 1 if self.discrete else self.z.shape[1]

    @property
    def has_y2(self):
        return self.y2 is not None

    def __len__(self):
        return len(self.y1)

    def __getitem__(self, key):
        if isinstance(key, (int, np.integer)):
            return Observation(y1=self.y1[key], y2=None if self.y2 is None else self.y2[key],
                               a=self.a[key], z=self.z[key])
        return self.subset(key)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def subset(self, index):
        """
        Sub sample
        :param index: slice, integer indexes or boolean mask
        :return: a new Dataset
        """
        return Dataset(self.y1[index], self.a[index], self.z[index],
                       y2=None if self.y2 is None else self.y2[index])

    def to_dataframe(self):
        """Pandas DataFrame with the columns y1, y2, a, z1..zd (y2 empty for non ATE models)"""
        df = pd.DataFrame({'y1': self.y1.astype(int),
                           'y2': pd.array(self.y2.astype(int) if self.y2 is not None else [None] * len(self),
                                          dtype='Int64'),
                           'a': self.a.astype(int)})
        if self.discrete:
            df['z1'] = self.z
        else:
            for k in range(self.dim):
                df['z{}'.format(k + 1)] = self.z[:, k]
        return df

    @staticmethod
    def from_dataframe(df, discrete=False):
        """
        Build a Dataset from a DataFrame with the columns y1, y2, a, z1..zd
        :param df: Pandas DataFrame
        :param discrete: if True, z1 holds discrete support indexes
        :return: Dataset
        """
        for col in ['y1', 'a', 'z1']:
            if col not in df.columns:
                raise DataError("Dataset is missing the column '{}'".format(col))
        zcols = sorted([c for c in df.columns if c.startswith('z')], key=lambda c: int(c[1:]))
        if df[['y1', 'a'] + zcols].isnull().values.any():
            raise DataError("Dataset has empty values in the columns y1, a or z")
        if discrete:
            z = df['z1'].values.astype(int)
        else:
            z = df[zcols].values.astype(float)
        y2 = None
        if 'y2' in df.columns and df['y2'].notnull().any():
            if df['y2'].isnull().any():
                raise DataError("Column 'y2' must be either complete or empty")
            y2 = df['y2'].values.astype(float)
        return Dataset(df['y1'].values, df['a'].values, z, y2=y2)

    def __repr__(self):
        return "Dataset(n={}, d={}, discrete={}, y2={})".format(len(self), self.dim, self.discrete, self.has_y2)
