"""
Facilities to store, read and check the results of the Monte Carlo experiments
"""

import pandas as pd

from pyHOIF.common.Exceptions import DataError


FLOAT_FORMAT = '%.17g'


def result_columns():
    return ['estimator', 'n', 'k', 'mean', 'bias', 'variance', 'rmse', 'replications', 'failures', 'seed']


class ResultTable(object):
    """
    Rows (estimator, n, k, mean, bias, variance, rmse, replications, failures, seed) of an experiment
    """
    def __init__(self, rows=None):
        self.rows = list(rows) if rows is not None else []

    def append(self, **row):
        self.rows.append(row)

    def __len__(self):
        return len(self.rows)

    def to_dataframe(self):
        return pd.DataFrame(self.rows, columns=result_columns())

    def sorted(self):
        return ResultTable(sorted(self.rows, key=lambda r: (r['estimator'], r['n'], r['k'])))

    def save(self, filename):
        """Write the rows as delimited text, numbers with 17 significant digits"""
        self.sorted().to_dataframe().to_csv(filename, index=False, float_format=FLOAT_FORMAT)

    @staticmethod
    def load(filename):
        df = pd.read_csv(filename)
        missing = [c for c in result_columns() if c not in df.columns]
        if missing:
            raise DataError("Result file {} is missing the columns {}".format(filename, missing))
        return ResultTable(df[result_columns()].to_dict('records'))

    def check_consistency(self, tol=1e-10):
        """Largest deviation |rmse^2 - bias^2 - variance| over the rows; raises DataError above tol"""
        worst = 0.0
        for row in self.rows:
            if row['replications'] == 0:
                continue
            worst = max(worst, abs(row['rmse'] ** 2 - row['bias'] ** 2 - row['variance']))
        if worst > tol:
            raise DataError("Inconsistent result rows: rmse^2 - bias^2 - variance = {:g}".format(worst))
        return worst

    def __repr__(self):
        return "ResultTable({} rows)".format(len(self))
