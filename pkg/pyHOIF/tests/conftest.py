import os

import numpy as np
import pytest

from pyHOIF.estimators import oracle
from pyHOIF.models.covariance import Covariance
from pyHOIF.models.discrete import DiscreteModel
from pyHOIF.models.missing import MissingData


def pytest_collection_modifyitems(config, items):
    if os.environ.get('HOIF_SLOW') == '1':
        return
    skip = pytest.mark.skip(reason="long Monte Carlo check, set HOIF_SLOW=1 to run")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def missing_model():
    """J=2, f=(0.5, 0.5), a=(2, 4), b=(0.3, 0.6)"""
    return DiscreteModel([0.5, 0.5], [2.0, 4.0], [0.3, 0.6], MissingData())


@pytest.fixture
def miscalibrated_fit(missing_model):
    """a_hat - a = (0.5, -0.5), b_hat - b = (0.1, -0.1): first order bias -0.01875"""
    return oracle.fixed_fit(missing_model, missing_model.a + np.array([0.5, -0.5]),
                            missing_model.b + np.array([0.1, -0.1]))


@pytest.fixture
def covariance_model():
    return DiscreteModel([0.5, 0.5], [0.3, 0.6], [0.4, 0.5], Covariance())
