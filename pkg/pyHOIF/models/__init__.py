"""
Structured semiparametric model classes
"""

from pyHOIF.common.Exceptions import ConfigurationError


def get_model_kinds():
    """Return all the model kind classes"""
    from pyHOIF.models import missing, covariance, ate
    return [missing.MissingData, covariance.Covariance, ate.ATE]


def get_kind(tag, **kwargs):
    """
    Build a model kind from its tag
    :param tag: one of 'missing', 'covariance', 'ate'
    :param kwargs: kind parameters (propensity for 'ate')
    :return: ModelKind
    """
    for kind in get_model_kinds():
        if kind.tag == tag:
            return kind(**kwargs)
    raise ConfigurationError("Unknown model kind '{}'".format(tag), field='kind')
