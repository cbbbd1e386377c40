"""
Error taxonomy of pyHOIF.

All errors raised on purpose by the library derive from HOIFError. Errors caused by bad
arguments also derive from ValueError, so callers used to catching ValueError keep working.
"""


class HOIFError(Exception):
    """Base class of all pyHOIF errors"""
    pass


class LayoutError(HOIFError, ValueError):
    """The observation layout does not match the model kind"""
    pass


class ArgumentError(HOIFError, ValueError):
    """Invalid argument: empty data, too few observations, too few folds..."""
    pass


class ConfigurationError(HOIFError, ValueError):
    """Invalid configuration. The offending field is kept on ``field``"""
    def __init__(self, message, field=None):
        super(ConfigurationError, self).__init__(message)
        self.field = field


class ParameterError(HOIFError, ValueError):
    """Parameter values outside the range allowed by the model"""
    pass


class DegenerateWeightError(HOIFError):
    """The Gram matrix of a basis with respect to a weight measure is (numerically) singular"""
    def __init__(self, message, condition=None):
        super(DegenerateWeightError, self).__init__(message)
        self.condition = condition


class CollinearBasisError(HOIFError):
    """The least squares design matrix of a series regression is (numerically) singular"""
    def __init__(self, message, condition=None):
        super(CollinearBasisError, self).__init__(message)
        self.condition = condition


class DataError(HOIFError, ValueError):
    """Empty or malformed data"""
    pass


class ExperimentError(HOIFError):
    """Too many replications of an experiment cell failed"""
    pass
