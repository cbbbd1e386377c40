"""
pyHOIF - A Python library for higher order influence function estimators in structured semiparametric models
"""

__version__ = '0.1.0'
