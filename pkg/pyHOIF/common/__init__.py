"""
Common facilities for pyHOIF: observations, evaluable functions, quadrature domains and errors
"""
