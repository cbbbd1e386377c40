"""
Plug-in, first order and second order corrected estimators, and their exact bias oracles
"""
