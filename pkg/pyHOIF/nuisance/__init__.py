"""
Estimation of the nuisance functions a, b, f and of the weight stilde_1 f, with sample splitting
"""
