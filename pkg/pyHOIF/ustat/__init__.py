"""
U-statistics of orders 1 and 2, kernel symmetrization and Hoeffding decomposition oracles
"""
