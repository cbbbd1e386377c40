"""
Basis systems on the covariate domain, their partitions and weighted projection kernels
"""
