"""
Synthetic data generators and dataset / model file I/O
"""
