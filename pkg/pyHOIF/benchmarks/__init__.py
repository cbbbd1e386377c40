"""
Monte Carlo harness: experiment configuration and driver, accuracy measures, result tables and self test
"""
