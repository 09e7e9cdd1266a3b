"""
Test suite for the asymptotic laboratory
"""
