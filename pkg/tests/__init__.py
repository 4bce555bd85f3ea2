"""
nonsmooth-hopf Test Suite

This package contains unit tests, integration tests, and fixtures
for the coefficient, prediction and continuation code.
"""
