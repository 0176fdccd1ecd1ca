"""Exact arithmetic and indecomposable quadratic forms over biquadratic and simplest cubic fields."""

__version__ = "0.1.0"
