"""Finite n-ary Gamma-semirings, their positional modules and exact structures."""

__version__ = "0.1.0"
