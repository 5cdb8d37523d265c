"""Exact-arithmetic workbench for the dimension-3 mixed-characteristic
direct summand construction."""

__version__ = "0.1.0"
