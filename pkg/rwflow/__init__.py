"""Reweighted Wirtinger flow phase retrieval with WF and truncated baselines."""

__version__ = "0.1.0"
