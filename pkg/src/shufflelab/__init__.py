"""Permutation statistics, shuffle-compatibility certifiers, dendriform and
runic operations on quasisymmetric functions, kernels of descent statistics
and enriched P-partitions."""

__version__ = "0.1.0"
