"""Uniformity of multiplicative functions on prime cyclic groups.

Gowers U2/U3 norms, Fejer-type kernels and structured/uniform
decompositions of completely multiplicative functions, Katai's prime-pair
statistic, four-form recurrence averages, and exact parametric solutions of
quadratic forms.
"""

__version__ = "0.1.0"
