"""Averaging over a finite group yields a vector every group element fixes.

Run with ``python demos/01_group_averaging.py``.
"""
import numpy as np

from tnlab import SupportSet, act, cyclic_blocks, group_average, make_block_permutation_group
from tnlab import make_cyclic_translation_group

rng = np.random.default_rng(0)

# Cyclic shifts of R^8. Shift-by-1 moves coordinate i to i + 1 (mod 8).
C8 = make_cyclic_translation_group(SupportSet.range(0, 8))
print("shift-by-1 of 0..7:", act(C8[1], np.arange(8.0)))

x = rng.standard_normal(8)
mu = group_average(C8, x)
print("x          :", np.round(x, 3))
print("average    :", np.round(mu, 3))   # every entry equals mean(x)
print("worst |g(mu) - mu| over C_8:", max(np.max(np.abs(act(g, mu) - mu)) for g in C8))

# Permuting four blocks of R^16: the average repeats the mean block four times.
S4 = make_block_permutation_group(cyclic_blocks(4, 4))
y = rng.standard_normal(16)
mu = group_average(S4, y)
print("\n|S_4| =", len(S4))
print("mean block   :", np.round(y.reshape(4, 4).mean(axis=0), 3))
print("averaged y   :", np.round(mu.reshape(4, 4), 3))
print("worst |g(mu) - mu| over S_4:", max(np.max(np.abs(act(g, mu) - mu)) for g in S4))
