"""Fractional powers x^d approach the hard ReLU as d grows toward 1.

Only the ReLU (and the identity) satisfy eta(eta(x)) = eta(x); the stability
deficit of x^d shrinks with d. Writes ``activation_curves.csv`` to the
current directory.

Run with ``python demos/03_activation_curves.py``.
"""
from pathlib import Path

import numpy as np

from tnlab import HARD_RELU, frac_power, stability_deficit, sup_distance
from tnlab.harness import curves_csv

grid = np.linspace(0.0, 2.0, 1001)
print(f"{'eta':>14} {'stability':>12} {'sup |eta - relu|':>18}")
for eta in (HARD_RELU, frac_power(0.1), frac_power(0.5), frac_power(0.9), frac_power(0.99)):
    print(f"{eta.name:>14} {stability_deficit(eta, grid):12.6f} "
          f"{sup_distance(eta, HARD_RELU, 0.0, 2.0):18.6f}")

etas = [frac_power(0.1), frac_power(0.5), frac_power(0.9), HARD_RELU]
out = Path("activation_curves.csv")
out.write_text(curves_csv(etas, -1.5, 1.5, 301))
print("\nwrote", out.resolve())
