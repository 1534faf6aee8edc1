"""A TN node pools dot products over a template's orbit, so its output
ignores any transformation drawn from that group.

Run with ``python demos/02_node_invariance.py``.
"""
import statistics

import numpy as np

from tnlab import HARD_RELU, SupportSet, act, make_cyclic_translation_group, make_explicit_group
from tnlab import invariance_deficit, make_node, node_output

rng = np.random.default_rng(1)
C8 = make_cyclic_translation_group(SupportSet.range(0, 8))
templates = list(rng.standard_normal((3, 8)))

for pooling in ("mean", "max"):
    node = make_node(templates, C8, pooling, HARD_RELU)
    x = rng.uniform(0.0, 1.0, 8)
    print(f"{pooling}-pooled node, 3 channels")
    for k in (0, 3, 5):
        print(f"  shift {k}: {np.round(node_output(node, act(C8[k], x)), 6)}")

# The reflection i -> -i is not a cyclic shift. A max-pooled node notices it.
reflect = make_explicit_group(SupportSet.range(0, 8),
                              permutations=[list(range(8)), [(-i) % 8 for i in range(8)]])
node = make_node(templates[:1], C8, "max", HARD_RELU)
own = [invariance_deficit(node, x, C8) for x in rng.standard_normal((100, 8))]
other = [invariance_deficit(node, x, reflect) for x in rng.standard_normal((100, 8))]
print("\nmax deficit under own group :", max(own))
print("median deficit under reflection:", round(statistics.median(other), 4))

# A mean-pooled C_8 node only sees sum(x): the orbit mean of any template is constant.
node = make_node(templates[:1], C8, "mean", HARD_RELU)
print("mean-pooled node, reflection deficit:",
      max(invariance_deficit(node, x, reflect) for x in rng.standard_normal((100, 8))))
