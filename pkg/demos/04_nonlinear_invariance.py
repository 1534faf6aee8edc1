"""A two-layer network pooling over in-block shifts and block permutations is
invariant to h = g1 o relu o g2, a transformation that is not a group element.

Run with ``python demos/04_nonlinear_invariance.py``.
"""
import itertools
import time

import numpy as np

from tnlab import apply_transform, certified_network, fig1_network, forward, hierarchy_cost
from tnlab import iter_transform_specs, layer_group_sizes, nonlinear_invariance_deficit
from tnlab import random_transform_spec

rng = np.random.default_rng(2)
net = fig1_network()
x = np.arange(1.0, 17.0)
print("layer-1 features of 1..16:", forward(net, x)[0])
print("per-layer group sizes     :", layer_group_sizes(net))

# One composite transform, evaluated step by step.
spec = random_transform_spec(net, rng)
hx = apply_transform(spec, x)
print("\nh(x)        :", hx)
print("top(x), top(h(x)):", forward(net, x)[-1], forward(net, hx)[-1])

# Every one of the 4^4 * 24 transforms, on nonnegative inputs.
X = rng.uniform(0.0, 1.0, (20, 16))
start = time.perf_counter()
worst = max(nonlinear_invariance_deficit(net, X, s) for s in iter_transform_specs(net))
print(f"\n2 layers: max deficit {worst:.2e} over all transforms ({time.perf_counter() - start:.1f}s)")

deep = certified_network(depth=3)
X = rng.uniform(0.0, 1.0, (20, deep.input_dim))
worst = max(nonlinear_invariance_deficit(deep, X, random_transform_spec(deep, rng)) for _ in range(200))
print(f"3 layers: max deficit {worst:.2e} over 200 random transforms")

# What the hierarchy saves: integrate per layer instead of over every composite.
for depth in (1, 2, 3):
    sizes = layer_group_sizes(certified_network(depth=depth))
    flat, hier = hierarchy_cost(sizes)
    print(f"depth {depth}: sizes {sizes}, flat {flat}, hierarchical {hier}")

# Signed inputs leave the certified regime: relu inside h discards negative parts.
X = rng.standard_normal((50, 16))
signed = max(nonlinear_invariance_deficit(net, X, s, strict=False)
             for s in itertools.islice(iter_transform_specs(net), 0, 6144, 97))
print(f"\nsigned inputs (measured only): max deficit {signed:.3f}")
