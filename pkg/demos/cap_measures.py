"""
Spherical caps
==============

Closed-form cap measures against sampling, and how the cap of radius
sqrt(2) - eps/sqrt(k) behaves as the dimension grows.
"""
import math

import numpy as np

from ramsey_turan import sphere

# the closed form and a sampled estimate agree to a few standard errors
for k, radius in [(2, 1.0), (3, 1.2), (10, math.sqrt(2) - 0.1)]:
    exact = sphere.cap_measure(k, radius)
    mc, se = sphere.cap_measure_monte_carlo(k, radius, samples=200_000, seed=0)
    print(f"k={k:2d} radius={radius:.3f}  exact={exact:.5f}  sampled={mc:.5f} +/- {se:.5f}")

# at fixed eps the cap just short of a hemisphere shrinks slowly with k
eps = 0.5
ks = np.array([3, 10, 25, 50, 100, 200])
mu = [sphere.cap_measure(int(k), math.sqrt(2) - eps / math.sqrt(k)) for k in ks]
print(np.round(mu, 4))

# the equal-measure partition: every cell has measure 1/z
part = sphere.build_partition(3, 40, seed=0)
print("cells:", len(part.cells), " max diameter (sampled): %.3f" % part.max_diameter)
