"""Searching the MDS precoding rate theta.

The load as a function of theta is not convex, so we scan a grid and look at
the shape of the curve before trusting the refined minimum.
"""

from fractions import Fraction

import numpy as np

from cachecalc import bounds
from cachecalc.config import SystemConfig

for K in (3, 6):
    cfg = SystemConfig(K, 3, Fraction(1, 4))
    c = [bounds.multicast_count(cfg, t) for t in range(K + 1)]
    thetas = np.linspace(0.01, 1, 12)
    loads = bounds._mds_grid(K, 0.25, thetas, c)
    print(f"\nK={K}, N=3, gamma=1/4")
    for th, v in zip(thetas, loads):
        print(f"  theta={th:.3f}  load={v:.5f}")
    res = bounds.mds_load(cfg)
    print(f"  best theta={res.theta:.4g} load={res.load:.6f} s'={res.s_prime}")
    print(f"  centralized envelope at gamma=1/4: {float(bounds.yma_envelope_value(cfg)):.6f}")
