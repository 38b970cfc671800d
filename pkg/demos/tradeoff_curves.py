"""Memory-load tradeoff for three small systems.

Prints the linear-placement LP load next to decentralized uncoded placement,
the MDS-precoded baseline and the converse, for (K, N) = (3, 3), (6, 3), (6, 6).
"""

from fractions import Fraction

from cachecalc import bounds, lp
from cachecalc.config import SystemConfig

for K, N in [(3, 3), (6, 3), (6, 6)]:
    print(f"\nK={K} N={N}")
    print(f"{'gamma':>6} {'linp':>8} {'uncoded':>8} {'mds':>8} {'converse':>8}")
    for i in range(0, 13):
        g = Fraction(i, 12)
        cfg = SystemConfig(K, N, g)
        linp = lp.solve(cfg).objective
        unc = bounds.uncoded_load(cfg)
        mds = bounds.mds_load(cfg).load if g > 0 else float("nan")
        conv = bounds.converse(cfg)
        print(f"{str(g):>6} {float(linp):8.4f} {float(unc):8.4f} {mds:8.4f} {float(conv):8.4f}")

# the LP is tight against the converse at both ends of the memory axis
cfg = SystemConfig(6, 6, Fraction(1, 8))
print("\nK=N=6, gamma=1/8:", lp.solve(cfg).objective, "==", bounds.converse(cfg))
