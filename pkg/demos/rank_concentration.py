"""How closely random subspaces hit the generic intersection/union ranks."""

from fractions import Fraction

from cachecalc import bounds, sim
from cachecalc.config import SystemConfig

B = 60
for g in (Fraction(1, 5), Fraction(3, 5)):
    cfg = SystemConfig(4, 4, g)
    prof = bounds.rank_profile(cfg)
    emp = sim.empirical_rank_profile(cfg, B, trials=30, seed=1)
    hit_t, hit_r = emp.match_rate(prof.tau, prof.rho)
    print(f"\ngamma={g}")
    for s in range(1, 5):
        print(
            f"  s={s}: tau*B={int(prof.tau[s] * B):3d} (hit {hit_t[s]:.0%})"
            f"  rho*B={int(prof.rho[s] * B):3d} (hit {hit_r[s]:.0%})"
        )
