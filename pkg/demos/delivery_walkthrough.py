"""One delivery round at K = N = 3, gamma = 1/2, step by step."""

from fractions import Fraction

from cachecalc import lp, sim
from cachecalc.config import SystemConfig

cfg = SystemConfig(3, 3, Fraction(1, 2))
sol = lp.solve(cfg)
print("lambda:", [str(x) for x in sol.lambda_])
print("eta:   ", [str(x) for x in sol.eta])
print("LP load:", sol.objective)

B = sim.scale_block_length(sol, cfg.gamma)
pl = sim.place(cfg, B, seed=0)
print(f"\nB={B}; each user caches {pl.cache_dim} coded symbols per file")

dec = sim.decompose(pl, sol)
for S, rows in sorted(dec.blocks[0].items(), key=lambda kv: (len(kv[0]), kv[0])):
    print(f"  V_{S or '{}'} for file 0: {rows.shape[0]} rows")

D = sim.worst_case_demand(cfg)
print("\ndemands:\n", D.D, "\nleaders:", D.leaders)

tr = sim.deliver(pl, dec, sol, D)
for m in tr.messages:
    print(f"  X_{m.users}: {m.rows.shape[0]} symbols")
print("load:", tr.load, "decoded:", sim.verify_decoding(pl, tr, D))

# drop one message and watch a user fail
victim = next(m for m in tr.messages if m.rows.shape[0])
print(f"without X_{victim.users}:", sim.verify_decoding(pl, tr.without(victim.users), D))
