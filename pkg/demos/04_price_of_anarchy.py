"""Exhaustive equilibria and the price of anarchy on tiny instances."""

import numpy as np

from fogoffload import GeneratorConfig, generate
from fogoffload.oracle import enumerate_equilibria, poa, profile_space_size

s = generate(GeneratorConfig(n_users=4, n_fog=2, seed=11))
print("profiles to scan:", profile_space_size(s))
eq = enumerate_equilibria(s)
print("pure equilibria:", eq)

r = poa(s)
print(f"worst NE {r.worst_ne_cost:.4f}  best NE {r.best_ne_cost:.4f}  optimum {r.optimal_cost:.4f}")
print(f"poa {r.poa:.4f} <= min(occupancy {r.bound_occupancy:.0f}, ratio {r.bound_ratio:.3f})")

# across many instances the dynamics land close to the optimum
poas = []
for seed in range(300):
    s = generate(GeneratorConfig(n_users=1 + seed % 4, n_fog=seed % 3, seed=seed))
    poas.append(poa(s).poa)
poas = np.array(poas)
print(f"instances with poa == 1: {np.mean(poas == 1.0):.1%}, max poa {poas.max():.4f}")

# past the enumeration cap the report is an estimate
big = generate(GeneratorConfig(200, 50, seed=1))
est = poa(big)
print("N=200 exact:", est.exact, "poa estimate:", round(est.poa, 4))
