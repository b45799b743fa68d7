"""Best-response dynamics on the default instance, and what the equilibrium looks like."""

import numpy as np

from fogoffload import GeneratorConfig, LOCAL, generate, is_nash, run_best_response
from fogoffload.experiments import measure

s = generate(GeneratorConfig(n_users=200, n_fog=50, cloud_rtt_s=0.2, seed=1))
print(s.label, "users:", s.n_users, "fog nodes:", s.n_fog)

r = run_best_response(s)
print("converged:", r.converged, "rounds:", r.rounds, "updates:", r.updates)
print("is_nash:", is_nash(s, r.profile))

# the potential climbs with every single move
trace = np.array(r.potential_trace)
print("potential start / end:", trace[0], round(trace[-1], 3))
print("strictly increasing:", bool(np.all(np.diff(trace) > 0)))

choices = np.array(r.profile)
print("local:", int((choices == LOCAL).sum()),
      "cloud:", int((choices == 0).sum()),
      "fog:", int((choices > 0).sum()))

m = measure(s, r, seed=1)
print(f"avg qoe {m.avg_qoe:.4f}, beneficial {m.frac_beneficial:.1%}")
print(f"social cost: NE {m.social_cost_ne:.2f}, all-local {m.social_cost_local:.2f}, "
      f"cloud-only {m.social_cost_cloud_only:.2f}, best found {m.social_cost_opt:.2f}")
print("delay breakdown:", {k: round(v, 4) for k, v in m.delay_breakdown.items()})
