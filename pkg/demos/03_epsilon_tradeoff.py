"""Epsilon-better response: fewer moves for a little QoE."""

import numpy as np

from fogoffload import DynamicsConfig, GeneratorConfig, generate
from fogoffload.game import run_best_response, run_epsilon_better_response, update_bound

rows = []
for seed in range(1, 11):
    s = generate(GeneratorConfig(100, 30, seed=seed))
    exact = run_best_response(s)
    rows.append([0.0, np.mean(exact.per_user_qoe), exact.updates, np.nan])
    for eps in (0.01, 0.1, 1.0):
        r = run_epsilon_better_response(s, DynamicsConfig(epsilon=eps))
        rows.append([eps, np.mean(r.per_user_qoe), r.updates, update_bound(s, eps)])

table = np.array(rows)
print(" eps     avg qoe   updates   worst-case bound")
for eps in (0.0, 0.01, 0.1, 1.0):
    sel = table[table[:, 0] == eps]
    print(f"{eps:5.2f}  {sel[:, 1].mean():9.4f}  {sel[:, 2].mean():8.1f}  {sel[:, 3].mean():12.0f}")
# the bound is loose by orders of magnitude; real runs take about one move per user
