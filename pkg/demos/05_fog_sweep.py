"""Sweeps: how many users benefit, and what fog does to delay."""

from pathlib import Path

from fogoffload import DynamicsConfig, GeneratorConfig
from fogoffload.experiments import sweep

REPS = 5

res = sweep("N", [50, 100, 150, 200], GeneratorConfig(50, 50), DynamicsConfig(), REPS,
            compute_opt=False)
for pt in res.points:
    print(f"N={pt.axis_value:3d}  beneficial {pt.mean.frac_beneficial:.1%} "
          f"(cloud {pt.mean.beneficial_cloud:.1f}, fog {pt.mean.beneficial_fog:.1f})")

# delay-sensitive users, longer cloud roundtrip makes fog matter more
for rtt in (0.2, 1.0):
    tmpl = GeneratorConfig.delay_sensitive(n_users=200, cloud_rtt_s=rtt)
    res = sweep("S", [0, 25, 50], tmpl, DynamicsConfig(), REPS, compute_opt=False)
    for pt in res.points:
        m = pt.mean
        print(f"rtt={rtt} S={pt.axis_value:2d}  delay {m.avg_delay_s:.3f} s = compute {m.compute_s:.3f}"
              f" + transmit {m.transmit_s:.3f} + rtt {m.rtt_s:.3f}")

out = Path("sweep_rtt.csv")
res.save(csv_path=out)
print("wrote", out, len(out.read_text().splitlines()) - 1, "rows")
