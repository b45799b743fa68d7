"""Per-run metrics, seeded replications and parameter sweeps.

CSV layout: one row per (axis value, replication), followed for each axis
value by two aggregate rows whose ``seed`` column reads ``mean`` / ``std``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional, Sequence

import numpy as np

from . import cost
from .game import DynamicsConfig, EquilibriumReport, run_dynamics
from .model import LOCAL, Scenario, all_local
from .oracle import DEFAULT_CAP, social_optimum
from .scenario import GeneratorConfig, generate, write_atomic


@dataclass(frozen=True)
class RunMetrics:
    seed: object
    n_users: float
    avg_qoe: float
    avg_delay_s: float
    compute_s: float
    transmit_s: float
    rtt_s: float
    beneficial_total: float
    beneficial_cloud: float
    beneficial_fog: float
    frac_beneficial: float
    social_cost_ne: float
    social_cost_local: float
    social_cost_cloud_only: float
    social_cost_opt: float
    opt_exact: float
    updates: float
    rounds: float

    @property
    def delay_breakdown(self) -> dict:
        return {"compute_s": self.compute_s, "transmit_s": self.transmit_s, "rtt_s": self.rtt_s}


METRICS = tuple(f.name for f in fields(RunMetrics) if f.name not in ("seed", "n_users"))
CSV_COLUMNS = ("axis", "axis_value", "seed", *METRICS)


def measure(scenario: Scenario, report: EquilibriumReport, seed=None, *,
            compute_opt: bool = True, cap: int = DEFAULT_CAP) -> RunMetrics:
    """Metrics of a converged run, recomputed from the profile alone.

    Local users count towards every average with zero transmit and rtt time.
    The cloud-only baseline reruns the same dynamics with fog links removed.
    """
    if not report.converged:
        raise ValueError("cannot measure an unconverged run")
    p = report.profile
    N = scenario.n_users
    qoe = np.empty(N)
    parts = np.empty((N, 3))
    n_cloud = n_fog = 0
    for n, a in enumerate(p):
        b = cost.strategy_cost(scenario, n, a, p)
        parts[n] = b.compute_s, b.transmit_s, b.rtt_s
        qoe[n] = cost.qoe(scenario, n, a, p)
        if a != LOCAL and qoe[n] > 0:
            if scenario.servers[a].is_cloud:
                n_cloud += 1
            else:
                n_fog += 1

    dyn = DynamicsConfig(epsilon=report.epsilon)
    cloud_only = run_dynamics(scenario.without_fog_links(), dyn)
    if compute_opt:
        _, opt, exact = social_optimum(scenario, cap, ne_profile=p)
    else:
        opt, exact = math.nan, False

    means = parts.mean(axis=0)
    return RunMetrics(
        seed=seed,
        n_users=N,
        avg_qoe=float(qoe.mean()),
        avg_delay_s=float(parts.sum(axis=1).mean()),
        compute_s=float(means[0]),
        transmit_s=float(means[1]),
        rtt_s=float(means[2]),
        beneficial_total=n_cloud + n_fog,
        beneficial_cloud=n_cloud,
        beneficial_fog=n_fog,
        frac_beneficial=(n_cloud + n_fog) / N,
        social_cost_ne=cost.social_cost(scenario, p),
        social_cost_local=cost.social_cost(scenario, all_local(N)),
        social_cost_cloud_only=cloud_only.social_cost,
        social_cost_opt=opt,
        opt_exact=exact,
        updates=report.updates,
        rounds=report.rounds,
    )


def aggregate(runs: Sequence[RunMetrics]) -> tuple:
    """Element-wise mean and sample std (0 for a single run), seed-ordered."""
    runs = sorted(runs, key=lambda r: r.seed)
    table = np.array([[float(getattr(r, k)) for k in ("n_users", *METRICS)] for r in runs])
    mean = table.mean(axis=0)
    std = table.std(axis=0, ddof=1) if len(runs) > 1 else np.zeros(table.shape[1])
    keys = ("n_users", *METRICS)
    return (RunMetrics(seed="mean", **{k: float(v) for k, v in zip(keys, mean)}),
            RunMetrics(seed="std", **{k: float(v) for k, v in zip(keys, std)}))


def _one(args) -> RunMetrics:
    cfg, dyn, compute_opt = args
    scenario = generate(cfg)
    report = run_dynamics(scenario, dyn)
    return measure(scenario, report, seed=cfg.seed, compute_opt=compute_opt)


@dataclass(frozen=True)
class Replication:
    mean: RunMetrics
    std: RunMetrics
    runs: tuple

    @property
    def n_replications(self) -> int:
        return len(self.runs)


def replicate(cfg: GeneratorConfig, dyn: DynamicsConfig, n_reps: int, base_seed: int = 0, *,
              compute_opt: bool = True, workers: int = 1) -> Replication:
    if n_reps < 1:
        raise ValueError("n_reps must be >= 1")
    jobs = [(replace(cfg, seed=base_seed + k), dyn, compute_opt) for k in range(n_reps)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            runs = list(pool.map(_one, jobs))
    else:
        runs = [_one(j) for j in jobs]
    mean, std = aggregate(runs)
    return Replication(mean, std, tuple(runs))


AXES = {"N": "n_users", "S": "n_fog", "cloud_rtt": "cloud_rtt_s"}


@dataclass(frozen=True)
class SweepPoint:
    axis_value: float
    mean: RunMetrics
    std: RunMetrics
    n_replications: int
    runs: tuple = ()


@dataclass(frozen=True)
class SweepResult:
    axis: str
    points: tuple

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "points": [{
                "axis_value": pt.axis_value,
                "n_replications": pt.n_replications,
                "mean": _metrics_dict(pt.mean),
                "std": _metrics_dict(pt.std),
                "runs": [_metrics_dict(r) for r in pt.runs],
            } for pt in self.points],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for pt in self.points:
            for r in (*pt.runs, pt.mean, pt.std):
                w.writerow([self.axis, pt.axis_value, r.seed, *(_cell(getattr(r, k)) for k in METRICS)])
        return buf.getvalue()

    def save(self, csv_path=None, json_path=None) -> None:
        if csv_path is not None:
            write_atomic(csv_path, self.to_csv())
        if json_path is not None:
            write_atomic(json_path, self.to_json())


def _cell(v):
    if isinstance(v, bool):
        return int(v)
    return v


def _metrics_dict(r: RunMetrics) -> dict:
    d = asdict(r)
    d["opt_exact"] = _cell(d["opt_exact"])
    return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}


def sweep(axis: str, values: Sequence, cfg_template: GeneratorConfig, dyn: DynamicsConfig,
          n_reps: int, base_seed: int = 0, *, compute_opt: bool = True,
          workers: int = 1) -> SweepResult:
    """One :func:`replicate` per axis value, only that generator field varied."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {sorted(AXES)}, got {axis!r}")
    if len(values) == 0:
        raise ValueError("sweep needs at least one axis value")
    if len(set(values)) != len(values):
        raise ValueError("duplicate axis values")
    field = AXES[axis]
    points = []
    for v in sorted(values):
        v = float(v) if axis == "cloud_rtt" else _as_int(v)
        rep = replicate(replace(cfg_template, **{field: v}), dyn, n_reps, base_seed,
                        compute_opt=compute_opt, workers=workers)
        points.append(SweepPoint(v, rep.mean, rep.std, rep.n_replications, rep.runs))
    return SweepResult(axis, tuple(points))


def _as_int(v) -> int:
    if isinstance(v, float) and not v.is_integer():
        raise ValueError(f"expected an integer axis value, got {v}")
    return int(v)
