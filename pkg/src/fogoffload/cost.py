"""Energy, delay and QoE of executing a task locally or on a server.

Fog servers share their capacity equally among co-resident tasks, with the
share reassigned as smaller tasks finish; the cloud gives every task a
dedicated ``f_0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import LOCAL, InfeasibleProfileError, Link, Scenario, User, check_profile

GHZ = 1e9


@dataclass(frozen=True)
class CostBreakdown:
    energy_j: float
    time_s: float
    weighted_cost: float
    transmit_s: float = 0.0
    rtt_s: float = 0.0
    compute_s: float = 0.0


def alpha(device) -> float:
    """Energy per second of local CPU time, with the clock taken in GHz."""
    return device.kappa * (device.cpu_hz / GHZ) ** device.phi + device.varrho


def local_cost(user: User) -> CostBreakdown:
    t = user.task.workload / user.device.cpu_hz
    e = alpha(user.device) * t
    return CostBreakdown(
        energy_j=e,
        time_s=t,
        weighted_cost=user.weight_energy * e + user.weight_time * t,
        compute_s=t,
    )


def share_term(workload: float, capacity_hz: float, other_workload: float) -> float:
    """Extra time one co-resident task adds to a task on a fog server.

    Symmetric in the two workloads: both orders give ``min(w, w') / f``.
    """
    return workload / capacity_hz * min(other_workload / workload, 1.0)


def fog_delay(workload: float, capacity_hz: float, co_workloads: Iterable[float]) -> float:
    """Processing-sharing completion time of one task among ``co_workloads``."""
    load = 1.0
    for w in co_workloads:
        load += min(w / workload, 1.0)
    return workload / capacity_hz * load


def offload_breakdown(user: User, link: Link, compute_s: float) -> CostBreakdown:
    z = user.task.size_bits
    transmit = z / link.rate_bps
    energy = link.energy_j_per_s * transmit
    time = transmit + link.rtt_s + compute_s
    return CostBreakdown(
        energy_j=energy,
        time_s=time,
        weighted_cost=user.weight_energy * energy + user.weight_time * time,
        transmit_s=transmit,
        rtt_s=link.rtt_s,
        compute_s=compute_s,
    )


def _link(scenario: Scenario, n: int, s: int) -> Link:
    try:
        return scenario.users[n].links[s]
    except KeyError:
        raise InfeasibleProfileError(f"user {n} cannot reach server {s}") from None


def compute_delay(scenario: Scenario, n: int, s: int, others: Sequence[int]) -> float:
    """Time task ``n`` spends on server ``s``; entry ``others[n]`` is ignored."""
    _link(scenario, n, s)
    user = scenario.users[n]
    server = scenario.servers[s]
    w = user.task.workload
    if server.is_cloud:
        return w / server.capacity_hz
    co = (scenario.users[m].task.workload
          for m, a in enumerate(others) if a == s and m != n)
    return fog_delay(w, server.capacity_hz, co)


def offload_cost(scenario: Scenario, n: int, s: int, others: Sequence[int]) -> CostBreakdown:
    link = _link(scenario, n, s)
    return offload_breakdown(scenario.users[n], link, compute_delay(scenario, n, s, others))


def strategy_cost(scenario: Scenario, n: int, strat: int, others: Sequence[int]) -> CostBreakdown:
    if strat == LOCAL:
        return local_cost(scenario.users[n])
    return offload_cost(scenario, n, strat, others)


def qoe(scenario: Scenario, n: int, strat: int, others: Sequence[int]) -> float:
    """Cost reduction from offloading; 0 for local execution, may be negative."""
    if strat == LOCAL:
        return 0.0
    return local_cost(scenario.users[n]).weighted_cost - offload_cost(scenario, n, strat, others).weighted_cost


def user_cost(scenario: Scenario, n: int, strat: int, others: Sequence[int]) -> float:
    return strategy_cost(scenario, n, strat, others).weighted_cost


def social_cost(scenario: Scenario, profile: Sequence[int]) -> float:
    profile = check_profile(scenario, profile)
    return sum(user_cost(scenario, n, a, profile) for n, a in enumerate(profile))


def standalone_min_cost(scenario: Scenario, n: int) -> float:
    """Cheapest cost of user ``n`` when every other user computes locally."""
    alone = [LOCAL] * scenario.n_users
    user = scenario.users[n]
    return min(user_cost(scenario, n, a, alone) for a in [LOCAL, *sorted(user.links)])
