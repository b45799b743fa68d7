"""Best-response and epsilon-better-response dynamics on the offloading game.

The game is a weighted potential game with weights ``lambda_T``: any
unilateral change of user ``n`` alters its QoE by exactly ``lambda_T[n]``
times the change of :func:`potential`. Sequential improvement dynamics
therefore terminate.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .cost import fog_delay, local_cost, offload_breakdown
from .model import LOCAL, Scenario, all_local, check_profile, feasible_strategies

DEFAULT_EPSILON = 0.01


@dataclass(frozen=True)
class DynamicsConfig:
    """Knobs of a dynamics run.

    ``epsilon == 0`` selects exact best response. ``shuffle_seed`` reshuffles
    the visiting order every round; ``None`` visits users by ascending id.
    ``max_rounds=None`` means ``10 * N * (S + 2)``.
    """

    epsilon: float = 0.0
    max_rounds: Optional[int] = None
    shuffle_seed: Optional[int] = None

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")

    def rounds_limit(self, scenario: Scenario) -> int:
        if self.max_rounds is not None:
            return self.max_rounds
        return max(1, 10 * scenario.n_users * (scenario.n_fog + 2))


@dataclass(frozen=True)
class EquilibriumReport:
    profile: tuple
    updates: int
    rounds: int
    converged: bool
    potential_trace: tuple
    per_user_qoe: tuple
    social_cost: float
    epsilon: float = 0.0

    def to_dict(self) -> dict:
        return {
            "profile": [profile_entry(a) for a in self.profile],
            "epsilon": self.epsilon,
            "updates": self.updates,
            "rounds": self.rounds,
            "converged": self.converged,
            "potential_trace": list(self.potential_trace),
            "per_user_qoe": list(self.per_user_qoe),
            "social_cost": self.social_cost,
        }


def profile_entry(a: int):
    return "local" if a == LOCAL else a


def parse_profile_entry(x) -> int:
    if x == "local":
        return LOCAL
    if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
        return x
    raise ValueError(f"bad strategy {x!r}; expected 'local' or a server id")


class GameState:
    """Mutable profile plus per-fog occupancy, for fast payoff queries.

    Co-resident users are kept sorted by id so every delay is summed in the
    same order as :func:`fogoffload.cost.compute_delay`, giving bit-identical
    payoffs on both paths.
    """

    def __init__(self, scenario: Scenario, profile: Sequence[int]):
        self.scenario = scenario
        users = scenario.users
        self.profile = list(check_profile(scenario, profile))
        self.workload = [u.task.workload for u in users]
        self.local = [local_cost(u).weighted_cost for u in users]
        self.options = [feasible_strategies(u) for u in users]
        self.members = {s.id: [] for s in scenario.servers if not s.is_cloud}
        for n, a in enumerate(self.profile):
            if a in self.members:
                self.members[a].append(n)
        self._alone = {}

    def delay(self, n: int, s: int) -> float:
        srv = self.scenario.servers[s]
        w = self.workload[n]
        if srv.is_cloud:
            return w / srv.capacity_hz
        wl = self.workload
        return fog_delay(w, srv.capacity_hz, (wl[m] for m in self.members[s] if m != n))

    def cost(self, n: int, a: int) -> float:
        if a == LOCAL:
            return self.local[n]
        user = self.scenario.users[n]
        return offload_breakdown(user, user.links[a], self.delay(n, a)).weighted_cost

    def qoe(self, n: int, a: int) -> float:
        if a == LOCAL:
            return 0.0
        return self.local[n] - self.cost(n, a)

    def alone_qoe(self, n: int, a: int) -> float:
        """QoE of ``a`` if every other user were local."""
        if a == LOCAL:
            return 0.0
        key = (n, a)
        if key not in self._alone:
            user = self.scenario.users[n]
            srv = self.scenario.servers[a]
            c = offload_breakdown(user, user.links[a], self.workload[n] / srv.capacity_hz)
            self._alone[key] = self.local[n] - c.weighted_cost
        return self._alone[key]

    def move(self, n: int, a: int) -> None:
        old = self.profile[n]
        if old == a:
            return
        if old in self.members:
            self.members[old].remove(n)
        if a in self.members:
            bisect.insort(self.members[a], n)
        self.profile[n] = a

    def improving_move(self, n: int, eps: float) -> int:
        """Strategy user ``n`` switches to, or its current one if none gains > eps.

        Among qualifying strategies the largest QoE wins; ties go to local,
        then to the lowest server id.
        """
        cur = self.profile[n]
        q_cur = self.qoe(n, cur)
        best, best_q = cur, None
        for a in self.options[n]:
            if a == cur:
                continue
            q = self.qoe(n, a)
            if q - q_cur > eps and (best_q is None or q > best_q):
                best, best_q = a, q
        return best

    def potential(self) -> float:
        users = self.scenario.users
        shared = alone = 0.0
        for n, a in enumerate(self.profile):
            if a == LOCAL:
                continue
            lt = users[n].weight_time
            shared += self.qoe(n, a) / lt
            alone += self.alone_qoe(n, a) / lt
        return (shared + alone) / 2

    def social_cost(self) -> float:
        return sum(self.cost(n, a) for n, a in enumerate(self.profile))

    def qoes(self) -> tuple:
        return tuple(self.qoe(n, a) for n, a in enumerate(self.profile))


def potential(scenario: Scenario, profile: Sequence[int]) -> float:
    return GameState(scenario, profile).potential()


def best_response(scenario: Scenario, n: int, others: Sequence[int]) -> int:
    """QoE-maximising strategy of user ``n`` against ``others``.

    Keeps ``others[n]`` when it already attains the maximum.
    """
    return GameState(scenario, others).improving_move(n, 0.0)


def first_violation(scenario: Scenario, profile: Sequence[int], eps: float = 0.0):
    """First user (by id) able to gain more than ``eps`` by deviating.

    Returns ``(user, deviation, gain)`` or ``None``.
    """
    state = GameState(scenario, profile)
    for n, cur in enumerate(state.profile):
        a = state.improving_move(n, eps)
        if a != cur:
            return n, a, state.qoe(n, a) - state.qoe(n, cur)
    return None


def is_epsilon_nash(scenario: Scenario, profile: Sequence[int], eps: float) -> bool:
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return first_violation(scenario, profile, eps) is None


def is_nash(scenario: Scenario, profile: Sequence[int]) -> bool:
    return is_epsilon_nash(scenario, profile, 0.0)


def run_dynamics(scenario: Scenario, cfg: DynamicsConfig = DynamicsConfig(),
                 init: Optional[Sequence[int]] = None) -> EquilibriumReport:
    """Round-robin improvement dynamics; one user moves at a time."""
    if init is None:
        init = all_local(scenario.n_users)
    state = GameState(scenario, init)
    order = list(range(scenario.n_users))
    rng = random.Random(cfg.shuffle_seed) if cfg.shuffle_seed is not None else None
    limit = cfg.rounds_limit(scenario)

    trace = [state.potential()]
    updates = rounds = 0
    converged = False
    while rounds < limit:
        rounds += 1
        if rng is not None:
            rng.shuffle(order)
        changed = False
        for n in order:
            a = state.improving_move(n, cfg.epsilon)
            if a != state.profile[n]:
                state.move(n, a)
                updates += 1
                trace.append(state.potential())
                changed = True
        if not changed:
            converged = True
            break

    return EquilibriumReport(
        profile=tuple(state.profile),
        updates=updates,
        rounds=rounds,
        converged=converged,
        potential_trace=tuple(trace),
        per_user_qoe=state.qoes(),
        social_cost=state.social_cost(),
        epsilon=cfg.epsilon,
    )


def run_best_response(scenario, cfg=DynamicsConfig(), init=None) -> EquilibriumReport:
    if cfg.epsilon != 0:
        raise ValueError("best response dynamics need epsilon == 0")
    return run_dynamics(scenario, cfg, init)


def run_epsilon_better_response(scenario, cfg=DynamicsConfig(epsilon=DEFAULT_EPSILON),
                                init=None) -> EquilibriumReport:
    if not cfg.epsilon > 0:
        raise ValueError("epsilon-better response needs epsilon > 0")
    return run_dynamics(scenario, cfg, init)


def update_bound(scenario: Scenario, eps: float) -> float:
    """Worst-case number of epsilon-better-response updates from all-local.

    Each update raises the potential by more than ``eps / max(lambda_T)``,
    and the potential never exceeds ``sum(c_local / lambda_T)``.
    """
    if not eps > 0:
        raise ValueError("eps must be > 0")
    users = scenario.users
    if not users:
        return 0.0
    lam_max = max(u.weight_time for u in users)
    total = sum(local_cost(u).weighted_cost / u.weight_time for u in users)
    return lam_max / eps * total
