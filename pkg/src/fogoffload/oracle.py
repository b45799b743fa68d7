"""Exhaustive ground truth on small games: equilibria, social optimum, PoA.

Large games fall back to a seeded coordinate-descent estimate of the social
optimum, flagged ``exact=False``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .cost import local_cost, share_term, standalone_min_cost
from .game import DynamicsConfig, GameState, run_best_response
from .model import LOCAL, Scenario, all_local, feasible_strategies

DEFAULT_CAP = 10**6


class EnumerationCapError(ValueError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"strategy space has {size} profiles, above the cap of {cap}")
        self.size = size
        self.cap = cap


def profile_space_size(scenario: Scenario) -> int:
    return math.prod(len(u.links) + 1 for u in scenario.users)


def enumerate_profiles(scenario: Scenario, cap: int = DEFAULT_CAP) -> Iterator[tuple]:
    """Every feasible profile once, in lexicographic order of the strategy lists."""
    size = profile_space_size(scenario)
    if size > cap:
        raise EnumerationCapError(size, cap)
    return itertools.product(*(feasible_strategies(u) for u in scenario.users))


def _scan(scenario: Scenario, cap: int):
    """(profile, social cost, is NE) for the whole strategy space."""
    for p in enumerate_profiles(scenario, cap):
        state = GameState(scenario, p)
        ne = all(state.improving_move(n, 0.0) == a for n, a in enumerate(p))
        yield p, state.social_cost(), ne


def enumerate_equilibria(scenario: Scenario, cap: int = DEFAULT_CAP) -> list:
    eq = [p for p, _, ne in _scan(scenario, cap) if ne]
    if not eq:
        # a finite potential game always has a pure equilibrium
        raise AssertionError(f"no pure NE found in {scenario.label!r}")
    return eq


def _marginal(state: GameState, n: int, a: int) -> float:
    """Social-cost contribution of user ``n`` playing ``a``, others fixed."""
    if a == LOCAL:
        return state.local[n]
    total = state.cost(n, a)
    srv = state.scenario.servers[a]
    if not srv.is_cloud:
        users, wl = state.scenario.users, state.workload
        for m in state.members[a]:
            if m != n:
                total += users[m].weight_time * share_term(wl[m], srv.capacity_hz, wl[n])
    return total


def coordinate_descent(scenario: Scenario, start: Sequence[int], max_rounds: int = 1000) -> tuple:
    """Round-robin single-user moves that lower the social cost, to a local minimum."""
    state = GameState(scenario, start)
    for _ in range(max_rounds):
        changed = False
        for n in range(scenario.n_users):
            cur = state.profile[n]
            best, best_c = cur, _marginal(state, n, cur)
            for a in state.options[n]:
                c = _marginal(state, n, a)
                if c < best_c:
                    best, best_c = a, c
            if best != cur:
                state.move(n, best)
                changed = True
        if not changed:
            break
    return tuple(state.profile), state.social_cost()


def social_optimum(scenario: Scenario, cap: int = DEFAULT_CAP, ne_profile=None,
                   n_starts: int = 10, seed: int = 0) -> tuple:
    """Return ``(profile, cost, exact)``."""
    if profile_space_size(scenario) <= cap:
        best_p, best_c = None, math.inf
        for p, c, _ in _scan(scenario, cap):
            if c < best_c:
                best_p, best_c = p, c
        return best_p, best_c, True

    rng = np.random.default_rng([seed, 0x50C1A1])
    options = [feasible_strategies(u) for u in scenario.users]
    starts = [all_local(scenario.n_users)]
    if ne_profile is not None:
        starts.append(tuple(ne_profile))
    for _ in range(n_starts):
        starts.append(tuple(opts[int(rng.integers(len(opts)))] for opts in options))

    best_p, best_c = None, math.inf
    for p0 in starts:
        # the starting point itself is a candidate
        for p, c in ((p0, GameState(scenario, p0).social_cost()), coordinate_descent(scenario, p0)):
            if c < best_c:
                best_p, best_c = p, c
    return best_p, best_c, False


def fog_in_degree(scenario: Scenario) -> int:
    """Most users able to reach any single fog node."""
    counts = {s.id: 0 for s in scenario.servers if not s.is_cloud}
    for u in scenario.users:
        for sid in u.links:
            if sid in counts:
                counts[sid] += 1
    return max(counts.values(), default=0)


def max_occupancy(scenario: Scenario, profile: Sequence[int]) -> int:
    fog = {s.id for s in scenario.servers if not s.is_cloud}
    counts = {}
    for a in profile:
        if a in fog:
            counts[a] = counts.get(a, 0) + 1
    return max(counts.values(), default=0)


@dataclass(frozen=True)
class PoAReport:
    worst_ne_cost: float
    best_ne_cost: float
    optimal_cost: float
    poa: float
    bound_occupancy: float
    bound_ratio: float
    bound: float
    exact: bool
    n_equilibria: Optional[int] = None
    worst_ne_occupancy: int = 0

    @property
    def bound_holds(self) -> bool:
        return self.poa <= self.bound

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bound_holds"] = self.bound_holds
        # heuristic runs only see one equilibrium, so the worst case is a lower bound
        d["worst_ne_is_lower_bound"] = not self.exact
        return d


def poa_bounds(scenario: Scenario) -> tuple:
    """``(occupancy branch, cost-ratio branch)`` of the PoA upper bound.

    The occupancy branch uses the fog in-degree, floored at 1: with no shared
    fog node the users do not interact and every NE is optimal.
    """
    occupancy = float(max(1, fog_in_degree(scenario)))
    local_total = sum(local_cost(u).weighted_cost for u in scenario.users)
    alone_total = sum(standalone_min_cost(scenario, n) for n in range(scenario.n_users))
    ratio = local_total / alone_total if alone_total > 0 else 1.0
    return occupancy, ratio


def poa(scenario: Scenario, cap: int = DEFAULT_CAP, heuristic: bool = True,
        dynamics: DynamicsConfig = DynamicsConfig()) -> PoAReport:
    occupancy, ratio = poa_bounds(scenario)
    if profile_space_size(scenario) <= cap:
        worst = best = opt = None
        n_eq = 0
        for p, c, ne in _scan(scenario, cap):
            if opt is None or c < opt:
                opt = c
            if ne:
                n_eq += 1
                if worst is None or c > worst[1]:
                    worst = (p, c)
                if best is None or c < best:
                    best = c
        if worst is None:
            raise AssertionError(f"no pure NE found in {scenario.label!r}")
        worst_p, worst_c = worst
        exact = True
    else:
        if not heuristic:
            raise EnumerationCapError(profile_space_size(scenario), cap)
        report = run_best_response(scenario, dynamics)
        worst_p, worst_c = report.profile, report.social_cost
        best, n_eq = worst_c, None
        _, opt, exact = social_optimum(scenario, cap, ne_profile=report.profile)
    return PoAReport(
        worst_ne_cost=worst_c,
        best_ne_cost=best,
        optimal_cost=opt,
        poa=worst_c / opt,
        bound_occupancy=occupancy,
        bound_ratio=ratio,
        bound=min(occupancy, ratio),
        exact=exact,
        n_equilibria=n_eq,
        worst_ne_occupancy=max_occupancy(scenario, worst_p),
    )
