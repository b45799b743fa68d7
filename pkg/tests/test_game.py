import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_scenario, make_user, scenario_and_profile
from fogoffload import cost
from fogoffload.game import (
    DynamicsConfig, best_response, first_violation, is_epsilon_nash, is_nash, potential,
    run_best_response, run_dynamics, run_epsilon_better_response, update_bound,
)
from fogoffload.model import CLOUD_ID, LOCAL, Link, all_local, feasible_strategies
from fogoffload.scenario import GeneratorConfig, generate
from reference import Reference

PROFITABLE = Link(6e6, 0.1, 0.0)


def big_task_user(uid, links, **kw):
    kw = {"size": 4e6, "density": 600.0, "cpu": 1e8, **kw}
    return make_user(uid, links=links, **kw)


def test_potential_of_all_local_is_zero():
    s = generate(GeneratorConfig(10, 3, seed=1))
    assert potential(s, all_local(10)) == 0.0


@pytest.mark.parametrize("strat", [LOCAL, CLOUD_ID, 1])
def test_single_user_potential_is_scaled_qoe(strat):
    u = big_task_user(0, {CLOUD_ID: PROFITABLE, 1: PROFITABLE}, lt=0.6)
    s = make_scenario([u], fog_caps=[2e9])
    q = cost.qoe(s, 0, strat, (strat,))
    assert potential(s, (strat,)) == pytest.approx(q / 0.6, rel=1e-14, abs=0)


@settings(max_examples=200)
@given(scenario_and_profile())
def test_potential_matches_reference(case):
    s, p = case
    assert math.isclose(potential(s, p), Reference(s).potential(p), rel_tol=1e-10, abs_tol=1e-12)


@settings(max_examples=300)
@given(scenario_and_profile(), st.data())
def test_weighted_potential_identity(case, data):
    s, others = case
    n = data.draw(st.integers(0, s.n_users - 1))
    opts = feasible_strategies(s.users[n])
    a, b = data.draw(st.sampled_from(opts)), data.draw(st.sampled_from(opts))
    with_a = others[:n] + (a,) + others[n + 1:]
    with_b = others[:n] + (b,) + others[n + 1:]
    dq = cost.qoe(s, n, a, with_a) - cost.qoe(s, n, b, with_b)
    dp = potential(s, with_a) - potential(s, with_b)
    assert abs(dq - s.users[n].weight_time * dp) <= 1e-9 * max(1.0, abs(dq))


def test_best_response_prefers_local_over_losses():
    u = make_user(0, size=1e4, links={CLOUD_ID: Link(1e5, 1000.0, 0.5)})
    s = make_scenario([u])
    assert best_response(s, 0, (CLOUD_ID,)) == LOCAL


def test_isolated_user_stays_local():
    s = make_scenario([make_user(0)])
    assert best_response(s, 0, (LOCAL,)) == LOCAL


def test_best_response_keeps_current_on_tie():
    # identical fog nodes: both offload options give the same QoE
    u = big_task_user(0, {1: PROFITABLE, 2: PROFITABLE})
    s = make_scenario([u], fog_caps=[2e9, 2e9])
    assert best_response(s, 0, (LOCAL,)) == 1
    assert best_response(s, 0, (2,)) == 2
    assert best_response(s, 0, (1,)) == 1


def _brute_argmax_value(s, n, others):
    ref = Reference(s)
    vals = []
    for a in [LOCAL, *sorted(s.users[n].links)]:
        p = others[:n] + (a,) + others[n + 1:]
        vals.append(ref.qoe(n, ref.matrix(p)))
    return max(vals)


def test_two_users_one_fog_matches_exhaustive_argmax():
    users = [big_task_user(0, {1: PROFITABLE}), big_task_user(1, {1: PROFITABLE}, cpu=1.5e8)]
    s = make_scenario(users, fog_caps=[2.5e9])
    ref = Reference(s)
    for others in [(LOCAL, LOCAL), (LOCAL, 1), (1, LOCAL), (1, 1)]:
        for n in range(2):
            br = best_response(s, n, others)
            p = others[:n] + (br,) + others[n + 1:]
            assert ref.qoe(n, ref.matrix(p)) == pytest.approx(_brute_argmax_value(s, n, others), rel=1e-12)
    # both fit profitably even when sharing
    assert best_response(s, 1, (1, LOCAL)) == 1


@given(scenario_and_profile())
def test_best_response_maximises_qoe(case):
    s, others = case
    for n in range(s.n_users):
        br = best_response(s, n, others)
        q = cost.qoe(s, n, br, others)
        assert all(q >= cost.qoe(s, n, a, others) for a in feasible_strategies(s.users[n]))


def test_single_user_converges_quickly():
    u = big_task_user(0, {CLOUD_ID: PROFITABLE, 1: PROFITABLE})
    s = make_scenario([u], fog_caps=[2e9])
    r = run_best_response(s)
    assert r.converged and r.rounds <= 2
    best = max(feasible_strategies(u), key=lambda a: cost.qoe(s, 0, a, (LOCAL,)))
    assert r.profile == (best,)


@pytest.mark.parametrize("seed", range(0, 100, 7))
def test_best_response_reaches_nash(seed):
    s = generate(GeneratorConfig(n_users=10 + seed % 41, n_fog=seed % 11, seed=seed))
    r = run_best_response(s)
    assert r.converged
    assert is_nash(s, r.profile)
    assert np.all(np.diff(r.potential_trace) > 0)
    assert len(r.potential_trace) == r.updates + 1
    assert r.social_cost == pytest.approx(cost.social_cost(s, r.profile), rel=1e-12)
    assert r.per_user_qoe == tuple(cost.qoe(s, n, a, r.profile) for n, a in enumerate(r.profile))


def test_shuffled_order_also_converges_and_is_deterministic():
    s = generate(GeneratorConfig(40, 8, seed=5))
    cfg = DynamicsConfig(shuffle_seed=99)
    r1, r2 = run_dynamics(s, cfg), run_dynamics(s, cfg)
    assert r1 == r2
    assert r1.converged and is_nash(s, r1.profile)


def test_identical_inputs_identical_reports():
    s = generate(GeneratorConfig(50, 10, seed=11))
    assert run_best_response(s) == run_best_response(s)
    eps = DynamicsConfig(epsilon=0.05)
    assert run_epsilon_better_response(s, eps) == run_epsilon_better_response(s, eps)


def test_max_rounds_exhaustion_is_reported():
    s = generate(GeneratorConfig(50, 10, seed=2))
    r = run_dynamics(s, DynamicsConfig(max_rounds=1))
    assert not r.converged and r.rounds == 1


def test_custom_initial_profile():
    s = generate(GeneratorConfig(30, 5, seed=8))
    start = tuple(CLOUD_ID for _ in range(30))
    r = run_best_response(s, init=start)
    assert r.converged and is_nash(s, r.profile)


def test_config_validation():
    with pytest.raises(ValueError):
        DynamicsConfig(epsilon=-1)
    with pytest.raises(ValueError):
        DynamicsConfig(max_rounds=0)
    s = make_scenario([make_user(0)])
    with pytest.raises(ValueError):
        run_epsilon_better_response(s, DynamicsConfig(epsilon=0.0))
    with pytest.raises(ValueError):
        run_best_response(s, DynamicsConfig(epsilon=0.1))


def test_huge_epsilon_makes_no_updates():
    s = generate(GeneratorConfig(30, 5, seed=4))
    r = run_epsilon_better_response(s, DynamicsConfig(epsilon=1e6))
    assert r.updates == 0 and r.profile == all_local(30) and r.converged


@pytest.mark.parametrize("eps", [0.01, 0.1, 1.0])
def test_epsilon_dynamics_are_epsilon_nash_within_bound(eps):
    for seed in range(20):
        s = generate(GeneratorConfig(30, 6, seed=seed))
        r = run_epsilon_better_response(s, DynamicsConfig(epsilon=eps))
        assert r.converged
        assert is_epsilon_nash(s, r.profile, eps)
        assert r.updates <= update_bound(s, eps)
        lam = max(u.weight_time for u in s.users)
        assert np.all(np.diff(r.potential_trace) > eps / lam)


def test_small_epsilon_tracks_exact_equilibrium_qoe():
    close = total = 0
    for seed in range(20):
        s = generate(GeneratorConfig(50, 10, seed=seed))
        exact = run_best_response(s).per_user_qoe
        approx = run_epsilon_better_response(s, DynamicsConfig(epsilon=0.01)).per_user_qoe
        close += sum(abs(a - b) <= 0.01 for a, b in zip(exact, approx))
        total += len(exact)
    assert close / total >= 0.95


def test_is_nash_examples():
    u = big_task_user(0, {CLOUD_ID: PROFITABLE})
    s = make_scenario([u])
    assert is_nash(s, (CLOUD_ID,))
    assert not is_nash(s, (LOCAL,))
    loser = make_user(0, size=1e4, links={CLOUD_ID: Link(1e5, 1000.0, 0.5)})
    s2 = make_scenario([loser])
    assert not is_nash(s2, (CLOUD_ID,))
    assert first_violation(s2, (CLOUD_ID,))[:2] == (0, LOCAL)


@given(scenario_and_profile(), st.floats(0, 10))
def test_epsilon_nash_consistent_with_nash(case, eps):
    s, p = case
    assert is_epsilon_nash(s, p, 0.0) == is_nash(s, p)
    if is_nash(s, p):
        assert is_epsilon_nash(s, p, eps)


def test_update_bound_formula():
    users = [make_user(0, lt=0.5), make_user(1, lt=1.0, size=4e5)]
    s = make_scenario(users)
    c = [cost.local_cost(u).weighted_cost for u in users]
    assert update_bound(s, 0.1) == pytest.approx(1.0 / 0.1 * (c[0] / 0.5 + c[1] / 1.0), rel=1e-14)
