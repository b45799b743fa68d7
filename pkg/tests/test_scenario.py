import json
import math

import numpy as np
import pytest

from fogoffload.model import CLOUD_ID, validate_scenario
from fogoffload.scenario import (
    BT_J_PER_S, LTE_J_PER_S, WIFI_J_PER_S, GeneratorConfig, ScenarioFormatError, dumps,
    generate, load, loads, save, to_dict,
)


def test_single_user_cloud_only():
    s = generate(GeneratorConfig(n_users=1, n_fog=0, seed=7))
    assert s.n_users == 1 and s.n_fog == 0
    assert list(s.users[0].links) == [CLOUD_ID]
    assert validate_scenario(s) == []


def test_generation_is_deterministic():
    cfg = GeneratorConfig(n_users=40, n_fog=6, seed=123)
    assert dumps(generate(cfg)) == dumps(generate(cfg))
    assert dumps(generate(cfg)) != dumps(generate(cfg.with_(seed=124)))


def test_fixed_weights_do_not_shift_other_draws():
    cfg = GeneratorConfig(n_users=10, n_fog=4, seed=5)
    a, b = generate(cfg), generate(cfg.with_(weight_energy=0.0, weight_time=1.0))
    for u, v in zip(a.users, b.users):
        assert u.task == v.task and u.device == v.device and u.links == v.links
        assert v.weight_energy == 0.0 and v.weight_time == 1.0


@pytest.mark.parametrize("n_fog, n_links", [(0, 1), (1, 2), (2, 3), (9, 3)])
def test_link_count(n_fog, n_links):
    s = generate(GeneratorConfig(n_users=30, n_fog=n_fog, seed=1))
    assert all(len(u.links) == n_links for u in s.users)
    assert all(CLOUD_ID in u.links for u in s.users)


def test_interfaces_and_constants():
    s = generate(GeneratorConfig(n_users=50, n_fog=5, cloud_rtt_s=0.4, seed=2))
    for u in s.users:
        assert u.device.kappa == 0.33 and u.device.phi == 3 and u.device.varrho == 0.1
        betas = sorted(l.energy_j_per_s for l in u.links.values())
        assert betas == [BT_J_PER_S, WIFI_J_PER_S, LTE_J_PER_S]
        for sid, l in u.links.items():
            assert l.rtt_s == (0.4 if sid == CLOUD_ID else 0.0)
    assert s.servers[0].capacity_hz == 4e9


def test_parameter_distributions():
    draws = {k: [] for k in ("cpu", "size", "density", "le", "lt", "lte", "wifi", "bt", "fog")}
    for seed in range(1, 101):
        s = generate(GeneratorConfig(n_users=200, n_fog=50, seed=seed))
        draws["fog"] += [srv.capacity_hz for srv in s.servers[1:]]
        for u in s.users:
            draws["cpu"].append(u.device.cpu_hz)
            draws["size"].append(u.task.size_bits)
            draws["density"].append(u.task.density_cycles_per_bit)
            draws["le"].append(u.weight_energy)
            draws["lt"].append(u.weight_time)
            for l in u.links.values():
                kind = {LTE_J_PER_S: "lte", WIFI_J_PER_S: "wifi", BT_J_PER_S: "bt"}[l.energy_j_per_s]
                draws[kind].append(l.rate_bps)
        assert validate_scenario(s) == []
    bounds = {
        "cpu": (1e8, 1e9), "size": (800, 4e6), "density": (100, 600), "le": (0, 1), "lt": (0.5, 1),
        "lte": (4.85e6, 6.85e6), "wifi": (2.01e6, 4.01e6), "bt": (0.7e6, 2.1e6), "fog": (2e9, 3e9),
    }
    for k, (lo, hi) in bounds.items():
        x = np.array(draws[k])
        assert x.min() >= lo and x.max() <= hi, k
        sigma = (hi - lo) / math.sqrt(12 * len(x))
        assert abs(x.mean() - (lo + hi) / 2) <= 3 * sigma, k


def test_fog_choices_are_distinct_and_uniformish():
    s = generate(GeneratorConfig(n_users=2000, n_fog=4, seed=3))
    counts = np.zeros(5)
    for u in s.users:
        fog = [sid for sid in u.links if sid != CLOUD_ID]
        assert len(set(fog)) == 2
        counts[fog] += 1
    assert counts[0] == 0
    assert np.all(np.abs(counts[1:] - 1000) < 3 * math.sqrt(1000))


@pytest.mark.parametrize("kw", [
    dict(n_users=0), dict(n_users=3, n_fog=-1), dict(n_users=3, cloud_rtt_s=-0.1),
    dict(n_users=3, seed=-1), dict(n_users=3, weight_time_range=(0.0, 1.0)),
    dict(n_users=3, weight_energy_range=(0.5, 0.2)), dict(n_users=3, weight_time=0.0),
])
def test_config_rejects_bad_values(kw):
    with pytest.raises(ValueError):
        GeneratorConfig(**kw)


def test_config_dict_round_trip():
    cfg = GeneratorConfig(n_users=5, n_fog=2, seed=9, weight_energy=0.0)
    assert GeneratorConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    with pytest.raises(ValueError):
        GeneratorConfig.from_dict({"n_users": 3, "priority": 1})


def test_save_load_round_trip(tmp_path):
    s = generate(GeneratorConfig(n_users=25, n_fog=4, seed=17))
    path = tmp_path / "s.json"
    save(s, path)
    assert load(path) == s
    assert path.read_text() == dumps(s)


def _doc():
    return to_dict(generate(GeneratorConfig(n_users=3, n_fog=2, seed=1)))


def test_negative_rate_names_field_path():
    d = _doc()
    d["users"][1]["links"][2]["rate_bps"] = -1
    with pytest.raises(ScenarioFormatError, match=r"users\[1\]\.links\[2\]\.rate_bps"):
        loads(json.dumps(d))


def test_unknown_field_rejected():
    d = _doc()
    d["users"][0]["priority"] = 3
    with pytest.raises(ScenarioFormatError, match="priority"):
        loads(json.dumps(d))


def test_non_finite_and_malformed_rejected():
    d = _doc()
    d["servers"][1]["capacity_hz"] = float("nan")
    with pytest.raises(ScenarioFormatError, match="non-finite"):
        loads(json.dumps(d))
    with pytest.raises(ScenarioFormatError, match="malformed"):
        loads("{not json")


def test_unknown_server_in_file_rejected():
    d = _doc()
    d["users"][0]["links"].append({"server": 9, "rate_bps": 1e6, "energy_j_per_s": 0.1, "rtt_s": 0.0})
    with pytest.raises(ScenarioFormatError, match="unknown server 9"):
        loads(json.dumps(d))


def test_weight_time_zero_in_file_rejected():
    d = _doc()
    d["users"][2]["weight_time"] = 0
    with pytest.raises(ScenarioFormatError, match=r"users\[2\]\.weight_time"):
        loads(json.dumps(d))
