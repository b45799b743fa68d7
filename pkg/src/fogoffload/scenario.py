"""Seeded scenario generation and the scenario JSON format.

Random streams
--------------
Every draw comes from numpy's Philox4x64-10 counter-based generator keyed by
``SeedSequence(seed, spawn_key=(k,))``. Stream ``k = 0`` draws the fog
capacities; stream ``k = n + 1`` draws user ``n``, in this order:

    cpu_hz, size_bits, density, weight_energy, weight_time, cloud rate,
    WiFi fog index, WiFi rate, Bluetooth fog index, Bluetooth rate

Fixed weights still consume their draw, so overriding one knob does not
shift any other parameter of the same seed.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

import jsonschema
import numpy as np

from .model import (
    CLOUD_ID, Device, Link, Scenario, Server, ServerKind, Task, User, validate_scenario,
)

# Unit conversions of the published setup, applied once here.
MHZ, GHZ, MBPS = 1e6, 1e9, 1e6
BYTE = 8

CPU_HZ = (100 * MHZ, 1 * GHZ)
KAPPA, PHI, VARRHO = 0.33, 3.0, 0.1
TASK_BITS = (100 * BYTE, 0.5e6 * BYTE)
DENSITY = (100.0, 600.0)
CLOUD_HZ = 4 * GHZ
FOG_HZ = (2 * GHZ, 3 * GHZ)
LTE_BPS, LTE_J_PER_S = (4.85 * MBPS, 6.85 * MBPS), 2.605
WIFI_BPS, WIFI_J_PER_S = (2.01 * MBPS, 4.01 * MBPS), 1.22478
BT_BPS, BT_J_PER_S = (0.7 * MBPS, 2.1 * MBPS), 0.084
CLOUD_RTT_S = 0.2


class ScenarioFormatError(ValueError):
    """Scenario file does not match the schema."""


@dataclass(frozen=True)
class GeneratorConfig:
    n_users: int
    n_fog: int = 0
    cloud_rtt_s: float = CLOUD_RTT_S
    seed: int = 0
    weight_energy_range: tuple = (0.0, 1.0)
    weight_time_range: tuple = (0.5, 1.0)
    weight_energy: Optional[float] = None
    weight_time: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "weight_energy_range", tuple(self.weight_energy_range))
        object.__setattr__(self, "weight_time_range", tuple(self.weight_time_range))
        if not (isinstance(self.n_users, int) and self.n_users >= 1):
            raise ValueError(f"n_users must be a positive integer, got {self.n_users!r}")
        if not (isinstance(self.n_fog, int) and self.n_fog >= 0):
            raise ValueError(f"n_fog must be a non-negative integer, got {self.n_fog!r}")
        if not (math.isfinite(self.cloud_rtt_s) and self.cloud_rtt_s >= 0):
            raise ValueError(f"cloud_rtt_s must be >= 0, got {self.cloud_rtt_s!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        lo, hi = self.weight_energy_range
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"weight_energy_range must satisfy 0 <= lo <= hi <= 1, got {(lo, hi)}")
        lo, hi = self.weight_time_range
        if not 0 < lo <= hi <= 1:
            raise ValueError(f"weight_time_range must satisfy 0 < lo <= hi <= 1, got {(lo, hi)}")
        if self.weight_energy is not None and not 0 <= self.weight_energy <= 1:
            raise ValueError("weight_energy must be in [0, 1]")
        if self.weight_time is not None and not 0 < self.weight_time <= 1:
            raise ValueError("weight_time must be in (0, 1]")

    @classmethod
    def delay_sensitive(cls, **kw) -> GeneratorConfig:
        """Energy ignored, delay weighted fully."""
        return cls(weight_energy=0.0, weight_time=1.0, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> GeneratorConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown generator fields: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["weight_energy_range"] = list(self.weight_energy_range)
        d["weight_time_range"] = list(self.weight_time_range)
        return d

    def with_(self, **kw) -> GeneratorConfig:
        return replace(self, **kw)


def stream(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(k,))))


def generate(cfg: GeneratorConfig) -> Scenario:
    S = cfg.n_fog
    rng = stream(cfg.seed, 0)
    servers = [Server(CLOUD_ID, ServerKind.CLOUD, CLOUD_HZ)]
    servers += [Server(s, ServerKind.FOG, float(rng.uniform(*FOG_HZ))) for s in range(1, S + 1)]

    users = []
    for n in range(cfg.n_users):
        rng = stream(cfg.seed, n + 1)
        cpu = float(rng.uniform(*CPU_HZ))
        size = float(rng.uniform(*TASK_BITS))
        density = float(rng.uniform(*DENSITY))
        le = float(rng.uniform(*cfg.weight_energy_range))
        lt = float(rng.uniform(*cfg.weight_time_range))
        if cfg.weight_energy is not None:
            le = float(cfg.weight_energy)
        if cfg.weight_time is not None:
            lt = float(cfg.weight_time)
        links = {CLOUD_ID: Link(float(rng.uniform(*LTE_BPS)), LTE_J_PER_S, float(cfg.cloud_rtt_s))}
        if S >= 1:
            wifi = 1 + int(rng.integers(S))
            links[wifi] = Link(float(rng.uniform(*WIFI_BPS)), WIFI_J_PER_S, 0.0)
            if S >= 2:
                # distinct from the WiFi node: draw among the remaining S - 1
                bt = 1 + int(rng.integers(S - 1))
                if bt >= wifi:
                    bt += 1
                links[bt] = Link(float(rng.uniform(*BT_BPS)), BT_J_PER_S, 0.0)
        users.append(User(
            id=n,
            task=Task(size, density),
            device=Device(cpu, KAPPA, PHI, VARRHO),
            weight_energy=le,
            weight_time=lt,
            links=dict(sorted(links.items())),
        ))
    label = f"N={cfg.n_users} S={S} rtt={cfg.cloud_rtt_s} seed={cfg.seed}"
    return Scenario(users, servers, label)


# --- JSON -----------------------------------------------------------------

_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}


def _obj(props: dict) -> dict:
    return {"type": "object", "properties": props, "required": list(props),
            "additionalProperties": False}


SCENARIO_SCHEMA = _obj({
    "label": {"type": "string"},
    "servers": {"type": "array", "items": _obj({
        "id": {"type": "integer", "minimum": 0},
        "kind": {"enum": ["cloud", "fog"]},
        "capacity_hz": _POS,
    })},
    "users": {"type": "array", "items": _obj({
        "id": {"type": "integer", "minimum": 0},
        "task": _obj({"size_bits": _POS, "density_cycles_per_bit": _POS}),
        "device": _obj({"cpu_hz": _POS, "kappa": _NONNEG, "phi": _NONNEG, "varrho": _NONNEG}),
        "weight_energy": {"type": "number", "minimum": 0, "maximum": 1},
        "weight_time": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "links": {"type": "array", "items": _obj({
            "server": {"type": "integer", "minimum": 0},
            "rate_bps": _POS,
            "energy_j_per_s": _NONNEG,
            "rtt_s": _NONNEG,
        })},
    })},
})

_validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out or "<root>"


def to_dict(scenario: Scenario) -> dict:
    return {
        "label": scenario.label,
        "servers": [{"id": s.id, "kind": s.kind.value, "capacity_hz": s.capacity_hz}
                    for s in scenario.servers],
        "users": [{
            "id": u.id,
            "task": {"size_bits": u.task.size_bits,
                     "density_cycles_per_bit": u.task.density_cycles_per_bit},
            "device": {"cpu_hz": u.device.cpu_hz, "kappa": u.device.kappa,
                       "phi": u.device.phi, "varrho": u.device.varrho},
            "weight_energy": u.weight_energy,
            "weight_time": u.weight_time,
            "links": [{"server": s, "rate_bps": l.rate_bps,
                       "energy_j_per_s": l.energy_j_per_s, "rtt_s": l.rtt_s}
                      for s, l in sorted(u.links.items())],
        } for u in scenario.users],
    }


def from_dict(d) -> Scenario:
    err = next(iter(sorted(_validator.iter_errors(d), key=lambda e: list(e.absolute_path))), None)
    if err is not None:
        raise ScenarioFormatError(f"{_path(err.absolute_path)}: {err.message}")
    servers = [Server(int(s["id"]), ServerKind(s["kind"]), float(s["capacity_hz"])) for s in d["servers"]]
    users = []
    for i, u in enumerate(d["users"]):
        links = {}
        for j, l in enumerate(u["links"]):
            if l["server"] in links:
                raise ScenarioFormatError(f"users[{i}].links[{j}].server: duplicate server {l['server']}")
            links[int(l["server"])] = Link(float(l["rate_bps"]), float(l["energy_j_per_s"]), float(l["rtt_s"]))
        t, dev = u["task"], u["device"]
        users.append(User(
            id=int(u["id"]),
            task=Task(float(t["size_bits"]), float(t["density_cycles_per_bit"])),
            device=Device(float(dev["cpu_hz"]), float(dev["kappa"]), float(dev["phi"]), float(dev["varrho"])),
            weight_energy=float(u["weight_energy"]),
            weight_time=float(u["weight_time"]),
            links=dict(sorted(links.items())),
        ))
    scenario = Scenario(users, servers, d["label"])
    problems = validate_scenario(scenario)
    if problems:
        raise ScenarioFormatError("; ".join(problems))
    return scenario


def _reject_constant(name):
    raise ScenarioFormatError(f"non-finite number {name} not allowed")


def loads(text: str) -> Scenario:
    try:
        d = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ScenarioFormatError(f"malformed JSON: {e}") from None
    return from_dict(d)


def dumps(scenario: Scenario) -> str:
    return json.dumps(to_dict(scenario), indent=2, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(scenario: Scenario, path) -> None:
    write_atomic(path, dumps(scenario))


def load(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
