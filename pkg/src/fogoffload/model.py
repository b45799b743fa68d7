"""Domain types for a static snapshot of the fog-cloud offloading game.

All quantities are SI: bits, cycles, Hz, seconds, joules, bits/s.

A strategy is a plain ``int``: ``LOCAL`` (-1) for on-device execution, or the
id of the server the task is offloaded to. A profile is a tuple holding one
strategy per user, indexed by user id.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

LOCAL = -1
CLOUD_ID = 0

Strategy = int
OffloadProfile = tuple


class InfeasibleProfileError(ValueError):
    """A profile assigns a user to a server it cannot reach."""


@dataclass(frozen=True)
class Task:
    size_bits: float
    density_cycles_per_bit: float

    @property
    def workload(self) -> float:
        """Required CPU cycles."""
        return self.size_bits * self.density_cycles_per_bit


@dataclass(frozen=True)
class Device:
    cpu_hz: float
    kappa: float = 0.33
    phi: float = 3.0
    varrho: float = 0.1


@dataclass(frozen=True)
class Link:
    rate_bps: float
    energy_j_per_s: float
    rtt_s: float = 0.0


class ServerKind(enum.Enum):
    CLOUD = "cloud"
    FOG = "fog"


@dataclass(frozen=True)
class Server:
    id: int
    kind: ServerKind
    capacity_hz: float

    @property
    def is_cloud(self) -> bool:
        return self.kind is ServerKind.CLOUD


@dataclass(frozen=True)
class User:
    id: int
    task: Task
    device: Device
    weight_energy: float
    weight_time: float
    # server id -> link; a key is present iff the user can reach that server
    links: Mapping[int, Link] = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    users: tuple
    servers: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "servers", tuple(self.servers))

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_fog(self) -> int:
        return sum(1 for s in self.servers if not s.is_cloud)

    def server(self, sid: int) -> Server:
        return self.servers[sid]

    def without_fog_links(self) -> Scenario:
        """Copy in which every user can only reach the cloud."""
        users = [
            User(u.id, u.task, u.device, u.weight_energy, u.weight_time,
                 {s: l for s, l in u.links.items() if s == CLOUD_ID})
            for u in self.users
        ]
        return Scenario(users, self.servers, self.label + "/cloud-only")


def all_local(n_users: int) -> tuple:
    return (LOCAL,) * n_users


def feasible_strategies(user: User) -> list:
    """Local first, then reachable servers by ascending id."""
    return [LOCAL, *sorted(user.links)]


def _positive(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x) and x > 0


def _nonneg(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x) and x >= 0


def validate_scenario(scenario: Scenario) -> list:
    """Return a list of human-readable violations; empty means well-formed."""
    errs = []
    servers = scenario.servers
    server_ids = set()
    for i, srv in enumerate(servers):
        where = f"servers[{i}]"
        if srv.id != i:
            errs.append(f"{where}: id {srv.id} out of order (expected {i})")
        server_ids.add(srv.id)
        if not _positive(srv.capacity_hz):
            errs.append(f"{where}: capacity_hz must be > 0")
        if not isinstance(srv.kind, ServerKind):
            errs.append(f"{where}: unknown kind {srv.kind!r}")
    clouds = [s.id for s in servers if s.kind is ServerKind.CLOUD]
    if clouds != [CLOUD_ID]:
        errs.append(f"scenario: exactly one cloud server with id 0 required, found {clouds}")

    for i, u in enumerate(scenario.users):
        where = f"users[{i}]"
        if u.id != i:
            errs.append(f"{where}: id {u.id} out of order (expected {i})")
        if not _positive(u.task.size_bits):
            errs.append(f"{where}: size_bits must be > 0")
        if not _positive(u.task.density_cycles_per_bit):
            errs.append(f"{where}: density_cycles_per_bit must be > 0")
        if not _positive(u.device.cpu_hz):
            errs.append(f"{where}: cpu_hz must be > 0")
        for name in ("kappa", "phi", "varrho"):
            if not _nonneg(getattr(u.device, name)):
                errs.append(f"{where}: {name} must be >= 0")
        if not (_nonneg(u.weight_energy) and u.weight_energy <= 1):
            errs.append(f"{where}: weight_energy must be in [0, 1]")
        if not (_positive(u.weight_time) and u.weight_time <= 1):
            errs.append(f"{where}: weight_time must be > 0 and <= 1")
        for sid, link in u.links.items():
            lw = f"{where}.links[server={sid}]"
            if sid not in server_ids:
                errs.append(f"{lw}: unknown server {sid}")
            if not _positive(link.rate_bps):
                errs.append(f"{lw}: rate_bps must be > 0")
            if not _nonneg(link.energy_j_per_s):
                errs.append(f"{lw}: energy_j_per_s must be >= 0")
            if not _nonneg(link.rtt_s):
                errs.append(f"{lw}: rtt_s must be >= 0")
    return errs


def profile_violations(scenario: Scenario, profile: Sequence[int]) -> list:
    """Feasibility of a strategy profile against the scenario's connectivity."""
    if len(profile) != scenario.n_users:
        return [f"profile has {len(profile)} entries for {scenario.n_users} users"]
    errs = []
    for u, a in zip(scenario.users, profile):
        if a != LOCAL and a not in u.links:
            errs.append(f"user {u.id}: server {a} is not reachable")
    return errs


def check_profile(scenario: Scenario, profile: Sequence[int]) -> tuple:
    errs = profile_violations(scenario, profile)
    if errs:
        raise InfeasibleProfileError("; ".join(errs))
    return tuple(profile)
