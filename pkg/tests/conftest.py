import pytest
from hypothesis import strategies as st

from fogoffload.model import (
    CLOUD_ID, LOCAL, Device, Link, Scenario, Server, ServerKind, Task, User,
)


def make_user(uid, size=8e5, density=300.0, cpu=1e9, links=None, le=1.0, lt=1.0,
              kappa=0.33, phi=3.0, varrho=0.1):
    return User(uid, Task(size, density), Device(cpu, kappa, phi, varrho), le, lt, links or {})


def make_scenario(users, fog_caps=(), cloud_hz=4e9, label="test"):
    servers = [Server(CLOUD_ID, ServerKind.CLOUD, cloud_hz)]
    servers += [Server(i + 1, ServerKind.FOG, c) for i, c in enumerate(fog_caps)]
    return Scenario(users, servers, label)


finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def scenarios(draw, max_users=6, max_fog=3):
    """Arbitrary well-formed scenarios with random connectivity and weights."""
    n_fog = draw(st.integers(0, max_fog))
    fog = [draw(st.floats(1e8, 5e9, **finite)) for _ in range(n_fog)]
    users = []
    for n in range(draw(st.integers(1, max_users))):
        ids = draw(st.sets(st.integers(0, n_fog), max_size=n_fog + 1))
        links = {s: Link(draw(st.floats(1e5, 1e7, **finite)),
                         draw(st.floats(0, 3, **finite)),
                         draw(st.floats(0, 1, **finite)))
                 for s in sorted(ids)}
        users.append(make_user(
            n,
            size=draw(st.floats(1e3, 4e6, **finite)),
            density=draw(st.floats(10, 1000, **finite)),
            cpu=draw(st.floats(1e8, 2e9, **finite)),
            links=links,
            le=draw(st.floats(0, 1, **finite)),
            lt=draw(st.floats(0.01, 1, **finite)),
        ))
    return make_scenario(users, fog)


@st.composite
def scenario_and_profile(draw, **kw):
    s = draw(scenarios(**kw))
    profile = tuple(draw(st.sampled_from([LOCAL, *sorted(u.links)])) for u in s.users)
    return s, profile


@pytest.fixture
def lte_user():
    """The worked LTE offloading example: z=800 kbit, 300 cycles/bit, 1 GHz device."""
    link = Link(5.85e6, 2.605, 0.2)
    return make_user(0, links={CLOUD_ID: link})


ACCEPTANCE_PREFIX = "tests/test_acceptance.py::test_criterion_"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if nodeid.startswith(ACCEPTANCE_PREFIX) and rep.when == "call":
                lines.append((nodeid[len(ACCEPTANCE_PREFIX):], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  criterion {name}")
