"""Fog-cloud computation offloading game: costs, dynamics, equilibrium analysis."""

from .cost import alpha, compute_delay, local_cost, offload_cost, qoe, social_cost, user_cost
from .game import (
    DynamicsConfig, EquilibriumReport, best_response, is_epsilon_nash, is_nash, potential,
    run_best_response, run_dynamics, run_epsilon_better_response,
)
from .model import (
    CLOUD_ID, LOCAL, Device, Link, Scenario, Server, ServerKind, Task, User,
    feasible_strategies, validate_scenario,
)
from .oracle import enumerate_equilibria, enumerate_profiles, poa, social_optimum
from .scenario import GeneratorConfig, generate, load, save

__version__ = "0.1.0"
