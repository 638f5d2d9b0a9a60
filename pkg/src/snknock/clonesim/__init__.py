"""Simulator for the staged profile-cloning attack: grow fake star
networks, manufacture mutual friends through weak accounts, then strike the
victim with renamed roots, under configurable victim defense policies."""

from .model import (
    AccountKind,
    AttackPlan,
    InvalidPlan,
    PolicyKind,
    SimAccount,
    SimGraph,
    SimResult,
    UnknownAccount,
    VictimPolicy,
    acceptance_probability,
    validate_graph,
)
from .attack import (
    StrikeOutcome,
    build_attacker_network,
    connect_weak,
    final_strike,
    grow,
    harvest_list2,
    probe_weak,
)
from .montecarlo import Scenario, TooLarge, enumerate_exact, run_trials
from .scenario import ScenarioError, load_scenarios, parse_scenarios

__all__ = [
    "AccountKind",
    "AttackPlan",
    "InvalidPlan",
    "PolicyKind",
    "Scenario",
    "ScenarioError",
    "SimAccount",
    "SimGraph",
    "SimResult",
    "StrikeOutcome",
    "TooLarge",
    "UnknownAccount",
    "VictimPolicy",
    "acceptance_probability",
    "build_attacker_network",
    "connect_weak",
    "enumerate_exact",
    "final_strike",
    "grow",
    "harvest_list2",
    "load_scenarios",
    "parse_scenarios",
    "probe_weak",
    "run_trials",
    "validate_graph",
]
