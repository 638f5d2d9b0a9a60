"""The four attack stages, as graph operations.

Prepare: build a star of fakes around a groomed root. Hidden movement:
harvest the victim's visible friends, probe them with fakes, and wire every
network member to whoever accepted (a weak account). Grow: repeat to stock
multiple networks. Strike: rename a few roots to names the victim knows and
send the requests one by one, stopping at the first acceptance.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .model import (
    AccountKind,
    AttackPlan,
    InvalidPlan,
    SimGraph,
    VictimPolicy,
    acceptance_probability,
)

DEFAULT_ROOT_ACTIVITY = (0.7, 1.0)
DEFAULT_FAKE_ACTIVITY = (0.0, 0.3)


def _sample_range(rng: Random, lo_hi: tuple[float, float]) -> float:
    lo, hi = lo_hi
    return lo if lo == hi else rng.uniform(lo, hi)


def round_half_up(x: float) -> int:
    return int(x + 0.5)


def build_attacker_network(
    graph: SimGraph,
    rng: Random,
    list1_size: int,
    root_activity: tuple[float, float] = DEFAULT_ROOT_ACTIVITY,
    fake_activity: tuple[float, float] = DEFAULT_FAKE_ACTIVITY,
    joined_tick: int = 0,
) -> tuple[list[int], int]:
    """Add one star network of fakes; returns (member ids, root id).

    The root gets a high activity score (groomed with posts and comments
    from its own fakes); leaves stay low, and never above the root.
    """
    if list1_size < 2:
        raise InvalidPlan("list1_size must be at least 2")
    root_score = _sample_range(rng, root_activity)
    root_id = graph.add_account(
        AccountKind.ROOT, f"root-{graph._next_id}", root_score, joined_tick
    )
    members = [root_id]
    for _ in range(list1_size - 1):
        leaf_score = min(_sample_range(rng, fake_activity), root_score)
        leaf_id = graph.add_account(
            AccountKind.FAKE, f"fake-{graph._next_id}", leaf_score, joined_tick
        )
        graph.add_friendship(root_id, leaf_id)
        members.append(leaf_id)
    return members, root_id


def harvest_list2(
    graph: SimGraph, victim_id: int, visibility_fraction: float, rng: Random
) -> list[int]:
    """The victim-adjacent accounts the attacker can discover: a uniform
    sample of round(visibility_fraction * degree) of the victim's friends."""
    if not 0.0 <= visibility_fraction <= 1.0:
        raise ValueError("visibility_fraction must be in [0, 1]")
    friends = sorted(graph.friends(victim_id))
    size = round_half_up(visibility_fraction * len(friends))
    return rng.sample(friends, size)


def probe_weak(
    graph: SimGraph,
    list2: list[int],
    prober_ids: list[int],
    account_policies: dict[int, VictimPolicy],
    rng: Random,
) -> set[int]:
    """Send one stranger request to each harvested account; whoever accepts
    is recorded weak. Probers carry zero mutual friends and an unfamiliar
    name, so only their visible activity helps them."""
    weak: set[int] = set()
    n_probers = len(prober_ids)
    for i, target in enumerate(list2):
        prober = prober_ids[i % n_probers]
        p = acceptance_probability(
            account_policies[target], 0, 0, graph.accounts[prober].activity_score
        )
        graph.send_request(prober, target)
        accepted = rng.random() < p
        graph.resolve_request(prober, target, accepted)
        if accepted:
            weak.add(target)
    return weak


def connect_weak(graph: SimGraph, list1_ids: list[int], weak_ids: set[int]) -> None:
    """Friend every network member (root included) with every weak account.
    One accepted stranger implies the rest get accepted too; edge adds are
    idempotent, so reruns change nothing."""
    for member in list1_ids:
        for weak in weak_ids:
            graph.add_friendship(member, weak)


def grow(
    graph: SimGraph,
    plan: AttackPlan,
    victim_id: int,
    rng: Random,
    friend_policies: dict[int, VictimPolicy],
    visibility_fraction: float = 1.0,
    root_activity: tuple[float, float] = DEFAULT_ROOT_ACTIVITY,
    fake_activity: tuple[float, float] = DEFAULT_FAKE_ACTIVITY,
) -> list[int]:
    """Run prepare + hidden movement plan.n_networks times; returns the
    root ids, one per network."""
    plan.validate()
    roots = []
    for tick in range(1, plan.n_networks + 1):
        members, root_id = build_attacker_network(
            graph, rng, plan.list1_size, root_activity, fake_activity, tick
        )
        list2 = harvest_list2(graph, victim_id, visibility_fraction, rng)
        probed = list2[: plan.probe_budget]
        if probed:
            leaves = [m for m in members if m != root_id]
            weak = probe_weak(graph, probed, leaves, friend_policies, rng)
            connect_weak(graph, members, weak)
        roots.append(root_id)
    return roots


@dataclass(frozen=True)
class StrikeOutcome:
    root_id: int
    assumed_name: str
    clone_kind: str  # same_site when the name duplicates a genuine account
    mutual_count: int
    probability: float
    attempted: bool
    accepted: bool


def final_strike(
    graph: SimGraph,
    root_ids: list[int],
    victim_id: int,
    policy: VictimPolicy,
    plan: AttackPlan,
    rng: Random,
) -> tuple[bool, list[StrikeOutcome]]:
    """Rename n_roots_final roots to known names and send the requests
    sequentially, stopping at the first acceptance."""
    plan.validate()
    if len(root_ids) < plan.n_roots_final:
        raise InvalidPlan(
            f"need {plan.n_roots_final} roots, have {len(root_ids)}"
        )
    selected = rng.sample(list(root_ids), plan.n_roots_final)
    names = rng.sample(list(plan.known_name_pool), plan.n_roots_final)
    genuine_names = {
        account.display_name
        for account in graph.accounts.values()
        if account.kind is AccountKind.GENUINE
    }
    for root_id, name in zip(selected, names):
        graph.rename(root_id, name)

    outcomes = []
    success = False
    for root_id, name in zip(selected, names):
        mutual = graph.mutual_count(root_id, victim_id)
        p = acceptance_probability(
            policy, mutual, 1, graph.accounts[root_id].activity_score
        )
        attempted = not success
        accepted = False
        if attempted:
            graph.send_request(root_id, victim_id)
            accepted = rng.random() < p
            graph.resolve_request(root_id, victim_id, accepted)
            if accepted:
                success = True
        outcomes.append(
            StrikeOutcome(
                root_id=root_id,
                assumed_name=name,
                clone_kind="same_site" if name in genuine_names else "cross_site",
                mutual_count=mutual,
                probability=p,
                attempted=attempted,
                accepted=accepted,
            )
        )
    return success, outcomes
