"""Monte Carlo driver and a brute-force oracle for tiny cases.

A trial builds a fresh victim neighborhood, runs the staged attack end to
end, and records whether the final strike landed. Trial i draws from its
own substream derived from (seed, i), so results are reproducible and
earlier trials don't shift when n_trials grows.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from random import Random

from .attack import final_strike, grow, round_half_up
from .model import (
    AccountKind,
    AttackPlan,
    SimGraph,
    SimResult,
    VictimPolicy,
    acceptance_probability,
)

# Full brute force doubles per random bit; past this it stops being instant.
MAX_ENUMERATION_BITS = 20

VICTIM_ACTIVITY = 0.5
FRIEND_ACTIVITY = 0.5


class TooLarge(Exception):
    """The scenario has too many random bits to enumerate exhaustively."""


@dataclass(frozen=True)
class Scenario:
    name: str
    policy_name: str
    victim_degree: int
    visibility_fraction: float
    plan: AttackPlan
    friend_policy: VictimPolicy
    victim_policy: VictimPolicy
    root_activity: tuple[float, float] = (0.7, 1.0)
    fake_activity: tuple[float, float] = (0.0, 0.3)

    def validate(self) -> None:
        self.plan.validate()
        if self.victim_degree < 0:
            raise ValueError("victim_degree must be non-negative")
        if not 0.0 <= self.visibility_fraction <= 1.0:
            raise ValueError("visibility_fraction must be in [0, 1]")


def _trial_seed(seed: int, trial: int) -> int:
    digest = hashlib.sha256(f"{seed}:{trial}".encode("ascii")).digest()
    return int.from_bytes(digest, "big")


def trial_rng(seed: int, trial: int) -> Random:
    """The generator trial number ``trial`` draws from under ``seed``."""
    return Random(_trial_seed(seed, trial))


def _build_victim_world(scenario: Scenario) -> tuple[SimGraph, int, list[int]]:
    graph = SimGraph()
    victim_id = graph.add_account(AccountKind.GENUINE, "victim", VICTIM_ACTIVITY)
    friend_ids = []
    for i in range(scenario.victim_degree):
        fid = graph.add_account(
            AccountKind.GENUINE, f"friend-{i + 1}", FRIEND_ACTIVITY
        )
        graph.add_friendship(victim_id, fid)
        friend_ids.append(fid)
    return graph, victim_id, friend_ids


def run_trial(scenario: Scenario, rng: Random) -> tuple[bool, int, float]:
    """One full attack; returns (success, weak_found, mean mutuals at strike)."""
    graph, victim_id, friend_ids = _build_victim_world(scenario)
    friend_policies = {fid: scenario.friend_policy for fid in friend_ids}
    roots = grow(
        graph,
        scenario.plan,
        victim_id,
        rng,
        friend_policies,
        scenario.visibility_fraction,
        scenario.root_activity,
        scenario.fake_activity,
    )
    success, outcomes = final_strike(
        graph, roots, victim_id, scenario.victim_policy, scenario.plan, rng
    )
    accounts = graph.accounts
    weak_found = sum(
        1
        for fid in friend_ids
        if any(accounts[n].fake_provenance for n in graph.adjacency[fid])
    )
    mutual_mean = sum(o.mutual_count for o in outcomes) / len(outcomes)
    return success, weak_found, mutual_mean


def run_trials(scenario: Scenario, seed: int, n_trials: int) -> SimResult:
    scenario.validate()
    if n_trials < 1:
        raise ValueError("n_trials must be positive")
    successes = 0
    weak_total = 0
    mutual_total = 0.0
    # One generator reseeded per trial; same stream as trial_rng(seed, i)
    # but without the per-trial allocation.
    rng = Random()
    for i in range(n_trials):
        rng.seed(_trial_seed(seed, i))
        success, weak_found, mutual_mean = run_trial(scenario, rng)
        if success:
            successes += 1
        weak_total += weak_found
        mutual_total += mutual_mean
    return SimResult(
        trials=n_trials,
        successes=successes,
        success_rate=successes / n_trials,
        weak_found_mean=weak_total / n_trials,
        mutual_at_strike_mean=mutual_total / n_trials,
        seed=seed,
    )


def _require_degenerate(name: str, lo_hi: tuple[float, float]) -> float:
    lo, hi = lo_hi
    if lo != hi:
        raise ValueError(f"{name} must be a point range for exact enumeration")
    return lo


def enumerate_exact(scenario: Scenario) -> float:
    """Exact success probability by enumerating every random outcome.

    Only feasible when activity ranges are point values (no continuous
    randomness left) and the total bit count is small. Kept deliberately
    dumb: weight every probe-bit pattern individually and multiply out the
    per-root failure chances; no distributional shortcuts shared with the
    simulation path.
    """
    scenario.validate()
    root_score = _require_degenerate("root_activity", scenario.root_activity)
    fake_score = _require_degenerate("fake_activity", scenario.fake_activity)
    leaf_score = min(fake_score, root_score)

    plan = scenario.plan
    list2_size = round_half_up(
        scenario.visibility_fraction * scenario.victim_degree
    )
    k = min(plan.probe_budget, list2_size)
    n_bits = plan.n_networks * k + plan.n_roots_final
    if n_bits > MAX_ENUMERATION_BITS:
        raise TooLarge(f"{n_bits} random bits exceed {MAX_ENUMERATION_BITS}")

    q = acceptance_probability(scenario.friend_policy, 0, 0, leaf_score)
    # Strike probability given w probe acceptances wired to the root; the
    # assumed name is always one the victim knows.
    strike_fail = [
        1.0 - acceptance_probability(scenario.victim_policy, w, 1, root_score)
        for w in range(k + 1)
    ]
    # Probability of one specific pattern of w acceptances among k probes.
    pattern_w = [q**w * (1.0 - q) ** (k - w) for w in range(k + 1)]

    # Which roots get struck is a uniform draw, but every network's probe
    # count is an independent copy of the same process, so enumerating the
    # struck ones directly covers all selections.
    n_roots = plan.n_roots_final
    mask = (1 << k) - 1
    total = 0.0
    for path in range(1 << (n_roots * k)):
        weight = 1.0
        fail = 1.0
        for j in range(n_roots):
            w = ((path >> (j * k)) & mask).bit_count()
            weight *= pattern_w[w]
            fail *= strike_fail[w]
        total += weight * (1.0 - fail)
    return total


def _closed_form(scenario: Scenario) -> float:
    """Independent algebraic cross-check: P = 1 - E[1 - p(W)]^R with
    W ~ Binomial(k, q). Used by tests to vet the enumerator."""
    from math import comb

    root_score = _require_degenerate("root_activity", scenario.root_activity)
    fake_score = _require_degenerate("fake_activity", scenario.fake_activity)
    leaf_score = min(fake_score, root_score)
    plan = scenario.plan
    list2_size = round_half_up(
        scenario.visibility_fraction * scenario.victim_degree
    )
    k = min(plan.probe_budget, list2_size)
    q = acceptance_probability(scenario.friend_policy, 0, 0, leaf_score)
    expected_fail = sum(
        comb(k, w)
        * q**w
        * (1.0 - q) ** (k - w)
        * (1.0 - acceptance_probability(scenario.victim_policy, w, 1, root_score))
        for w in range(k + 1)
    )
    return 1.0 - expected_fail**plan.n_roots_final
