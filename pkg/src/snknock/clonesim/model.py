"""Graph model and the victim acceptance-probability model.

Accounts carry a provenance kind: genuine users, throwaway fakes, and root
accounts (the groomed centers of fake star networks, which are themselves
fake provenance). The acceptance model turns the profile signals a victim
can see (mutual friends, a familiar name, visible activity) into a clamped
linear probability, with a profile-check penalty for thin-looking profiles
and a multiplicative gate for the voice challenge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class AccountKind(str, enum.Enum):
    GENUINE = "genuine"
    FAKE = "fake"
    ROOT = "root"


class PolicyKind(str, enum.Enum):
    NONE = "none"
    PROFILE_CHECK = "profile_check"
    VOICE_CHALLENGE = "voice_challenge"


class UnknownAccount(Exception):
    pass


class InvalidPlan(Exception):
    pass


@dataclass(slots=True)
class SimAccount:
    id: int
    kind: AccountKind
    display_name: str
    activity_score: float
    joined_tick: int = 0

    @property
    def fake_provenance(self) -> bool:
        return self.kind is not AccountKind.GENUINE


class SimGraph:
    """Undirected friendship graph plus pending friend requests.

    Friendships are symmetric, self-loops are rejected, and a pending
    request is dropped the moment the pair becomes friends. Display names
    change only through rename().
    """

    def __init__(self):
        self.accounts: dict[int, SimAccount] = {}
        self.adjacency: dict[int, set[int]] = {}
        self.pending: set[tuple[int, int]] = set()
        self._next_id = 1

    def add_account(
        self,
        kind: AccountKind,
        display_name: str,
        activity_score: float = 0.0,
        joined_tick: int = 0,
    ) -> int:
        account_id = self._next_id
        self._next_id += 1
        self.accounts[account_id] = SimAccount(
            id=account_id,
            kind=kind,
            display_name=display_name,
            activity_score=activity_score,
            joined_tick=joined_tick,
        )
        self.adjacency[account_id] = set()
        return account_id

    def _require(self, account_id: int) -> SimAccount:
        try:
            return self.accounts[account_id]
        except KeyError:
            raise UnknownAccount(f"no account {account_id}") from None

    def add_friendship(self, a: int, b: int) -> None:
        """Idempotent edge add; also clears any pending request for the pair."""
        if a == b:
            raise ValueError("self-friendship is not a thing")
        self._require(a)
        self._require(b)
        self.adjacency[a].add(b)
        self.adjacency[b].add(a)
        self.pending.discard((a, b))
        self.pending.discard((b, a))

    def send_request(self, from_id: int, to_id: int) -> None:
        if from_id == to_id:
            raise ValueError("cannot friend-request yourself")
        self._require(from_id)
        self._require(to_id)
        if to_id in self.adjacency[from_id]:
            raise ValueError(f"{from_id} and {to_id} are already friends")
        self.pending.add((from_id, to_id))

    def resolve_request(self, from_id: int, to_id: int, accepted: bool) -> None:
        self.pending.discard((from_id, to_id))
        if accepted:
            self.add_friendship(from_id, to_id)

    def rename(self, account_id: int, new_name: str) -> None:
        self._require(account_id).display_name = new_name

    def friends(self, account_id: int) -> set[int]:
        self._require(account_id)
        return self.adjacency[account_id]

    def degree(self, account_id: int) -> int:
        self._require(account_id)
        return len(self.adjacency[account_id])

    def mutual_count(self, a: int, b: int) -> int:
        self._require(a)
        self._require(b)
        return len(self.adjacency[a] & self.adjacency[b])

    def friendships(self) -> set[tuple[int, int]]:
        """Normalized (low, high) edge pairs."""
        return {
            (a, b) if a < b else (b, a)
            for a, neighbors in self.adjacency.items()
            for b in neighbors
        }


def validate_graph(graph: SimGraph) -> None:
    """Raise AssertionError if any structural invariant is broken. Meant to
    run in tests after each attack stage, not in the simulation hot path."""
    for a, neighbors in graph.adjacency.items():
        assert a in graph.accounts, f"edge endpoint {a} has no account"
        assert a not in neighbors, f"self-loop at {a}"
        for b in neighbors:
            assert b in graph.accounts, f"edge endpoint {b} has no account"
            assert a in graph.adjacency[b], f"asymmetric edge {a}-{b}"
    for from_id, to_id in graph.pending:
        assert from_id in graph.accounts and to_id in graph.accounts
        assert from_id != to_id, f"pending self-request at {from_id}"
        assert to_id not in graph.adjacency[from_id], (
            f"pending request {from_id}->{to_id} coexists with friendship"
        )


@dataclass(frozen=True)
class AttackPlan:
    """Attacker-side knobs: fake network size, replication count, probing
    budget per network, how many renamed roots strike, and the pool of
    names the victim would recognize."""

    list1_size: int
    n_networks: int
    probe_budget: int
    n_roots_final: int
    known_name_pool: tuple[str, ...]

    def validate(self) -> None:
        if self.list1_size < 2:
            raise InvalidPlan("list1_size must be at least 2 (root plus one fake)")
        if self.n_networks < 1:
            raise InvalidPlan("n_networks must be at least 1")
        if self.probe_budget < 0:
            raise InvalidPlan("probe_budget must not be negative")
        if not 1 <= self.n_roots_final <= self.n_networks:
            raise InvalidPlan(
                "n_roots_final must be between 1 and n_networks"
            )
        if len(self.known_name_pool) < self.n_roots_final:
            raise InvalidPlan(
                "known_name_pool must hold at least n_roots_final distinct names"
            )


@dataclass(frozen=True)
class VictimPolicy:
    """How an account decides on a friend request, per defense tier.

    none:            clamped linear score over the visible features.
    profile_check:   additionally penalizes thin-looking profiles.
    voice_challenge: profile check plus a multiplicative pass gate.
    """

    policy_kind: PolicyKind
    base_p: float
    w_mutual: float = 0.0
    mutual_saturation: int = 1
    w_name: float = 0.0
    w_activity: float = 0.0
    profile_penalty: float = 0.0
    p_voice_pass: float = 1.0


def acceptance_probability(
    policy: VictimPolicy,
    mutual_count: int,
    name_familiar: int,
    activity_score: float,
) -> float:
    """Probability the policy holder accepts a request with these features.

    Always in [0, 1]; non-decreasing in every feature and in p_voice_pass,
    non-increasing in profile_penalty. For identical features the tiers
    order none >= profile_check >= voice_challenge.
    """
    k = policy.mutual_saturation
    p = (
        policy.base_p
        + policy.w_mutual * (min(mutual_count, k) / k)
        + policy.w_name * name_familiar
        + policy.w_activity * activity_score
    )
    if p < 0.0:
        p = 0.0
    elif p > 1.0:
        p = 1.0
    if policy.policy_kind is not PolicyKind.NONE:
        p -= policy.profile_penalty * (1.0 - activity_score)
        if p < 0.0:
            p = 0.0
        elif p > 1.0:
            p = 1.0
    if policy.policy_kind is PolicyKind.VOICE_CHALLENGE:
        p *= policy.p_voice_pass
    return p


@dataclass(frozen=True)
class SimResult:
    trials: int
    successes: int
    success_rate: float
    weak_found_mean: float
    mutual_at_strike_mean: float
    seed: int
