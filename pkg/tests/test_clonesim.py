"""Attack-stage graph operations, the acceptance model, and the harness."""

import math
from random import Random

import pytest

from snknock.clonesim import (
    AccountKind,
    AttackPlan,
    InvalidPlan,
    PolicyKind,
    Scenario,
    SimGraph,
    TooLarge,
    UnknownAccount,
    VictimPolicy,
    acceptance_probability,
    build_attacker_network,
    connect_weak,
    enumerate_exact,
    final_strike,
    grow,
    harvest_list2,
    probe_weak,
    run_trials,
    validate_graph,
)
from snknock.clonesim.attack import round_half_up
from snknock.clonesim.montecarlo import _closed_form, run_trial, trial_rng


def policy(kind=PolicyKind.NONE, **kw):
    return VictimPolicy(policy_kind=kind, base_p=kw.pop("base_p", 0.5), **kw)


def plan(**kw):
    fields = dict(
        list1_size=3,
        n_networks=1,
        probe_budget=2,
        n_roots_final=1,
        known_name_pool=("Carol", "Dave"),
    )
    fields.update(kw)
    return AttackPlan(**fields)


def victim_world(n_friends, friend_activity=0.5):
    graph = SimGraph()
    victim = graph.add_account(AccountKind.GENUINE, "victim", 0.5)
    friends = []
    for i in range(n_friends):
        fid = graph.add_account(AccountKind.GENUINE, f"friend-{i}", friend_activity)
        graph.add_friendship(victim, fid)
        friends.append(fid)
    return graph, victim, friends


class TestGraph:
    def test_friendships_are_symmetric_and_idempotent(self):
        graph = SimGraph()
        a = graph.add_account(AccountKind.GENUINE, "a")
        b = graph.add_account(AccountKind.GENUINE, "b")
        graph.add_friendship(a, b)
        graph.add_friendship(b, a)
        assert graph.friends(a) == {b}
        assert graph.friends(b) == {a}
        assert graph.friendships() == {(a, b)}

    def test_no_self_loops(self):
        graph = SimGraph()
        a = graph.add_account(AccountKind.GENUINE, "a")
        with pytest.raises(ValueError):
            graph.add_friendship(a, a)
        with pytest.raises(ValueError):
            graph.send_request(a, a)

    def test_request_lifecycle(self):
        graph = SimGraph()
        a = graph.add_account(AccountKind.FAKE, "a")
        b = graph.add_account(AccountKind.GENUINE, "b")
        graph.send_request(a, b)
        assert (a, b) in graph.pending
        graph.resolve_request(a, b, accepted=False)
        assert graph.pending == set()
        assert graph.friends(b) == set()
        graph.send_request(a, b)
        graph.resolve_request(a, b, accepted=True)
        assert graph.friends(b) == {a}
        with pytest.raises(ValueError):
            graph.send_request(a, b)  # already friends

    def test_mutual_count(self):
        graph, victim, friends = victim_world(3)
        other = graph.add_account(AccountKind.ROOT, "r")
        graph.add_friendship(other, friends[0])
        graph.add_friendship(other, friends[2])
        assert graph.mutual_count(other, victim) == 2

    def test_unknown_accounts_raise(self):
        graph = SimGraph()
        with pytest.raises(UnknownAccount):
            graph.friends(1)
        with pytest.raises(UnknownAccount):
            graph.mutual_count(1, 2)

    def test_rename_changes_display_name_only(self):
        graph = SimGraph()
        a = graph.add_account(AccountKind.ROOT, "before", 0.9)
        graph.rename(a, "after")
        assert graph.accounts[a].display_name == "after"
        assert graph.accounts[a].activity_score == 0.9


class TestAcceptanceModel:
    def test_linear_combination(self):
        p = policy(
            base_p=0.2, w_mutual=0.5, mutual_saturation=2, w_name=0.2, w_activity=0.1
        )
        assert acceptance_probability(p, 3, 1, 0.5) == pytest.approx(0.95)
        assert acceptance_probability(p, 1, 0, 0.0) == pytest.approx(0.45)

    def test_clamped_to_unit_interval(self):
        assert acceptance_probability(policy(base_p=0.9, w_name=0.9), 0, 1, 0.0) == 1.0
        assert acceptance_probability(policy(base_p=-0.5), 0, 0, 0.0) == 0.0

    def test_mutual_saturation(self):
        p = policy(base_p=0.0, w_mutual=1.0, mutual_saturation=4)
        assert acceptance_probability(p, 2, 0, 0.0) == pytest.approx(0.5)
        assert acceptance_probability(p, 4, 0, 0.0) == 1.0
        assert acceptance_probability(p, 9, 0, 0.0) == 1.0

    def test_profile_penalty_applies_to_checked_tiers(self):
        kw = dict(base_p=0.8, profile_penalty=0.5)
        none = acceptance_probability(policy(PolicyKind.NONE, **kw), 0, 0, 0.2)
        prof = acceptance_probability(policy(PolicyKind.PROFILE_CHECK, **kw), 0, 0, 0.2)
        voice = acceptance_probability(
            policy(PolicyKind.VOICE_CHALLENGE, p_voice_pass=0.5, **kw), 0, 0, 0.2
        )
        assert none == pytest.approx(0.8)
        assert prof == pytest.approx(0.8 - 0.5 * 0.8)
        assert voice == pytest.approx(prof * 0.5)

    def test_penalty_floor_is_zero(self):
        p = policy(PolicyKind.PROFILE_CHECK, base_p=0.1, profile_penalty=1.0)
        assert acceptance_probability(p, 0, 0, 0.0) == 0.0

    def test_monotone_in_each_feature(self):
        p = policy(
            PolicyKind.VOICE_CHALLENGE,
            base_p=0.1,
            w_mutual=0.4,
            mutual_saturation=3,
            w_name=0.2,
            w_activity=0.2,
            profile_penalty=0.3,
            p_voice_pass=0.5,
        )
        for m in range(5):
            assert acceptance_probability(p, m + 1, 0, 0.5) >= acceptance_probability(
                p, m, 0, 0.5
            )
        assert acceptance_probability(p, 1, 1, 0.5) >= acceptance_probability(p, 1, 0, 0.5)
        assert acceptance_probability(p, 1, 0, 0.9) >= acceptance_probability(p, 1, 0, 0.1)


class TestBuildNetwork:
    def test_star_topology(self):
        graph = SimGraph()
        members, root = build_attacker_network(graph, Random(1), list1_size=5)
        assert len(members) == 5
        assert root == members[0]
        assert graph.degree(root) == 4
        for leaf in members[1:]:
            assert graph.friends(leaf) == {root}
            assert graph.accounts[leaf].kind is AccountKind.FAKE
        assert graph.accounts[root].kind is AccountKind.ROOT
        validate_graph(graph)

    def test_root_groomed_above_leaves(self):
        graph = SimGraph()
        members, root = build_attacker_network(graph, Random(2), list1_size=6)
        root_score = graph.accounts[root].activity_score
        assert 0.7 <= root_score <= 1.0
        for leaf in members[1:]:
            assert graph.accounts[leaf].activity_score <= root_score

    def test_leaves_never_exceed_root_even_with_odd_ranges(self):
        graph = SimGraph()
        members, root = build_attacker_network(
            graph,
            Random(3),
            list1_size=4,
            root_activity=(0.2, 0.2),
            fake_activity=(0.9, 0.9),
        )
        for leaf in members[1:]:
            assert graph.accounts[leaf].activity_score == 0.2

    def test_minimum_size(self):
        with pytest.raises(InvalidPlan):
            build_attacker_network(SimGraph(), Random(4), list1_size=1)

    def test_joined_tick_recorded(self):
        graph = SimGraph()
        members, _ = build_attacker_network(graph, Random(5), 3, joined_tick=7)
        assert all(graph.accounts[m].joined_tick == 7 for m in members)


class TestHarvest:
    def test_full_visibility_returns_all_friends(self):
        graph, victim, friends = victim_world(5)
        got = harvest_list2(graph, victim, 1.0, Random(1))
        assert sorted(got) == sorted(friends)

    def test_half_visibility_rounds_half_up(self):
        graph, victim, friends = victim_world(5)
        got = harvest_list2(graph, victim, 0.5, Random(2))
        assert len(got) == 3  # round(2.5) upward
        assert set(got) <= set(friends)
        assert len(set(got)) == len(got)

    def test_zero_visibility_and_zero_degree(self):
        graph, victim, _ = victim_world(4)
        assert harvest_list2(graph, victim, 0.0, Random(3)) == []
        lonely_graph, lonely, _ = victim_world(0)
        assert harvest_list2(lonely_graph, lonely, 1.0, Random(4)) == []

    def test_bad_fraction(self):
        graph, victim, _ = victim_world(2)
        with pytest.raises(ValueError):
            harvest_list2(graph, victim, 1.5, Random(5))

    def test_unknown_victim(self):
        with pytest.raises(UnknownAccount):
            harvest_list2(SimGraph(), 1, 1.0, Random(6))

    def test_round_half_up(self):
        assert round_half_up(2.5) == 3
        assert round_half_up(3.5) == 4
        assert round_half_up(2.4) == 2
        assert round_half_up(0.0) == 0


class TestProbe:
    def test_certain_acceptance_collects_all(self):
        graph, victim, friends = victim_world(4)
        members, root = build_attacker_network(graph, Random(1), 3)
        policies = {f: policy(base_p=1.0) for f in friends}
        weak = probe_weak(graph, friends, members[1:], policies, Random(2))
        assert weak == set(friends)
        assert graph.pending == set()
        validate_graph(graph)

    def test_certain_rejection_collects_none(self):
        graph, victim, friends = victim_world(4)
        members, _ = build_attacker_network(graph, Random(3), 3)
        policies = {f: policy(base_p=0.0) for f in friends}
        weak = probe_weak(graph, friends, members[1:], policies, Random(4))
        assert weak == set()
        assert graph.pending == set()
        for f in friends:
            assert graph.friends(f) == {victim}

    def test_acceptance_rate_tracks_probability(self):
        n = 1500
        graph, victim, friends = victim_world(n)
        members, _ = build_attacker_network(
            graph, Random(5), 3, fake_activity=(0.0, 0.0)
        )
        q = 0.35
        policies = {f: policy(base_p=q) for f in friends}
        weak = probe_weak(graph, friends, members[1:], policies, Random(6))
        sigma = math.sqrt(q * (1 - q) / n)
        assert abs(len(weak) / n - q) < 3 * sigma

    def test_prober_activity_is_the_only_helpful_feature(self):
        graph, victim, friends = victim_world(2)
        members, root = build_attacker_network(
            graph, Random(7), 2, root_activity=(1.0, 1.0), fake_activity=(1.0, 1.0)
        )
        # w_activity alone decides; leaf activity is 1.0 so acceptance is sure
        policies = {f: policy(base_p=0.0, w_activity=1.0) for f in friends}
        weak = probe_weak(graph, friends, members[1:], policies, Random(8))
        assert weak == set(friends)


class TestConnectWeak:
    def test_complete_bipartite_join(self):
        graph, victim, friends = victim_world(3)
        members, root = build_attacker_network(graph, Random(1), 4)
        weak = set(friends[:2])
        before = len(graph.friendships())
        connect_weak(graph, members, weak)
        after = graph.friendships()
        assert len(after) == before + len(members) * len(weak)
        for member in members:
            for friend in weak:
                assert friend in graph.friends(member)
        assert graph.mutual_count(root, victim) == 2
        validate_graph(graph)

    def test_idempotent(self):
        graph, victim, friends = victim_world(2)
        members, _ = build_attacker_network(graph, Random(2), 3)
        connect_weak(graph, members, set(friends))
        snapshot = graph.friendships()
        connect_weak(graph, members, set(friends))
        assert graph.friendships() == snapshot


class TestGrow:
    def test_one_root_per_network(self):
        graph, victim, friends = victim_world(4)
        policies = {f: policy(base_p=0.5) for f in friends}
        roots = grow(graph, plan(n_networks=3), victim, Random(1), policies)
        assert len(roots) == 3
        assert len({graph.accounts[r].kind for r in roots}) == 1
        assert graph.accounts[roots[0]].kind is AccountKind.ROOT
        total_fakes = sum(
            1 for a in graph.accounts.values() if a.kind is not AccountKind.GENUINE
        )
        assert total_fakes == 3 * plan().list1_size
        validate_graph(graph)

    def test_probe_budget_caps_mutuals(self):
        graph, victim, friends = victim_world(6)
        policies = {f: policy(base_p=1.0) for f in friends}
        roots = grow(
            graph, plan(probe_budget=2, n_networks=2), victim, Random(2), policies
        )
        for root in roots:
            assert graph.mutual_count(root, victim) == 2

    def test_zero_budget_means_zero_mutuals(self):
        graph, victim, friends = victim_world(4)
        policies = {f: policy(base_p=1.0) for f in friends}
        (root,) = grow(graph, plan(probe_budget=0), victim, Random(3), policies)
        assert graph.mutual_count(root, victim) == 0

    def test_network_ticks_increase(self):
        graph, victim, friends = victim_world(2)
        policies = {f: policy(base_p=0.0) for f in friends}
        roots = grow(graph, plan(n_networks=3), victim, Random(4), policies)
        assert [graph.accounts[r].joined_tick for r in roots] == [1, 2, 3]


class TestFinalStrike:
    def _grown(self, n_friends=3, seed=1, **plan_kw):
        graph, victim, friends = victim_world(n_friends)
        policies = {f: policy(base_p=1.0) for f in friends}
        the_plan = plan(**plan_kw)
        roots = grow(graph, the_plan, victim, Random(seed), policies)
        return graph, victim, roots, the_plan

    def test_renames_to_known_names_before_striking(self):
        graph, victim, roots, the_plan = self._grown()
        success, outcomes = final_strike(
            graph, roots, victim, policy(base_p=1.0), the_plan, Random(2)
        )
        assert success
        (outcome,) = outcomes
        assert outcome.assumed_name in the_plan.known_name_pool
        assert graph.accounts[outcome.root_id].display_name == outcome.assumed_name

    def test_same_site_when_name_collides_with_genuine_account(self):
        graph, victim, friends = victim_world(1)
        graph.rename(friends[0], "Carol")
        policies = {friends[0]: policy(base_p=1.0)}
        the_plan = plan(known_name_pool=("Carol",), n_roots_final=1)
        roots = grow(graph, the_plan, victim, Random(3), policies)
        _, outcomes = final_strike(
            graph, roots, victim, policy(base_p=0.0), the_plan, Random(4)
        )
        assert outcomes[0].clone_kind == "same_site"

    def test_cross_site_when_name_unknown_on_the_network(self):
        graph, victim, roots, the_plan = self._grown()
        _, outcomes = final_strike(
            graph, roots, victim, policy(base_p=0.0), the_plan, Random(5)
        )
        assert outcomes[0].clone_kind == "cross_site"

    def test_early_stop_after_first_acceptance(self):
        graph, victim, friends = victim_world(2)
        policies = {f: policy(base_p=0.0) for f in friends}
        the_plan = plan(
            n_networks=3, n_roots_final=3, known_name_pool=("A", "B", "C")
        )
        roots = grow(graph, the_plan, victim, Random(6), policies)
        success, outcomes = final_strike(
            graph, roots, victim, policy(base_p=1.0), the_plan, Random(7)
        )
        assert success
        assert [o.attempted for o in outcomes] == [True, False, False]
        assert [o.accepted for o in outcomes] == [True, False, False]
        assert len(graph.friends(victim) & set(roots)) == 1
        validate_graph(graph)

    def test_certain_rejection_attempts_every_root(self):
        graph, victim, roots, the_plan = self._grown(
            n_networks=2, n_roots_final=2, known_name_pool=("A", "B")
        )
        success, outcomes = final_strike(
            graph, roots, victim, policy(base_p=0.0), the_plan, Random(8)
        )
        assert not success
        assert all(o.attempted for o in outcomes)
        assert not any(o.accepted for o in outcomes)
        assert graph.pending == set()

    def test_outcome_records_mutuals_and_probability(self):
        graph, victim, roots, the_plan = self._grown(n_friends=3)
        victim_policy = policy(base_p=0.1, w_mutual=0.2, mutual_saturation=3)
        _, outcomes = final_strike(
            graph, roots, victim, victim_policy, the_plan, Random(9)
        )
        (outcome,) = outcomes
        assert outcome.mutual_count == graph.mutual_count(outcome.root_id, victim)
        expected = acceptance_probability(
            victim_policy,
            outcome.mutual_count,
            1,
            graph.accounts[outcome.root_id].activity_score,
        )
        assert outcome.probability == pytest.approx(expected)

    def test_distinct_names_across_struck_roots(self):
        graph, victim, roots, the_plan = self._grown(
            n_networks=3, n_roots_final=3, known_name_pool=("A", "B", "C", "D")
        )
        _, outcomes = final_strike(
            graph, roots, victim, policy(base_p=0.0), the_plan, Random(10)
        )
        names = [o.assumed_name for o in outcomes]
        assert len(set(names)) == 3

    def test_needs_enough_roots(self):
        graph, victim, roots, the_plan = self._grown()
        with pytest.raises(InvalidPlan):
            final_strike(
                graph,
                roots,
                victim,
                policy(),
                plan(n_networks=2, n_roots_final=2, known_name_pool=("A", "B")),
                Random(11),
            )


def scenario(**kw):
    fields = dict(
        name="unit",
        policy_name="none",
        victim_degree=2,
        visibility_fraction=1.0,
        plan=plan(probe_budget=1, known_name_pool=("A",)),
        friend_policy=policy(base_p=0.4, w_activity=0.2),
        victim_policy=policy(base_p=0.5, w_mutual=0.3, mutual_saturation=1),
        root_activity=(0.9, 0.9),
        fake_activity=(0.1, 0.1),
    )
    fields.update(kw)
    return Scenario(**fields)


class TestHarness:
    def test_run_trials_is_deterministic(self):
        a = run_trials(scenario(), seed=5, n_trials=500)
        b = run_trials(scenario(), seed=5, n_trials=500)
        assert a == b
        c = run_trials(scenario(), seed=6, n_trials=500)
        assert c != a

    def test_trial_substreams_are_stable_prefixes(self):
        short = run_trials(scenario(), seed=5, n_trials=200)
        longer = run_trials(scenario(), seed=5, n_trials=400)
        # rerunning the first 200 trials individually reproduces the short run
        successes = sum(
            run_trial(scenario(), trial_rng(5, i))[0] for i in range(200)
        )
        assert successes == short.successes
        assert longer.trials == 400

    def test_result_metrics_are_aggregates(self):
        result = run_trials(scenario(), seed=1, n_trials=300)
        assert result.trials == 300
        assert result.success_rate == pytest.approx(result.successes / 300)
        assert 0.0 <= result.weak_found_mean <= 2.0
        assert 0.0 <= result.mutual_at_strike_mean <= 1.0
        assert result.seed == 1

    def test_zero_voice_gate_never_succeeds(self):
        sc = scenario(
            policy_name="voice_challenge",
            victim_policy=VictimPolicy(
                policy_kind=PolicyKind.VOICE_CHALLENGE,
                base_p=0.9,
                w_mutual=0.5,
                p_voice_pass=0.0,
            ),
        )
        result = run_trials(sc, seed=2, n_trials=2000)
        assert result.successes == 0
        assert result.success_rate == 0.0

    def test_two_untouched_roots_give_three_quarters(self):
        # two independent strikes at p=0.5 each: 1 - 0.25
        sc = scenario(
            plan=plan(
                n_networks=2,
                n_roots_final=2,
                probe_budget=0,
                known_name_pool=("A", "B"),
            ),
            victim_policy=policy(base_p=0.5),
        )
        assert enumerate_exact(sc) == pytest.approx(0.75)

    def test_enumerate_matches_closed_form(self):
        for seed in range(5):
            rng = Random(seed)
            sc = scenario(
                victim_degree=rng.randint(0, 3),
                plan=plan(
                    n_networks=rng.randint(1, 2),
                    probe_budget=rng.randint(0, 2),
                    n_roots_final=1,
                    known_name_pool=("A",),
                ),
                friend_policy=policy(base_p=rng.uniform(0.1, 0.9), w_activity=0.3),
                victim_policy=policy(
                    base_p=rng.uniform(0.1, 0.6),
                    w_mutual=rng.uniform(0.0, 0.4),
                    mutual_saturation=2,
                ),
            )
            assert enumerate_exact(sc) == pytest.approx(_closed_form(sc), abs=1e-12)

    def test_enumerate_requires_point_activities(self):
        with pytest.raises(ValueError):
            enumerate_exact(scenario(root_activity=(0.7, 1.0)))

    def test_enumerate_rejects_large_scenarios(self):
        sc = scenario(
            victim_degree=30,
            plan=plan(probe_budget=30, known_name_pool=("A",)),
        )
        with pytest.raises(TooLarge):
            enumerate_exact(sc)

    def test_monte_carlo_agrees_with_enumeration(self):
        sc = scenario(
            victim_degree=3,
            plan=plan(
                n_networks=2,
                probe_budget=2,
                n_roots_final=2,
                known_name_pool=("A", "B"),
            ),
            friend_policy=policy(base_p=0.5, w_activity=0.2),
            victim_policy=policy(
                PolicyKind.PROFILE_CHECK,
                base_p=0.3,
                w_mutual=0.4,
                mutual_saturation=2,
                profile_penalty=0.2,
            ),
        )
        exact = enumerate_exact(sc)
        result = run_trials(sc, seed=11, n_trials=20000)
        sigma = math.sqrt(exact * (1 - exact) / 20000)
        assert abs(result.success_rate - exact) < 4 * sigma

    def test_scenario_validation(self):
        with pytest.raises(ValueError):
            scenario(victim_degree=-1).validate()
        with pytest.raises(ValueError):
            scenario(visibility_fraction=1.2).validate()
        with pytest.raises(InvalidPlan):
            scenario(plan=plan(n_roots_final=5)).validate()
