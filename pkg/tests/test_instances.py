import math
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpabc import (
    Axiom,
    BallotModel,
    InvalidParametersError,
    av_score,
    axiom_committee_set,
    condorcet_committee,
    enumerate_neighbors,
    format_instance,
    pareto_dominates,
    parse_instance,
    profile_distance,
    random_instance,
    satisfies_axiom,
    sidecar,
    witness,
    WitnessId,
)
from dpabc.instances import DEFAULT_PARAMETERS

from brute import brute_condorcet, brute_satisfies

IN, OUT = True, False

# The cross-module oracle table: every tagged committee's JR/PJR/EJR
# membership on the base profile and (when present) the companion, stated
# explicitly and re-verified against both the fast checkers and the raw
# brute-force enumeration.
MEMBERSHIP_FACTS = {
    WitnessId.JR_UPPER: [
        ("W", "base", {Axiom.JR: IN}),
        ("W", "companion", {Axiom.JR: OUT}),
        ("W_prime", "base", {Axiom.JR: OUT}),
        ("W_prime", "companion", {Axiom.JR: IN}),
    ],
    WitnessId.PJR_UPPER: [
        ("W", "base", {Axiom.PJR: IN}),
        ("W", "companion", {Axiom.PJR: OUT}),
        ("W_prime", "base", {Axiom.PJR: OUT}),
        ("W_prime", "companion", {Axiom.PJR: IN}),
    ],
    WitnessId.EJR_UPPER: [
        ("W", "base", {Axiom.JR: IN, Axiom.PJR: IN, Axiom.EJR: IN}),
        ("W", "companion", {Axiom.JR: OUT, Axiom.EJR: OUT}),
        ("W_prime", "base", {Axiom.JR: OUT, Axiom.EJR: OUT}),
        ("W_prime", "companion", {Axiom.JR: IN, Axiom.PJR: IN, Axiom.EJR: IN}),
    ],
    WitnessId.JR_PJR_3WAY: [
        # the base profile's pair-block committee satisfies everything there
        # but loses PJR (hence EJR) on the companion; JR survives on both
        # since it keeps the universally covering alternatives
        ("W_1", "base", {Axiom.JR: IN, Axiom.PJR: IN, Axiom.EJR: IN}),
        ("W_1", "companion", {Axiom.JR: IN, Axiom.PJR: OUT, Axiom.EJR: OUT}),
        ("W_1_prime", "base", {Axiom.JR: IN, Axiom.PJR: OUT, Axiom.EJR: OUT}),
        ("W_1_prime", "companion", {Axiom.JR: IN, Axiom.PJR: IN, Axiom.EJR: IN}),
        ("W_0", "base", {Axiom.JR: IN, Axiom.PJR: OUT}),
        ("W_0", "companion", {Axiom.JR: IN, Axiom.PJR: OUT}),
    ],
    WitnessId.PJR_EJR_3WAY: [
        ("W_0", "base", {Axiom.PJR: IN, Axiom.EJR: OUT}),
        ("W_0", "companion", {Axiom.PJR: IN, Axiom.EJR: OUT}),
        ("W_1", "base", {Axiom.EJR: IN}),
        ("W_1", "companion", {Axiom.JR: OUT}),
        ("W_1_prime", "base", {Axiom.PJR: OUT}),
        ("W_1_prime", "companion", {Axiom.EJR: IN}),
    ],
    WitnessId.FIG3_DIVERGENCE: [
        ("W_1", "base", {Axiom.EJR: IN}),
        ("W_2", "base", {Axiom.PJR: IN, Axiom.EJR: OUT}),
    ],
    WitnessId.CC_JR_INCOMPAT: [
        ("W_c", "base", {Axiom.JR: OUT}),
    ],
}


def _profiles(w):
    yield "base", w.inst
    if w.companion is not None:
        yield "companion", w.companion


class TestConstruction:
    @pytest.mark.parametrize("wid", list(WitnessId))
    def test_defaults_build_and_tags_are_valid(self, wid):
        w = witness(wid)
        n, k, m = DEFAULT_PARAMETERS[wid]
        assert (w.inst.n, w.inst.k, w.inst.m) == (n, k, m)
        for committee in w.tagged.values():
            assert len(committee) == k
            assert committee == tuple(sorted(committee))
            assert all(0 <= a < m for a in committee)
        if w.companion is not None:
            assert (w.companion.n, w.companion.k, w.companion.m) == (n, k, m)

    def test_companion_present_exactly_for_paired_constructions(self):
        paired = {
            WitnessId.JR_UPPER,
            WitnessId.PJR_UPPER,
            WitnessId.EJR_UPPER,
            WitnessId.CC_UPPER,
            WitnessId.JR_PJR_3WAY,
            WitnessId.PJR_EJR_3WAY,
        }
        for wid in WitnessId:
            w = witness(wid)
            assert (w.companion is not None) == (wid in paired)

    def test_neighboring_pairs_are_neighbors(self):
        for wid in (WitnessId.JR_UPPER, WitnessId.PJR_UPPER, WitnessId.CC_UPPER):
            w = witness(wid)
            assert profile_distance(w.inst.ballots, w.companion.ballots) == 1
            produced = {nb.ballots for _, nb in enumerate_neighbors(w.inst)}
            assert w.companion.ballots in produced

    def test_block_rewrite_distance_matches_ceil(self):
        w = witness(WitnessId.EJR_UPPER)
        assert profile_distance(w.inst.ballots, w.companion.ballots) == 2
        w = witness(WitnessId.PJR_EJR_3WAY)
        assert profile_distance(w.inst.ballots, w.companion.ballots) == 2

    @pytest.mark.parametrize(
        "wid,kwargs,fragment",
        [
            (WitnessId.JR_UPPER, dict(n=2, k=2), "n > k"),
            (WitnessId.PJR_UPPER, dict(n=5, k=2), "s*k"),
            (WitnessId.EJR_UPPER, dict(n=5, k=2), "s*k"),
            (WitnessId.PE_CHAIN, dict(m=4), "n + 2k - 1"),
            (WitnessId.CC_UPPER, dict(n=4), "odd"),
            (WitnessId.JR_PJR_3WAY, dict(k=3), "k >= 4"),
            (WitnessId.PJR_EJR_3WAY, dict(k=2, n=4, m=5), "k >= 3"),
            (WitnessId.FIG3_DIVERGENCE, dict(m=3), "2k"),
            (WitnessId.CC_JR_INCOMPAT, dict(k=2, m=4), "k >= 3"),
        ],
    )
    def test_side_condition_violations_name_the_condition(self, wid, kwargs, fragment):
        with pytest.raises(InvalidParametersError, match=re.escape(fragment)):
            witness(wid, **kwargs)


class TestTaggedMemberships:
    @pytest.mark.parametrize("wid", sorted(MEMBERSHIP_FACTS, key=lambda w: w.value))
    def test_fast_checkers_confirm_tags(self, wid):
        w = witness(wid)
        profiles = dict(_profiles(w))
        for tag, which, expectations in MEMBERSHIP_FACTS[wid]:
            committee = w.tagged[tag]
            inst = profiles[which]
            for ax, expected in expectations.items():
                assert satisfies_axiom(committee, inst, ax) == expected, (
                    wid,
                    tag,
                    which,
                    ax,
                )

    @pytest.mark.parametrize("wid", sorted(MEMBERSHIP_FACTS, key=lambda w: w.value))
    def test_brute_oracle_confirms_tags(self, wid):
        w = witness(wid)
        profiles = dict(_profiles(w))
        for tag, which, expectations in MEMBERSHIP_FACTS[wid]:
            committee = w.tagged[tag]
            inst = profiles[which]
            for ax, expected in expectations.items():
                assert brute_satisfies(committee, inst, ax) == expected

    def test_ejr_upper_sets_are_singletons(self):
        w = witness(WitnessId.EJR_UPPER)
        for inst, tag in ((w.inst, "W"), (w.companion, "W_prime")):
            for ax in (Axiom.JR, Axiom.PJR, Axiom.EJR):
                assert axiom_committee_set(inst, ax) == (w.tagged[tag],)


class TestPeChain:
    def test_chain_length_and_tags(self):
        w = witness(WitnessId.PE_CHAIN)
        assert len(w.chain) == w.inst.n * w.inst.k + 1
        assert w.chain[0] == w.tagged["W_1_1"]
        assert w.chain[-1] == w.tagged["W_3_1"]

    def test_consecutive_dominance_and_av_descent(self):
        w = witness(WitnessId.PE_CHAIN)
        scores = [av_score(c, w.inst.ballots) for c in w.chain]
        assert scores == [4, 3, 2, 1, 0]
        for hi, lo in zip(w.chain, w.chain[1:]):
            assert pareto_dominates(hi, lo, w.inst.ballots)

    def test_scaled_chain(self):
        w = witness(WitnessId.PE_CHAIN, n=3, k=2, m=8)
        scores = [av_score(c, w.inst.ballots) for c in w.chain]
        assert len(w.chain) == 7
        assert scores == sorted(scores, reverse=True)
        for hi, lo in zip(w.chain, w.chain[1:]):
            assert pareto_dominates(hi, lo, w.inst.ballots)

    @pytest.mark.parametrize("n,k,m", [(2, 2, 5), (3, 2, 8), (2, 3, 9)])
    def test_per_voter_overlap_table(self, n, k, m):
        # row p, column q of the grid overlaps voter j in exactly k-p members
        # for j < q-1 and k-p+1 members afterwards; the tail committee in none
        w = witness(WitnessId.PE_CHAIN, n=n, k=k, m=m)
        for p in range(1, k + 1):
            for q in range(1, n + 1):
                committee = frozenset(w.tagged[f"W_{p}_{q}"])
                overlaps = [len(b & committee) for b in w.inst.ballots]
                assert overlaps == [k - p] * (q - 1) + [k - p + 1] * (n - q + 1)
        tail = frozenset(w.tagged[f"W_{k + 1}_1"])
        assert [len(b & tail) for b in w.inst.ballots] == [0] * n


class TestCondorcetWitnesses:
    def test_cc_upper_winners_flip(self):
        w = witness(WitnessId.CC_UPPER)
        assert condorcet_committee(w.inst) == w.tagged["W"]
        assert condorcet_committee(w.companion) == w.tagged["W_prime"]
        assert w.tagged["W"] != w.tagged["W_prime"]
        assert brute_condorcet(w.inst) == w.tagged["W"]

    def test_incompatibility_winner(self):
        w = witness(WitnessId.CC_JR_INCOMPAT)
        assert condorcet_committee(w.inst) == w.tagged["W_c"]
        assert brute_condorcet(w.inst) == w.tagged["W_c"]


class TestExport:
    @pytest.mark.parametrize("wid", list(WitnessId))
    def test_profile_round_trips_through_text_format(self, wid):
        w = witness(wid)
        assert parse_instance(format_instance(w.inst)) == w.inst

    def test_sidecar_lists_all_tags(self):
        w = witness(WitnessId.PE_CHAIN)
        text = sidecar(w)
        for tag, committee in w.tagged.items():
            assert f"{tag}: " + " ".join(str(a) for a in committee) in text


class TestRandomInstance:
    def test_saturated_impartial_model(self):
        inst = random_instance(4, 3, 2, BallotModel("impartial", 1.0), 5)
        assert all(b == frozenset(range(4)) for b in inst.ballots)

    def test_deterministic_in_seed(self):
        model = BallotModel("impartial", 0.4)
        assert random_instance(5, 4, 2, model, 7) == random_instance(5, 4, 2, model, 7)

    def test_groups_share_ballots(self):
        model = BallotModel("disjoint-groups", 0.5, groups=2)
        inst = random_instance(5, 6, 2, model, 11)
        assert len(set(inst.ballots)) <= 2
        assert inst.ballots[0] == inst.ballots[1] == inst.ballots[2]

    def test_approval_frequency_matches_conditional_marginal(self):
        # resampling empty ballots conditions on non-emptiness, so the
        # per-alternative marginal is p / (1 - (1-p)^m) = 16/31 for p=1/2, m=5
        total = approved = 0
        for seed in range(10000):
            inst = random_instance(5, 6, 2, BallotModel("impartial", 0.5), seed)
            total += 5 * inst.n
            approved += sum(len(b) for b in inst.ballots)
        expected = 16 / 31
        se = math.sqrt(expected * (1 - expected) / total)
        assert abs(approved / total - expected) <= 3 * se

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**64 - 1), st.floats(0.05, 1.0))
    def test_ballots_never_empty(self, seed, p):
        inst = random_instance(4, 3, 2, BallotModel("impartial", p), seed)
        assert all(b for b in inst.ballots)

    def test_model_validation(self):
        with pytest.raises(InvalidParametersError):
            BallotModel("martian")
        with pytest.raises(InvalidParametersError):
            BallotModel("impartial", 0.0)
        with pytest.raises(InvalidParametersError):
            BallotModel("disjoint-groups", 0.5, groups=0)
        with pytest.raises(InvalidParametersError):
            random_instance(3, 2, 4, BallotModel("impartial"), 0)
