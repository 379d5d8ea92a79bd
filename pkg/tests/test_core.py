import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpabc import (
    Instance,
    InvalidParametersError,
    ProfileParseError,
    enumerate_committees,
    enumerate_neighbors,
    format_instance,
    make_instance,
    parse_instance,
    permute,
    permute_committee,
    profile_distance,
    witness,
    WitnessId,
)

from strategies import instances, instances_with_permutation


class TestEnumerateCommittees:
    def test_full_committee_is_single(self):
        assert enumerate_committees(3, 3) == [(0, 1, 2)]

    def test_four_choose_two(self):
        committees = enumerate_committees(4, 2)
        assert len(committees) == 6
        assert committees[0] == (0, 1)
        assert committees[-1] == (2, 3)

    def test_five_choose_two_count(self):
        assert len(enumerate_committees(5, 2)) == 10

    def test_all_desk_scale_sizes(self):
        for m in range(1, 9):
            for k in range(1, m + 1):
                committees = enumerate_committees(m, k)
                assert len(committees) == math.comb(m, k)
                assert len(set(committees)) == len(committees)
                assert committees == sorted(committees)
                assert all(tuple(sorted(w)) == w and len(w) == k for w in committees)

    @pytest.mark.parametrize("m,k", [(4, 0), (4, 5), (3, -1)])
    def test_invalid_parameters(self, m, k):
        with pytest.raises(InvalidParametersError):
            enumerate_committees(m, k)


class TestNeighbors:
    def test_single_voter_three_alternatives(self):
        inst = make_instance([{0}], 3, 1)
        assert sum(1 for _ in enumerate_neighbors(inst)) == 6  # 2^3 - 2

    def test_two_voters_three_alternatives(self):
        inst = make_instance([{0}, {1, 2}], 3, 1)
        neighbors = list(enumerate_neighbors(inst))
        assert len(neighbors) == 12  # n * (2^m - 2)

    def test_contains_designed_companion(self):
        w = witness(WitnessId.JR_UPPER)
        produced = {nb.ballots for _, nb in enumerate_neighbors(w.inst)}
        assert w.companion.ballots in produced

    @settings(max_examples=40)
    @given(instances(max_m=4, max_n=4))
    def test_neighbor_stream_properties(self, inst):
        seen = set()
        count = 0
        for voter, nb in enumerate_neighbors(inst):
            count += 1
            assert nb.k == inst.k and nb.m == inst.m
            assert profile_distance(inst.ballots, nb.ballots) == 1
            assert nb.ballots[voter] != inst.ballots[voter]
            assert nb.ballots != inst.ballots
            assert nb.ballots not in seen
            seen.add(nb.ballots)
        assert count == inst.n * (2**inst.m - 2)


class TestProfileDistance:
    def test_identical(self):
        inst = make_instance([{0}, {1}], 3, 1)
        assert profile_distance(inst.ballots, inst.ballots) == 0

    def test_neighboring_witness_pair(self):
        w = witness(WitnessId.JR_UPPER)
        assert profile_distance(w.inst.ballots, w.companion.ballots) == 1

    def test_block_rewrite_distance(self):
        w = witness(WitnessId.EJR_UPPER)  # n=4, k=2: profiles differ on 2 voters
        assert profile_distance(w.inst.ballots, w.companion.ballots) == 2

    def test_length_mismatch(self):
        with pytest.raises(InvalidParametersError):
            profile_distance(({0},), ({0}, {1}))


class TestPermute:
    def test_identity(self):
        inst = make_instance([{0, 1}, {2}], 3, 2)
        assert permute(inst, (0, 1, 2)) == inst

    def test_swap_is_involution(self):
        inst = make_instance([{0, 1}, {2}], 3, 2)
        swap = (1, 0, 2)
        assert permute(permute(inst, swap), swap) == inst

    def test_pointwise_mapping(self):
        inst = make_instance([{0}], 3, 1)
        assert permute(inst, (1, 0, 2)).ballots[0] == frozenset({1})

    def test_committee_image_sorted(self):
        assert permute_committee((0, 2), (2, 1, 0)) == (0, 2)
        assert permute_committee((0, 1), (2, 0, 1)) == (0, 2)

    def test_not_a_bijection(self):
        inst = make_instance([{0}], 3, 1)
        with pytest.raises(InvalidParametersError):
            permute(inst, (0, 0, 2))
        with pytest.raises(InvalidParametersError):
            permute(inst, (0, 1))

    @settings(max_examples=40)
    @given(instances_with_permutation(max_m=5, max_n=5), st.integers(0, 10**6))
    def test_distance_preserved(self, inst_sigma, seed):
        inst, sigma = inst_sigma
        # mutate one ballot deterministically to get a second profile
        voter = seed % inst.n
        flipped = set(inst.ballots[voter]) ^ {seed % inst.m}
        other = inst.replace_ballot(voter, flipped or {seed % inst.m})
        d = profile_distance(inst.ballots, other.ballots)
        assert d == profile_distance(
            permute(inst, sigma).ballots, permute(other, sigma).ballots
        )


class TestInstanceInvariants:
    def test_empty_ballot_rejected(self):
        with pytest.raises(InvalidParametersError):
            make_instance([set()], 3, 1)

    def test_committee_size_bounds(self):
        with pytest.raises(InvalidParametersError):
            make_instance([{0}], 3, 4)
        with pytest.raises(InvalidParametersError):
            make_instance([{0}], 3, 0)

    def test_minimum_alternatives(self):
        with pytest.raises(InvalidParametersError):
            make_instance([{0}], 2, 1)

    def test_out_of_range_alternative(self):
        with pytest.raises(InvalidParametersError):
            make_instance([{3}], 3, 1)

    def test_no_voters(self):
        with pytest.raises(InvalidParametersError):
            Instance((), 3, 1)


class TestTextFormat:
    def test_round_trip(self):
        inst = make_instance([{0, 2, 3}, {1}], 4, 2)
        assert parse_instance(format_instance(inst)) == inst

    def test_comments_and_blank_lines(self):
        text = "# header comment\n\nm=3 k=1\n0 2  # voter 0\n\n1\n"
        inst = parse_instance(text)
        assert inst.ballots == (frozenset({0, 2}), frozenset({1}))

    def test_bad_header_reports_line(self):
        with pytest.raises(ProfileParseError) as err:
            parse_instance("m=3\n0\n")
        assert err.value.line == 1

    def test_empty_ballot_reports_line(self):
        with pytest.raises(ProfileParseError) as err:
            parse_instance("m=3 k=1\n0\nx\n")
        assert err.value.line == 3

    def test_out_of_range_index_reports_line(self):
        with pytest.raises(ProfileParseError) as err:
            parse_instance("m=3 k=1\n0\n7\n")
        assert err.value.line == 3

    def test_missing_voters(self):
        with pytest.raises(ProfileParseError):
            parse_instance("m=3 k=1\n")

    @settings(max_examples=30)
    @given(instances(max_m=5, max_n=5))
    def test_round_trip_property(self, inst):
        assert parse_instance(format_instance(inst)) == inst
