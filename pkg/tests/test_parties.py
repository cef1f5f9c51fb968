import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpent.parties import (
    GPSet,
    LabelClass,
    LabelError,
    LabelKind,
    bi_gp_labels,
    bipartitions,
    canonical,
    classify_label,
    count_bi_gp,
    count_bi_gp_all,
    count_bi_gp_ordered,
    count_ghz,
    count_labels,
    count_npartite_rows,
    enumerate_ghz_labels,
    enumerate_labels,
    parse_label,
    parse_subset,
    partition_count,
    set_partitions,
    stirling2,
    subset_text,
    true_npartite_labels,
)

from .oracles import brute_force_labels, stirling2_explicit


def as_sets(labels):
    return {frozenset(frozenset(g) for g in lab.gps) for lab in labels}


class TestEnumeration:
    def test_three_parties_lists_the_seven_labels(self):
        expected = {parse_label(t) for t in ["(1)(2)", "(1)(3)", "(2)(3)", "(1)(23)", "(2)(13)", "(3)(12)", "(1)(2)(3)"]}
        got = enumerate_labels(3)
        assert len(got) == 7
        assert set(got) == expected

    def test_two_parties(self):
        assert enumerate_labels(2) == [parse_label("(1)(2)")]

    def test_four_parties(self):
        assert len(enumerate_labels(4)) == 36

    @pytest.mark.parametrize("N", range(2, 7))
    def test_matches_brute_force(self, N):
        got = enumerate_labels(N)
        assert len(got) == len(set(got))
        assert as_sets(got) == brute_force_labels(N)
        assert count_labels(N) == len(got)

    def test_restricted_size(self):
        labs = enumerate_labels(4, n=3)
        assert all(lab.n_parties == 3 for lab in labs)
        # C(4,3) subsets x (S(3,2) + S(3,3)) partitions
        assert len(labs) == 4 * (3 + 1)

    @pytest.mark.parametrize("N", [1, 9])
    def test_out_of_range(self, N):
        with pytest.raises(LabelError):
            enumerate_labels(N)

    def test_bad_subset_size(self):
        with pytest.raises(LabelError):
            enumerate_labels(4, n=5)


class TestCounting:
    @pytest.mark.parametrize("N,expected", [(2, 1), (3, 7), (4, 36)])
    def test_small_values(self, N, expected):
        assert count_labels(N) == expected

    def test_larger_n_against_stirling_form(self):
        # 16! is past 2**32; the sums stay in exact integers
        N = 16
        alt = sum(math.comb(N, n) * sum(stirling2_explicit(n, m) for m in range(2, n + 1)) for n in range(2, N + 1))
        assert count_labels(N) == alt

    @pytest.mark.parametrize("n", range(1, 9))
    def test_partition_count_is_stirling(self, n):
        for m in range(1, n + 1):
            assert partition_count(n, m) == stirling2(n, m) == stirling2_explicit(n, m)

    def test_stirling_values(self):
        assert (stirling2(4, 2), stirling2(4, 3), stirling2(4, 4)) == (7, 6, 1)
        assert stirling2(3, 0) == 0 and stirling2(0, 0) == 1

    @pytest.mark.parametrize("N", range(2, 9))
    def test_ghz_count(self, N):
        subsets = enumerate_ghz_labels(N)
        assert len(subsets) == count_ghz(N) == 2**N - N - 1
        assert len(set(subsets)) == len(subsets)

    def test_ghz_listing(self):
        assert enumerate_ghz_labels(3) == [(1, 2), (1, 3), (2, 3), (1, 2, 3)]
        assert enumerate_ghz_labels(2) == [(1, 2)]
        assert count_ghz(5) == 26

    @pytest.mark.parametrize("N", range(2, 7))
    def test_bi_gp_all_count(self, N):
        n_all = sum(classify_label(lab, N).kind is LabelKind.BI_GP_ALL_PARTIES for lab in enumerate_labels(N))
        assert n_all == count_bi_gp_all(N) == 2 ** (N - 1) - 1 == len(bipartitions(N))

    @pytest.mark.parametrize("N", range(2, 7))
    def test_bi_gp_ordered_vs_unordered(self, N):
        assert count_bi_gp_ordered(N) == 2 * count_bi_gp(N)
        assert count_bi_gp(N) == len(bi_gp_labels(N))

    def test_bi_gp_three_parties(self):
        assert count_bi_gp_ordered(3) == 12
        assert count_bi_gp(3) == 6

    def test_npartite_row_counts(self):
        assert count_npartite_rows(4) == {"per_party_set": 2, "instantiated": 5}
        assert count_npartite_rows(3) == {"per_party_set": 1, "instantiated": 1}
        assert len(true_npartite_labels(4, min_size=3)) == 5

    def test_set_partitions_counts(self):
        for n in range(1, 7):
            parts = list(set_partitions(range(n)))
            assert len(parts) == sum(stirling2(n, m) for m in range(n + 1))


class TestClassify:
    def test_examples(self):
        assert classify_label(parse_label("(12)(3)"), 3) == LabelClass(LabelKind.BI_GP_ALL_PARTIES, 3)
        assert classify_label(parse_label("(1)(2)(3)"), 3) == LabelClass(LabelKind.TRUE_NPARTITE, 3)
        assert classify_label(parse_label("(1)(2)"), 3) == LabelClass(LabelKind.BI_GP)
        assert classify_label(parse_label("(12)(3)(4)"), 4).kind is LabelKind.OTHER

    def test_two_singletons_covering_all(self):
        assert classify_label(parse_label("(1)(2)"), 2).kind is LabelKind.BI_GP_ALL_PARTIES

    def test_text(self):
        assert str(classify_label(parse_label("(1)(2)(3)"), 3)) == "TrueNPartite(3)"
        assert str(classify_label(parse_label("(1)(2)"), 3)) == "BiGP"

    def test_party_beyond_n(self):
        with pytest.raises(LabelError):
            classify_label(parse_label("(1)(4)"), 3)


class TestLabelSyntax:
    def test_compact_and_spaced_agree(self):
        assert parse_label("(1)(2 3)") == parse_label("(1)(23)") == parse_label(" ( 23 ) (1) ")

    def test_canonical_order(self):
        lab = parse_label("(3)(21)")
        assert lab.gps == ((1, 2), (3,))
        assert lab.text() == "(12)(3)"

    def test_two_digit_indices(self):
        lab = GPSet(((10, 11), (2,)))
        assert lab.text() == "(2)(10 11)"
        assert parse_label(lab.text()) == lab
        single = GPSet(((10,), (11,)))
        assert parse_label(single.text()) == single

    @pytest.mark.parametrize("bad", ["", "(1)", "(1)(1)", "(12)(23)", "(1)(a)", "(1)(2", "x(1)(2)", "(0)(1)"])
    def test_rejects(self, bad):
        with pytest.raises(LabelError):
            parse_label(bad)

    def test_subset_text(self):
        assert subset_text((1, 2, 3)) == "123"
        assert parse_subset("123") == (1, 2, 3)
        assert parse_subset(subset_text((2, 10))) == (2, 10)

    def test_equality_ignores_order(self):
        assert GPSet(((3,), (2, 1))) == GPSet(((1, 2), (3,)))
        assert hash(GPSet(((3,), (2, 1)))) == hash(GPSet(((1, 2), (3,))))


@st.composite
def labels(draw, max_party=14):
    parties = draw(st.lists(st.integers(1, max_party), min_size=2, max_size=8, unique=True))
    k = draw(st.integers(2, len(parties)))
    colours = draw(st.lists(st.integers(0, k - 1), min_size=len(parties), max_size=len(parties)))
    colours[:k] = range(k)  # every block nonempty
    blocks = {}
    for p, c in zip(parties, colours):
        blocks.setdefault(c, []).append(p)
    gps = list(blocks.values())
    draw(st.randoms()).shuffle(gps)
    return gps


@given(labels())
def test_round_trip(gps):
    lab = GPSet(tuple(tuple(g) for g in gps))
    assert parse_label(lab.text()) == lab
    assert parse_label(lab.text()).text() == lab.text()


@given(labels())
def test_canonical_idempotent(gps):
    once = canonical(gps)
    assert canonical(once) == once
    assert canonical(once).gps == once.gps
    assert canonical(list(reversed(gps))) == once
