from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpent.ghz_calculus import (
    CombinationError,
    GhzCombination,
    bi_gp_value,
    combination_from_json,
    combination_profile,
    combination_state,
    contributes,
    label_value,
    parse_combination,
    profile_labels,
    true_npartite_value,
)
from gpent.measures import bi_gp_entanglement
from gpent.parties import LabelError, bi_gp_labels, enumerate_ghz_labels, enumerate_labels, parse_label

L = parse_label


class TestContributes:
    def test_pair(self):
        assert contributes({1, 2}, {1}, {2})
        assert not contributes({1, 3}, {1}, {2})

    def test_subset_of_union(self):
        for s in ({1, 2, 3}, {2, 3}, {1, 3}):
            assert contributes(s, {1, 2}, {3})
        assert not contributes({1, 2}, {1, 2}, {3})
        assert not contributes({1, 2, 3, 4}, {1, 2}, {3})

    def test_overlap(self):
        with pytest.raises(LabelError):
            contributes({1, 2}, {1, 2}, {2})


class TestValues:
    def test_single_pair(self):
        assert bi_gp_value(GhzCombination({(1, 2): 1}), (1,), (2,)) == 1

    def test_mixed_combination(self):
        comb = GhzCombination({(1, 2, 3): 2, (1, 3): 1, (1, 2): 5})
        assert bi_gp_value(comb, (1, 2), (3,)) == 3

    def test_empty(self):
        assert bi_gp_value(GhzCombination({}, N=3), (1,), (2,)) == 0

    def test_true_npartite(self):
        assert true_npartite_value(GhzCombination({(1, 2, 3): 3, (1, 2): 7}), L("(1)(2)(3)")) == 3
        assert true_npartite_value(GhzCombination({(1, 2): 7}, N=3), L("(1)(2)(3)")) == 0
        assert true_npartite_value(GhzCombination({(1, 2): 7}), L("(1)(2)")) == 7

    def test_true_npartite_rejects_grouped(self):
        with pytest.raises(LabelError):
            true_npartite_value(GhzCombination({(1, 2): 1}, N=3), L("(12)(3)"))

    def test_label_value_other(self):
        with pytest.raises(LabelError):
            label_value(GhzCombination({(1, 2): 1}, N=4), L("(12)(3)(4)"))

    def test_exact_rationals(self):
        comb = parse_combination("g(12)=1/3, g(123)=1/6")
        assert bi_gp_value(comb, (1,), (2, 3)) == Fraction(1, 2)


class TestCombination:
    def test_parse_and_text(self):
        comb = parse_combination("g(123)=1/2, g(12)=2")
        assert comb.text() == "g(12)=2, g(123)=1/2"
        assert parse_combination(comb.text()) == comb
        assert comb.N == 3

    def test_spaced_subsets(self):
        comb = parse_combination("g(2 10)=1")
        assert comb[(2, 10)] == 1 and comb.N == 10

    def test_duplicates_add(self):
        assert parse_combination("g(12)=1, g(21)=2")[(1, 2)] == 3

    def test_json(self):
        comb = parse_combination("g(12)=2, g(123)=1/2")
        assert combination_from_json(comb.to_json()) == comb

    @pytest.mark.parametrize("bad", ["g(1)=1", "g(12)=-1", "g(12)=x", "h(12)=1", "g(12)"])
    def test_rejects(self, bad):
        with pytest.raises((CombinationError, LabelError)):
            parse_combination(bad)

    def test_n_too_small(self):
        with pytest.raises(CombinationError):
            GhzCombination({(1, 4): 1}, N=3)

    def test_vector_order(self):
        comb = parse_combination("g(13)=2, g(123)=1")
        assert comb.vector() == [0, 2, 0, 1]

    def test_add(self):
        a, b = parse_combination("g(12)=1"), parse_combination("g(12)=1, g(13)=2")
        assert (a + b)[(1, 2)] == 2 and (a + b)[(1, 3)] == 2

    def test_state_needs_integer_counts(self):
        with pytest.raises(CombinationError):
            combination_state(parse_combination("g(12)=1/2"))

    def test_profile_labels(self):
        assert len(profile_labels(3)) == 7
        assert len(profile_labels(4)) == 25 + 5


class TestNumericCrossCheck:
    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_single_ghz_against_entropy(self, N):
        for s in enumerate_ghz_labels(N):
            comb = GhzCombination({s: 1}, N=N)
            psi = combination_state(comb)
            for lab in bi_gp_labels(N):
                if not lab.covers(N):
                    continue
                assert float(bi_gp_value(comb, *lab.gps)) == pytest.approx(
                    bi_gp_entanglement(psi, lab).value, abs=1e-9)

    def test_small_counts_via_aligned_copies(self):
        comb = GhzCombination({(1, 2, 3): 2, (1, 3): 1, (1, 2): 1})
        psi = combination_state(comb)
        assert psi.dims == (16, 16, 16)  # four 3-qubit factors, idle parties padded in |0>
        for lab in bi_gp_labels(3):
            if lab.covers(3):
                assert float(bi_gp_value(comb, *lab.gps)) == pytest.approx(
                    bi_gp_entanglement(psi, lab).value, abs=1e-9)


# --- properties ----------------------------------------------------------------

ratios = st.fractions(min_value=0, max_value=5, max_denominator=12)


@st.composite
def combinations(draw, N=None):
    N = N or draw(st.integers(2, 4))
    subsets = enumerate_ghz_labels(N)
    counts = draw(st.lists(ratios, min_size=len(subsets), max_size=len(subsets)))
    return GhzCombination(dict(zip(subsets, counts)), N=N)


@given(st.data())
def test_linear(data):
    N = data.draw(st.integers(2, 4))
    a, b = data.draw(combinations(N)), data.draw(combinations(N))
    for lab in bi_gp_labels(N):
        assert bi_gp_value(a + b, *lab.gps) == bi_gp_value(a, *lab.gps) + bi_gp_value(b, *lab.gps)


@given(combinations(), ratios)
def test_true_npartite_only_sees_its_subset(comb, extra):
    N = comb.N
    full = tuple(range(1, N + 1))
    others = {s: q for s, q in comb.items() if s != full}
    changed = GhzCombination({**{s: q + extra for s, q in others.items()}, full: comb[full]}, N=N)
    lab = L("".join(f"({p},)" for p in full))
    assert true_npartite_value(changed, lab) == true_npartite_value(comb, lab)


@given(st.integers(2, 4), st.data())
def test_single_ghz_vanishes_off_its_parties(N, data):
    s = data.draw(st.sampled_from(enumerate_ghz_labels(N)))
    comb = GhzCombination({s: 1}, N=N)
    for lab in enumerate_labels(N):
        if not (lab.is_bi_gp or lab.is_true_npartite):
            continue
        if lab.is_bi_gp and not contributes(s, *lab.gps):
            assert bi_gp_value(comb, *lab.gps) == 0
        if lab.is_true_npartite and len(lab) > 2 and set(lab.parties) != set(s):
            assert label_value(comb, lab) == 0


@given(combinations())
def test_profile_values_are_exact(comb):
    for lab, v in combination_profile(comb).items():
        assert v.kind.value == "Exact"
        assert v.value == label_value(comb, lab)
