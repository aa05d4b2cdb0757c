import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from families import window_ham, window_l1
from l1match.oracle import cap, naive_ham, naive_l1, naive_wild
from l1match.seqcore import INF, WILDCARD, DistanceArray, WildcardSequence

T, P = [1, 3, 2, 5], [2, 2]


def test_naive_l1_example():
    assert naive_l1(T, P).tolist() == [2, 1, 3]


def test_naive_ham_example():
    # windows [1,3], [3,2], [2,5] against [2,2]: the last differs only at 5
    assert naive_ham(T, P).tolist() == [2, 1, 1]


def test_identity_alignment_scores_zero():
    assert naive_l1(T, T)[0] == 0
    assert naive_ham(T, T)[0] == 0


def test_single_zero_pattern_returns_text():
    assert naive_l1(T, [0]).tolist() == T


def test_disjoint_alphabets_mismatch_everywhere():
    assert naive_ham([0, 1, 0, 1], [2, 3, 2]).tolist() == [3, 3]


def test_naive_wild_examples():
    assert naive_wild(WildcardSequence.of([WILDCARD, 4]), WildcardSequence.of([7])).tolist() == [0, 3]
    all_wild = WildcardSequence.of([WILDCARD, WILDCARD])
    assert naive_wild(WildcardSequence.of([1, 2, 3]), all_wild, "ham").tolist() == [0, 0]


@given(st.lists(st.integers(0, 9), min_size=3, max_size=30), st.data())
def test_naive_wild_without_wildcards_is_naive(t, data):
    p = data.draw(st.lists(st.integers(0, 9), min_size=1, max_size=len(t)))
    assert naive_wild(WildcardSequence.of(t), WildcardSequence.of(p), "l1") == naive_l1(t, p)
    assert naive_wild(WildcardSequence.of(t), WildcardSequence.of(p), "ham") == naive_ham(t, p)


@given(st.lists(st.integers(0, 50), min_size=3, max_size=40), st.data())
def test_vectorized_test_oracle_matches_naive(t, data):
    p = data.draw(st.lists(st.integers(0, 50), min_size=1, max_size=len(t)))
    assert naive_l1(t, p).tolist() == window_l1(t, p).tolist()
    assert naive_ham(t, p).tolist() == window_ham(t, p).tolist()


def test_cap_examples():
    assert cap(DistanceArray.of([2, 1, 3]), 2).tolist() == [2, 1, INF]
    assert cap(DistanceArray.of([0, 1, 0]), 0).tolist() == [0, INF, 0]


@given(st.lists(st.integers(0, 20), min_size=1, max_size=20), st.integers(0, 20))
def test_cap_idempotent(values, k):
    once = cap(DistanceArray.of(values), k)
    assert cap(once, k) == once


def test_pattern_longer_than_text_rejected():
    with pytest.raises(ValueError):
        naive_l1([1], [1, 2])
