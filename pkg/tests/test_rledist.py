import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from l1match.oracle import naive_wild
from l1match.reduce import convolution_ham_backend, kangaroo_ham_backend, rle_l1_via_ham
from l1match.rledist import (
    SecondDerivative, differentiate, integrate, rle_ham, rle_ham_via_capped, rle_l1, sparse_to_capped,
)
from l1match.seqcore import WILDCARD, RleSequence, WildcardSequence, rle_encode

W = WILDCARD


def random_runs(rng, max_runs, max_symbol, wild_rate=0.25, max_len=6):
    items = []
    for _ in range(int(rng.integers(1, max_runs + 1))):
        sym = W if rng.random() < wild_rate else int(rng.integers(0, max_symbol + 1))
        items += [sym] * int(rng.integers(1, max_len + 1))
    return WildcardSequence.of(items, max_symbol)


def random_pair(seed, max_runs=16, max_symbol=5):
    rng = np.random.default_rng(seed)
    while True:
        t = random_runs(rng, max_runs, max_symbol)
        p = random_runs(rng, max(1, max_runs // 2), max_symbol)
        if len(p) <= len(t):
            return t, p


def test_rle_ham_two_blocks():
    a, b = 0, 1
    T = RleSequence(((a, 3), (b, 3)), 6)
    P = RleSequence(((a, 1), (b, 1)), 2)
    # windows aa, aa, ab, bb, bb against ab
    assert rle_ham(T, P).tolist() == [1, 1, 0, 1, 1]
    assert rle_ham(T, P) == naive_wild(WildcardSequence.of([a] * 3 + [b] * 3), WildcardSequence.of([a, b]), "ham")


def test_all_wildcard_pattern_scores_zero():
    T = rle_encode(WildcardSequence.of([1, 2, 2, 0]))
    P = RleSequence(((W, 2),), 2)
    assert rle_ham(T, P).tolist() == [0, 0, 0]
    assert rle_l1(T, P).tolist() == [0, 0, 0]


def test_rle_l1_constant_runs():
    assert rle_l1(RleSequence(((5, 4),), 4), RleSequence(((5, 2),), 2)).tolist() == [0, 0, 0]


def test_rle_l1_two_blocks():
    T = RleSequence(((1, 2), (4, 2)), 4)
    P = RleSequence(((2, 1), (3, 1)), 2)
    # [1,1], [1,4], [4,4] against [2,3]
    assert rle_l1(T, P).tolist() == [3, 2, 3]


@pytest.mark.parametrize("seed", range(1000))
def test_rle_distances_match_oracle(seed):
    t, p = random_pair(seed)
    T, P = rle_encode(t), rle_encode(p)
    assert rle_ham(T, P) == naive_wild(t, p, "ham")
    assert rle_l1(T, P) == naive_wild(t, p, "l1")


@pytest.mark.parametrize("seed", range(500))
def test_rle_l1_agrees_with_threshold_route(seed):
    t, p = random_pair(seed, max_runs=10, max_symbol=9)
    T, P = rle_encode(t), rle_encode(p)
    assert rle_l1(T, P) == rle_l1_via_ham(T, P)


@pytest.mark.parametrize("seed", range(100))
def test_capped_route_matches_rle_ham(seed):
    t, p = random_pair(seed)
    T, P = rle_encode(t), rle_encode(p)
    want = rle_ham(T, P)
    assert rle_ham_via_capped(T, P, convolution_ham_backend) == want
    assert rle_ham_via_capped(T, P, kangaroo_ham_backend) == want


def test_rle_rejects_inconsistent_lengths():
    with pytest.raises(ValueError):
        rle_ham(RleSequence(((1, 2),), 2), RleSequence(((1, 3),), 3))


def test_integrate_examples():
    d = differentiate([0, 0, 0])
    assert d.d2.tolist() == [0] and d.anchors == (0, 0)
    d = differentiate([2, 1, 3])
    assert d.d2.tolist() == [3] and d.anchors == (2, 1)
    assert integrate(d).tolist() == [2, 1, 3]


def test_short_arrays_round_trip():
    for s in ([7], [7, 3]):
        assert integrate(differentiate(s)).tolist() == s
    with pytest.raises(ValueError):
        SecondDerivative(np.zeros(3, dtype=np.int64), (0, 0), 4)


@given(st.lists(st.integers(-10**9, 10**9), min_size=1, max_size=80))
def test_integrate_round_trip(s):
    assert integrate(differentiate(s)).tolist() == s


@given(st.lists(st.tuples(st.integers(-99, 99), st.integers(-99, 99)), min_size=3, max_size=40))
def test_second_derivative_is_linear(pairs):
    a, b = np.array(pairs).T
    assert np.array_equal(differentiate(a + b).d2, differentiate(a).d2 + differentiate(b).d2)


def test_sparse_examples():
    backend = convolution_ham_backend
    all_wild = WildcardSequence.of([W, W, W])
    assert sparse_to_capped(all_wild, WildcardSequence.of([W]), backend).tolist() == [0, 0, 0]
    p = WildcardSequence.of([3])
    assert sparse_to_capped(WildcardSequence.of([W, 3, W]), p, backend).tolist() == [0, 0, 0]
    assert sparse_to_capped(WildcardSequence.of([W, 4, W]), p, backend).tolist() == [0, 1, 0]


@pytest.mark.parametrize("seed", range(500))
def test_sparse_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 60))
    m = int(rng.integers(1, n + 1))
    k = int(rng.integers(1, 6))

    def sparse(length):
        items = [W] * length
        for j in rng.choice(length, size=min(k, length), replace=False):
            items[j] = int(rng.integers(1, 5))
        return WildcardSequence.of(items, 4)

    t, p = sparse(n), sparse(m)
    backend = kangaroo_ham_backend if seed % 2 else convolution_ham_backend
    assert sparse_to_capped(t, p, backend, k) == naive_wild(t, p, "ham")


def test_sparse_rejects_dense_input():
    dense = WildcardSequence.of([1, 2, 3])
    with pytest.raises(ValueError):
        sparse_to_capped(dense, WildcardSequence.of([1]), convolution_ham_backend, k=2)
