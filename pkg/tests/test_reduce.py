from fractions import Fraction

import numpy as np
import pytest

from families import capped, periodic, as_list, window_l1
from l1match.kernel import kapprox_l1
from l1match.oracle import naive_ham, naive_l1
from l1match.reduce import (
    LinearReduction, apply, apply_family, collapse_thresholds, ham_to_l1, kangaroo_ham_backend,
    kapprox_l1_via_ham, l1_to_ham, map_symbols, verify_family, verify_identity,
)
from l1match.seqcore import INF, DistanceArray, WildcardSequence, WILDCARD, rle_encode


def identity(x):
    return x


def test_identity_reduction_passes_base_through():
    red = LinearReduction((1,), (identity,), (identity,))
    t, p = [3, 1, 4, 1, 5], [2, 7]
    assert apply(red, t, p, naive_l1) == naive_l1(t, p)


def symbol_score(red, x, y, base):
    total = red.constant
    for a, f, g in zip(red.coefficients, red.text_maps, red.pattern_maps):
        total += a * base(int(f(np.array(x))), int(g(np.array(y))))
    return total


def test_ham_to_l1_pointwise_examples():
    red = ham_to_l1()
    l1 = lambda a, b: abs(a - b)
    assert symbol_score(red, 4, 4, l1) == 0
    assert symbol_score(red, 3, 7, l1) == 1


def test_ham_to_l1_exhaustive():
    assert verify_identity(ham_to_l1(100))


@pytest.mark.parametrize("seed", range(500))
def test_ham_to_l1_on_sequences(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    m = int(rng.integers(1, n + 1))
    t, p = rng.integers(0, 9, n), rng.integers(0, 9, m)
    assert apply(ham_to_l1(), t, p, naive_l1) == naive_ham(t.tolist(), p.tolist())


def test_l1_to_ham_single_instance_for_binary_domain():
    family = l1_to_ham(1)
    assert len(family) == 1 and verify_family(family)


def test_l1_to_ham_thresholds_example():
    differing = [t for t, red in enumerate(l1_to_ham(5), start=1)
                 if red.text_maps[0](np.array(2)) != red.pattern_maps[0](np.array(5))]
    assert differing == [3, 4, 5]


@pytest.mark.parametrize("M", [2, 7, 33, 64])
def test_l1_to_ham_on_sequences(M):
    rng = np.random.default_rng(M)
    for _ in range(20):
        t, p = rng.integers(0, M + 1, 30), rng.integers(0, M + 1, 7)
        assert apply_family(l1_to_ham(M), t, p, naive_ham) == naive_l1(t.tolist(), p.tolist())


def test_threshold_maps_never_add_runs():
    rng = np.random.default_rng(0)
    family = l1_to_ham(8)
    for _ in range(1000):
        items = [WILDCARD if rng.random() < 0.2 else int(rng.integers(0, 9)) for _ in range(30)]
        rle = rle_encode(WildcardSequence.of(items, 8))
        red = family[int(rng.integers(0, 8))]
        assert len(map_symbols(rle, red.text_maps[0])) <= len(rle)


@pytest.mark.parametrize("seed", range(50))
def test_collapsed_family_matches_full_family(seed):
    rng = np.random.default_rng(seed)
    t, p = rng.integers(0, 30, 25), rng.integers(0, 30, 6)
    symbols = np.concatenate([t, p])
    collapsed = apply_family(collapse_thresholds(symbols), t, p, naive_ham)
    assert collapsed == apply_family(l1_to_ham(29), t, p, naive_ham)


def test_apply_rejects_capped_results():
    red = LinearReduction((1,), (identity,), (identity,))
    with pytest.raises(ValueError):
        apply(red, [1, 2], [1], lambda a, b: DistanceArray.of([0, INF]))


def test_mismatched_lengths_rejected():
    with pytest.raises(ValueError):
        LinearReduction((1, 2), (identity,), (identity,))


@pytest.mark.parametrize("seed", range(10))
def test_via_ham_agrees(seed):
    t, p = periodic(256, 32, 6, seed, alphabet=12)
    want = capped(window_l1(t.data, p.data), 6)
    assert as_list(kapprox_l1_via_ham(t, p, 6, rng=seed)) == want
    assert as_list(kapprox_l1(t, p, 6, rng=seed)) == want


def test_via_ham_with_kangaroo_backend():
    t, p = periodic(256, 32, 6, 1, alphabet=12)
    got = kapprox_l1_via_ham(t, p, 6, rng=1, ham_backend=kangaroo_ham_backend)
    assert as_list(got) == capped(window_l1(t.data, p.data), 6)


def test_via_ham_zero_k_finds_exact_occurrences():
    p = np.array([4, 8, 15, 16, 23, 42, 0, 1] * 2)
    t = np.concatenate([p, [9, 9, 9], p])
    got = kapprox_l1_via_ham(t, p, 0, rng=2)
    assert [i for i, v in enumerate(got) if v is not INF] == [0, 19]
