"""Exact text-to-pattern distances on run-length encoded inputs with wildcards.

Two equal-symbol blocks, text positions [u, v] and pattern positions [y, z],
overlap in a trapezoid-shaped number of aligned pairs as the alignment moves.
Its second difference is nonzero at four indices only, so the second
difference of the whole distance array is a sum of four impulses per block
pair, and two anchor values recover the array.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import instrument
from .convolve import correlate
from .seqcore import WILDCARD, DistanceArray, RleSequence, WildcardSequence, rle_decode


@dataclass(frozen=True, eq=False)
class SecondDerivative:
    """d2[i] = S[i+2] - 2 S[i+1] + S[i], plus the anchors S[0] and S[1]."""

    d2: np.ndarray
    anchors: tuple
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if len(self.anchors) != min(2, self.length):
            raise ValueError("need one anchor per leading entry (at most two)")
        if len(self.d2) != max(0, self.length - 2):
            raise ValueError("d2 must have length - 2 entries")


def differentiate(S) -> SecondDerivative:
    s = np.asarray(S, dtype=np.int64)
    d2 = s[2:] - 2 * s[1:-1] + s[:-2] if len(s) > 2 else np.zeros(0, dtype=np.int64)
    return SecondDerivative(d2, tuple(int(v) for v in s[:2]), len(s))


def integrate(d: SecondDerivative) -> np.ndarray:
    if d.length == 1:
        return np.array([d.anchors[0]], dtype=np.int64)
    first = np.empty(d.length - 1, dtype=np.int64)
    first[0] = d.anchors[1] - d.anchors[0]
    first[1:] = first[0] + np.cumsum(d.d2)
    out = np.empty(d.length, dtype=np.int64)
    out[0] = d.anchors[0]
    out[1:] = d.anchors[0] + np.cumsum(first)
    return out


def _blocks(rle: RleSequence):
    """Arrays (start, end, symbol) of non-wildcard runs."""
    rows = [(s, e, sym) for s, e, sym in rle.blocks() if sym is not WILDCARD]
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    arr = np.array(rows, dtype=np.int64)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def _check(T: RleSequence, P: RleSequence):
    for rle in (T, P):
        if sum(length for _, length in rle.runs) != rle.total_length:
            raise ValueError("run lengths disagree with declared total length")
    if P.total_length > T.total_length:
        raise ValueError(f"pattern longer than text ({P.total_length} > {T.total_length})")
    if P.total_length == 0:
        raise ValueError("empty pattern")


def _anchor_values(T: RleSequence, P: RleSequence, weight) -> tuple:
    t, p = rle_decode(T), rle_decode(P)
    m = P.total_length
    count = T.total_length - m + 1
    anchors = []
    for i in range(min(2, count)):
        both = ~(t.wild[i:i + m] | p.wild)
        anchors.append(int(weight(t.values[i:i + m][both], p.values[both]).sum()))
    return tuple(anchors)


def _accumulate(d2: np.ndarray, index: np.ndarray, weight: np.ndarray):
    keep = (index >= 0) & (index < len(d2))
    np.add.at(d2, index[keep], weight[keep])


def _block_pair_d2(tu, tv, py, pz, weights, size: int) -> np.ndarray:
    """Sum of trapezoid second differences for the given block pairs."""
    d2 = np.zeros(size, dtype=np.int64)
    _accumulate(d2, tu - pz - 2, weights)
    _accumulate(d2, tv - pz - 1, -weights)
    _accumulate(d2, tu - py - 1, -weights)
    _accumulate(d2, tv - py, weights)
    return d2


def _matching_pairs(t_sym, p_sym):
    """Index pairs (a, b) with t_sym[a] == p_sym[b], found by sorting and joining."""
    order_t = np.argsort(t_sym, kind="stable")
    order_p = np.argsort(p_sym, kind="stable")
    st, sp = t_sym[order_t], p_sym[order_p]
    left_t = np.searchsorted(st, sp, side="left")
    right_t = np.searchsorted(st, sp, side="right")
    counts = right_t - left_t
    b_idx = np.repeat(order_p, counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    a_idx = order_t[np.repeat(left_t, counts) + offsets]
    return a_idx, b_idx


def rle_ham(T: RleSequence, P: RleSequence) -> DistanceArray:
    """Exact Hamming array; wildcards contribute 0."""
    _check(T, P)
    count = T.total_length - P.total_length + 1
    tu, tv, ts = _blocks(T)
    py, pz, ps = _blocks(P)
    a, b = _matching_pairs(ts, ps)
    instrument.bump("block_pairs", len(a))
    d2 = _block_pair_d2(tu[a], tv[a], py[b], pz[b], np.ones(len(a), dtype=np.int64), max(0, count - 2))
    matches = integrate(SecondDerivative(d2, _anchor_values(T, P, lambda x, y: (x == y)), count))
    t, p = rle_decode(T), rle_decode(P)
    aligned = correlate((~t.wild).astype(np.int64), (~p.wild).astype(np.int64))
    return DistanceArray.exact(aligned - matches)


def rle_l1(T: RleSequence, P: RleSequence) -> DistanceArray:
    """Exact L1 array; every non-wildcard block pair weighted by |a - b|."""
    _check(T, P)
    count = T.total_length - P.total_length + 1
    tu, tv, ts = _blocks(T)
    py, pz, ps = _blocks(P)
    a = np.repeat(np.arange(len(tu)), len(py))
    b = np.tile(np.arange(len(py)), len(tu))
    weights = np.abs(ts[a] - ps[b])
    nonzero = weights != 0
    a, b, weights = a[nonzero], b[nonzero], weights[nonzero]
    instrument.bump("block_pairs", len(a))
    d2 = _block_pair_d2(tu[a], tv[a], py[b], pz[b], weights, max(0, count - 2))
    return DistanceArray.exact(integrate(SecondDerivative(d2, _anchor_values(T, P, lambda x, y: np.abs(x - y)), count)))


# ---------------------------------------------------------------------------
# sparse instances and the capped-Hamming route

HammingBackend = Callable[[np.ndarray, np.ndarray, int], DistanceArray]


def sparse_to_capped(T_sparse: WildcardSequence, P_sparse: WildcardSequence,
                     capped_backend: HammingBackend, k: int | None = None) -> DistanceArray:
    """Wildcard Hamming of sparse inputs from two wildcard-free capped instances.

    Instance 1 replaces wildcards by 0, instance 2 is the non-wildcard
    indicator; Ham = Ham1 - Ham2 entrywise. Each instance has at most
    2k non-zero symbols in any window, so a 2k-capped backend is exact here.
    """
    t_real, p_real = T_sparse.nonwild_count, P_sparse.nonwild_count
    if k is None:
        k = max(t_real, p_real)
    if t_real > k or p_real > k:
        raise ValueError(f"sparsity bound violated: {max(t_real, p_real)} regular symbols > {k}")
    for seq in (T_sparse, P_sparse):
        if (seq.values[~seq.wild] <= 0).any():
            raise ValueError("sparse symbols must be positive integers")
    t1 = np.where(T_sparse.wild, 0, T_sparse.values)
    p1 = np.where(P_sparse.wild, 0, P_sparse.values)
    t2 = (~T_sparse.wild).astype(np.int64)
    p2 = (~P_sparse.wild).astype(np.int64)
    first = capped_backend(t1, p1, 2 * k)
    second = capped_backend(t2, p2, 2 * k)
    if first.has_infinite or second.has_infinite:
        raise ArithmeticError("capped backend exceeded 2k on a sparse instance")
    return DistanceArray.exact(first.values - second.values)


def _marker_sequence(length: int, positions: np.ndarray, symbols: np.ndarray, left_pad: int = 0,
                     right_pad: int = 0) -> WildcardSequence:
    values = np.zeros(left_pad + length + right_pad, dtype=np.int64)
    wild = np.ones(len(values), dtype=bool)
    values[left_pad + positions] = symbols
    wild[left_pad + positions] = False
    return WildcardSequence(values, wild, max(1, int(values.max(initial=0))))


def rle_ham_via_capped(T: RleSequence, P: RleSequence, capped_backend: HammingBackend) -> DistanceArray:
    """rle_ham with each impulse family counted through sparse capped instances.

    For a marker pair (text block start or end, pattern block start or end),
    the number of equal-symbol block pairs at offset d is the match count of
    two sparse strings carrying the block symbols at the marker positions.
    Matches are recovered as aligned regular pairs minus sparse mismatches.
    """
    _check(T, P)
    n, m = T.total_length, P.total_length
    count = n - m + 1
    tu, tv, ts = _blocks(T)
    py, pz, ps = _blocks(P)
    # offsets d = x - y range over [-(m-1), n-1]; left pad shifts them to >= 0
    pad = m - 1
    sym_t, sym_p = ts + 1, ps + 1

    def pair_counts(text_marks, pat_marks):
        st = _marker_sequence(n, text_marks, sym_t, pad, pad)
        sp = _marker_sequence(m, pat_marks, sym_p)
        mism = sparse_to_capped(st, sp, capped_backend, max(len(tu), len(py), 1))
        aligned = correlate((~st.wild).astype(np.int64), (~sp.wild).astype(np.int64))
        return aligned - mism.values

    d2 = np.zeros(max(0, count - 2), dtype=np.int64)
    if len(tu) and len(py):
        # pair_counts(...)[d + pad] counts block pairs at offset d
        for text_marks, pat_marks, sign, lag in ((tu, pz, 1, 2), (tv, pz, -1, 1),
                                                 (tu, py, -1, 1), (tv, py, 1, 0)):
            counts = pair_counts(text_marks, pat_marks)
            # impulse lands at index d - lag
            lo = pad + lag
            part = counts[lo:lo + len(d2)]
            d2[:len(part)] += sign * part
    matches = integrate(SecondDerivative(d2, _anchor_values(T, P, lambda x, y: (x == y)), count))
    t, p = rle_decode(T), rle_decode(P)
    aligned = correlate((~t.wild).astype(np.int64), (~p.wild).astype(np.int64))
    return DistanceArray.exact(aligned - matches)
