"""Longest-common-prefix queries between text and pattern suffixes, and
mismatch-by-mismatch verification of single alignments.
"""
from __future__ import annotations

import numpy as np

from . import instrument
from .seqcore import INF, DistanceArray, as_int_array


def suffix_array(seq: np.ndarray) -> np.ndarray:
    """Prefix-doubling suffix array of an integer sequence."""
    n = len(seq)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, rank = np.unique(seq, return_inverse=True)
    rank = rank.astype(np.int64)
    step = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if step < n:
            second[:n - step] = rank[step:]
        order = np.lexsort((second, rank))
        keys_r, keys_s = rank[order], second[order]
        fresh = np.empty(n, dtype=np.int64)
        fresh[0] = 0
        fresh[1:] = np.cumsum((keys_r[1:] != keys_r[:-1]) | (keys_s[1:] != keys_s[:-1]))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = fresh
        if fresh[-1] == n - 1:
            return order
        step *= 2


def lcp_array(seq: list, sa: list) -> list:
    """Kasai: lcp[r] = LCP of suffixes sa[r-1] and sa[r]; lcp[0] = 0."""
    n = len(sa)
    rank = [0] * n
    for r, s in enumerate(sa):
        rank[s] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and seq[i + h] == seq[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


class SparseTableMin:
    """O(1) range-minimum queries after O(N log N) preprocessing."""

    def __init__(self, data):
        arr = np.asarray(data, dtype=np.int64)
        self.table = [arr]
        width = 1
        while 2 * width <= len(arr):
            prev = self.table[-1]
            self.table.append(np.minimum(prev[:-width], prev[width:]))
            width *= 2
        self.rows = [row.tolist() for row in self.table]

    def query(self, lo: int, hi: int) -> int:
        """Minimum over data[lo:hi], hi > lo."""
        level = (hi - lo).bit_length() - 1
        row = self.rows[level]
        a, b = row[lo], row[hi - (1 << level)]
        return a if a < b else b


class LcpIndex:
    """lcp(i, j): common prefix length of text[i:] and pattern[j:]."""

    def __init__(self, text, pattern):
        t, p = as_int_array(text), as_int_array(pattern)
        self.text = t.tolist()
        self.pattern = p.tolist()
        self.n, self.m = len(t), len(p)
        # separators sit below every symbol and differ from each other
        low = int(min(t.min(initial=0), p.min(initial=0)))
        joint = np.concatenate([t, [low - 1], p, [low - 2]])
        sa = suffix_array(joint)
        self._rank = np.empty(len(joint), dtype=np.int64)
        self._rank[sa] = np.arange(len(joint))
        self._rank = self._rank.tolist()
        self._rmq = SparseTableMin(lcp_array(joint.tolist(), sa.tolist()))

    def lcp(self, i: int, j: int) -> int:
        if i >= self.n or j >= self.m:
            return 0
        a, b = self._rank[i], self._rank[self.n + 1 + j]
        if a > b:
            a, b = b, a
        return self._rmq.query(a + 1, b + 1)


def build_lcp(T, P) -> LcpIndex:
    return LcpIndex(T, P)


def verify_alignment(idx: LcpIndex, T, P, i: int, k: int):
    """Exact L1 at alignment i, or INF once the running sum exceeds k."""
    text, pattern = idx.text, idx.pattern
    m = idx.m
    if not 0 <= i <= idx.n - m:
        raise IndexError(f"alignment {i} outside [0, {idx.n - m}]")
    total = 0
    j = 0
    while True:
        instrument.bump("kangaroo_jumps")
        j += idx.lcp(i + j, j)
        if j >= m:
            return total
        total += abs(text[i + j] - pattern[j])
        if total > k:
            return INF
        j += 1


def k_mismatch(T, P, k: int, idx: LcpIndex | None = None) -> DistanceArray:
    """k-capped Hamming array via at most k + 1 jumps per alignment."""
    idx = build_lcp(T, P) if idx is None else idx
    m = idx.m
    out = []
    for i in range(idx.n - m + 1):
        mism = 0
        j = idx.lcp(i, 0)
        while j < m and mism <= k:
            mism += 1
            j += 1
            j += idx.lcp(i + j, j)
        out.append(INF if mism > k else mism)
    return DistanceArray.of(out)
