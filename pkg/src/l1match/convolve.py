"""Exact integer correlation and generalized weighted mismatches."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np
from scipy.fft import irfft, next_fast_len, rfft

from . import instrument
from .seqcore import as_int_array

# Results must stay well inside int64 while limb terms are summed.
_EXACT_LIMIT = 2**60
# Float transforms are trusted below this magnitude * log2(size) budget.
_FLOAT_BUDGET = 2**44
# np.correlate (exact integer, O(nm)) beats the transform for short patterns.
_DIRECT_MAX_M = 48


def _max_abs(x: np.ndarray) -> int:
    return int(np.abs(x).max()) if len(x) else 0


def _float_correlate(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Transform-based correlation; None when the rounding margin is too thin."""
    n, m = len(a), len(b)
    size = next_fast_len(n, real=True)
    fa = rfft(a.astype(np.float64), size)
    fb = rfft(b[::-1].astype(np.float64), size)
    raw = irfft(fa * fb, size)[m - 1:n]
    out = np.rint(raw)
    if len(raw) and np.abs(raw - out).max() > 0.2:
        return None
    return out.astype(np.int64)


def _split_correlate(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    amax, bmax = _max_abs(a), _max_abs(b)
    m = len(b)
    log_size = max(1, math.ceil(math.log2(max(2, len(a)))))
    if amax * bmax * m * log_size <= _FLOAT_BUDGET:
        out = _float_correlate(a, b)
        if out is not None:
            return out
        if amax <= 1 and bmax <= 1:
            return np.correlate(a, b, "valid")
    # split the wider operand into low and high limbs; floor shift keeps signs exact
    if amax >= bmax:
        bits = max(1, amax.bit_length() // 2)
        lo, hi = a & ((1 << bits) - 1), a >> bits
        return _split_correlate(lo, b) + (_split_correlate(hi, b) << bits)
    bits = max(1, bmax.bit_length() // 2)
    lo, hi = b & ((1 << bits) - 1), b >> bits
    return _split_correlate(a, lo) + (_split_correlate(a, hi) << bits)


def correlate(a, b) -> np.ndarray:
    """out[i] = sum_j a[i+j] * b[j] for i in [0, n-m], computed exactly."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n, m = len(a), len(b)
    if m == 0:
        raise ValueError("empty pattern")
    if m > n:
        raise ValueError(f"pattern longer than text ({m} > {n})")
    instrument.bump("correlations")
    if not b.any() or not a.any():
        return np.zeros(n - m + 1, dtype=np.int64)
    amax, bmax = _max_abs(a), _max_abs(b)
    if amax * bmax * m >= _EXACT_LIMIT:
        raise OverflowError("correlation magnitude exceeds exact int64 range")
    instrument.bump("transforms")
    if m <= _DIRECT_MAX_M:
        return np.correlate(a, b, "valid")
    return _split_correlate(a, b)


def correlate_rows_sum(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """sum_r correlate(A[r], B[r]) for 0/1-valued (or small) row batches."""
    A = np.asarray(A)
    B = np.asarray(B)
    rows, n = A.shape
    m = B.shape[1]
    if m > n:
        raise ValueError(f"pattern longer than text ({m} > {n})")
    instrument.bump("correlations", rows)
    instrument.bump("transforms")
    bound = int(np.abs(A).max(initial=0)) * int(np.abs(B).max(initial=0)) * m * rows
    if bound >= _EXACT_LIMIT:
        raise OverflowError("correlation magnitude exceeds exact int64 range")
    size = next_fast_len(n, real=True)
    fa = rfft(A.astype(np.float64), size, axis=1)
    fb = rfft(B[:, ::-1].astype(np.float64), size, axis=1)
    raw = irfft((fa * fb).sum(axis=0), size)[m - 1:n]
    out = np.rint(raw)
    if bound * math.log2(size + 1) > _FLOAT_BUDGET or np.abs(raw - out).max(initial=0) > 0.2:
        return sum(np.correlate(A[r].astype(np.int64), B[r].astype(np.int64), "valid")
                   for r in range(rows))
    return out.astype(np.int64)


def autocorrelate_rows_sum(A: np.ndarray) -> np.ndarray:
    """out[s] = sum_r sum_j A[r, s+j] * A[r, j] for every shift s in [0, L)."""
    A = np.asarray(A)
    rows, length = A.shape
    instrument.bump("correlations", rows)
    instrument.bump("transforms")
    size = next_fast_len(2 * length, real=True)
    fa = rfft(A.astype(np.float64), size, axis=1)
    raw = irfft((fa * np.conj(fa)).sum(axis=0), size)[:length]
    out = np.rint(raw)
    bound = int(np.abs(A).max(initial=0)) ** 2 * length * rows
    if bound * math.log2(size + 1) > _FLOAT_BUDGET or np.abs(raw - out).max(initial=0) > 0.2:
        Ai = A.astype(np.int64)
        out = np.array([(Ai[:, s:] * Ai[:, :length - s]).sum() for s in range(length)])
    return out.astype(np.int64)


@dataclass(frozen=True)
class WeightFunction:
    """Symbol-pair weight sigma(text_symbol, pattern_symbol) over [0, domain_size).

    ``evaluate`` must broadcast over numpy arrays. ``naive_kernel``, when set,
    computes the whole weighted array for (text, pattern) directly and is used
    on the direct route.
    """

    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain_size: int
    bound: int
    naive_kernel: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    @classmethod
    def from_table(cls, table) -> "WeightFunction":
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("weight table must be square")
        return cls(lambda x, y: table[x, y], table.shape[0], _max_abs(table.ravel()))


@numba.njit(cache=True)
def _direct_hamming(t, p):
    n, m = t.shape[0], p.shape[0]
    out = np.zeros(n - m + 1, dtype=np.int64)
    for i in range(n - m + 1):
        s = 0
        for j in range(m):
            if t[i + j] != p[j]:
                s += 1
        out[i] = s
    return out


@numba.njit(cache=True)
def _direct_l1(t, p):
    n, m = t.shape[0], p.shape[0]
    out = np.zeros(n - m + 1, dtype=np.int64)
    for i in range(n - m + 1):
        s = 0
        for j in range(m):
            s += abs(t[i + j] - p[j])
        out[i] = s
    return out


def hamming_weight(domain_size: int) -> WeightFunction:
    return WeightFunction(lambda x, y: (x != y).astype(np.int64), domain_size, 1, _direct_hamming)


def l1_weight(domain_size: int) -> WeightFunction:
    return WeightFunction(lambda x, y: np.abs(x - y), domain_size, max(1, domain_size - 1), _direct_l1)


def _direct_generic(t: np.ndarray, p: np.ndarray, sigma: WeightFunction) -> np.ndarray:
    n, m = len(t), len(p)
    out = np.zeros(n - m + 1, dtype=np.int64)
    for j in range(m):
        out += np.asarray(sigma.evaluate(t[j:j + n - m + 1], p[j]), dtype=np.int64)
    return out


def choose_route(domain_size: int, m: int) -> str:
    """'direct' when |alphabet| * log m exceeds m, else 'convolution'."""
    return "direct" if domain_size * math.log2(max(m, 2)) > m else "convolution"


def weighted_mismatches(T, P, sigma: WeightFunction, route: str = "auto") -> np.ndarray:
    """Signed array S[i] = sum_j sigma(T[i+j], P[j]).

    The convolution route issues one correlation per alphabet symbol c:
    the characteristic vector of c in P against sigma(T, c).
    """
    t = as_int_array(T)
    p = as_int_array(P)
    n, m = len(t), len(p)
    if m == 0 or n == 0:
        raise ValueError("empty sequence")
    if m > n:
        raise ValueError(f"pattern longer than text ({m} > {n})")
    for seq in (t, p):
        if seq.min() < 0 or seq.max() >= sigma.domain_size:
            raise ValueError(f"symbol outside weight domain [0, {sigma.domain_size})")
    if route == "auto":
        route = choose_route(sigma.domain_size, m)
    if route == "direct":
        if sigma.naive_kernel is not None:
            return sigma.naive_kernel(t, p)
        return _direct_generic(t, p, sigma)
    if route != "convolution":
        raise ValueError(f"unknown route {route!r}")
    out = np.zeros(n - m + 1, dtype=np.int64)
    for c in range(sigma.domain_size):
        chi = (p == c).astype(np.int64)
        weights = np.asarray(sigma.evaluate(t, np.int64(c)), dtype=np.int64)
        out += correlate(weights, chi)
    return out


def exact_l1(T, P) -> np.ndarray:
    t, p = as_int_array(T), as_int_array(P)
    top = int(max(t.max(), p.max())) + 1
    return weighted_mismatches(t, p, l1_weight(top))


def exact_hamming(T, P) -> np.ndarray:
    t, p = as_int_array(T), as_int_array(P)
    top = int(max(t.max(), p.max())) + 1
    return weighted_mismatches(t, p, hamming_weight(top))
