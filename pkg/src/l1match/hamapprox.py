"""Constant-factor Hamming distance estimates via random binary projections.

Every repetition maps each symbol to a uniformly random bit (a keyed hash,
so no alphabet-sized table is needed). Two unequal symbols are separated with
probability 1/2, so twice the mean projected mismatch count is unbiased.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convolve import autocorrelate_rows_sum, correlate, correlate_rows_sum
from .seqcore import DistanceArray, as_int_array

DEFAULT_ZETA = 1 / 3

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def default_repetitions(n: int, zeta: float = DEFAULT_ZETA) -> int:
    """Hoeffding: a mean of R fair coins strays by zeta/2 w.p. <= 2 exp(-R zeta^2 / 2),
    so this R keeps each entry's failure probability below 2 / (n+2)^4."""
    return math.ceil(8 * math.log(n + 2) / zeta**2)


@dataclass(frozen=True, eq=False)
class ProjectionEstimate:
    """Summed projected mismatch counts over ``repetitions`` maps."""

    totals: np.ndarray
    repetitions: int
    zeta: float = DEFAULT_ZETA

    @property
    def raw_means(self) -> np.ndarray:
        return self.totals / self.repetitions

    @property
    def estimates(self) -> np.ndarray:
        return 2 * self.totals / self.repetitions

    def at_most(self, threshold: float) -> np.ndarray:
        """Mask of entries whose estimate is <= threshold, compared exactly."""
        if isinstance(threshold, (int, Fraction)):
            bound = Fraction(threshold)
        else:
            bound = Fraction(threshold).limit_denominator(10**6)
        # 2 * total / R <= num / den  <=>  2 * total * den <= num * R
        return 2 * self.totals * bound.denominator <= bound.numerator * self.repetitions


def ham_binary(T, P) -> DistanceArray:
    """Exact Hamming array of 0/1 sequences with two correlations."""
    t, p = as_int_array(T), as_int_array(P)
    for seq in (t, p):
        if len(seq) and not np.isin(seq, (0, 1)).all():
            raise ValueError("binary input required")
    ones = correlate(t, p)
    zeros = correlate(1 - t, 1 - p)
    return DistanceArray.exact(len(p) - ones - zeros)


def projection_bits(symbols: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """(len(keys), len(symbols)) matrix of hash bits, one row per repetition."""
    with np.errstate(over="ignore"):
        z = keys[:, None] + symbols.astype(np.uint64)[None, :] * _GOLDEN
        z ^= z >> np.uint64(30)
        z *= _MIX1
        z ^= z >> np.uint64(27)
        z *= _MIX2
        z ^= z >> np.uint64(31)
    return (z >> np.uint64(63)).astype(np.int8)


def _project(seq: np.ndarray, keys: np.ndarray) -> np.ndarray:
    uniq, inverse = np.unique(seq, return_inverse=True)
    return projection_bits(uniq, keys)[:, inverse]


def _draw_keys(rng, repetitions: int) -> np.ndarray:
    rng = np.random.default_rng(rng)
    return rng.integers(0, 2**64, size=repetitions, dtype=np.uint64)


def projected_mismatch_totals(t_bits: np.ndarray, p_bits: np.ndarray) -> np.ndarray:
    """sum over rows of the Hamming array of each projected pair.

    Per row, mismatches = windowsum(t) + sum(p) - 2 * correlate(t, p), the
    two-correlation count with the zeros term expanded.
    """
    rows, n = t_bits.shape
    m = p_bits.shape[1]
    cross = correlate_rows_sum(t_bits, p_bits)
    prefix = np.concatenate([[0], np.cumsum(t_bits.sum(axis=0, dtype=np.int64))])
    window = prefix[m:] - prefix[:n - m + 1]
    return window + int(p_bits.sum(dtype=np.int64)) - 2 * cross


def approx_ham(T, P, zeta: float = DEFAULT_ZETA, rng=None,
               repetitions: int | None = None) -> ProjectionEstimate:
    if not 0 < zeta < 1:
        raise ValueError("zeta must lie in (0, 1)")
    t, p = as_int_array(T), as_int_array(P)
    if len(p) > len(t):
        raise ValueError(f"pattern longer than text ({len(p)} > {len(t)})")
    reps = default_repetitions(len(t), zeta) if repetitions is None else repetitions
    keys = _draw_keys(rng, reps)
    # one key set for both sides: equal symbols always receive equal bits
    uniq, inverse = np.unique(np.concatenate([t, p]), return_inverse=True)
    bits = projection_bits(uniq, keys)
    t_bits, p_bits = bits[:, inverse[:len(t)]], bits[:, inverse[len(t):]]
    return ProjectionEstimate(projected_mismatch_totals(t_bits, p_bits), reps, zeta)


def approx_self_ham(P, zeta: float = DEFAULT_ZETA, rng=None,
                    repetitions: int | None = None) -> ProjectionEstimate:
    """Estimates of Ham(P[s:], P[:m-s]) indexed by shift s (entry 0 is shift 0)."""
    if not 0 < zeta < 1:
        raise ValueError("zeta must lie in (0, 1)")
    p = as_int_array(P)
    m = len(p)
    if m < 2:
        raise ValueError("pattern must have length >= 2")
    reps = default_repetitions(m, zeta) if repetitions is None else repetitions
    bits = _project(p, _draw_keys(rng, reps))
    ones = autocorrelate_rows_sum(bits)
    zeros = autocorrelate_rows_sum(1 - bits)
    overlap = m - np.arange(m)
    return ProjectionEstimate(reps * overlap - ones - zeros, reps, zeta)
