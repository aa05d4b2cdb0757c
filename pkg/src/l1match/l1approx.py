"""(1 +/- eps)-approximate text-to-pattern L1 distance.

Each run draws a uniform shift, slices the shifted values into b-bit
windows at every bit level, scores the windows with a three-way sign
estimate, and sums the per-level weighted mismatches scaled by 2**level.
The median over independent runs is reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from . import instrument
from .convolve import WeightFunction, exact_l1, weighted_mismatches
from .parallel import pmap
from .seqcore import DistanceArray, IntSequence, as_int_array


def ceil_log2(value: int) -> int:
    return max(0, int(value) - 1).bit_length()


def default_repetitions(n: int) -> int:
    return max(1, math.ceil(8 * math.log(n + 1)))


@dataclass(frozen=True)
class ApproxParams:
    epsilon: float
    max_value: int
    window_bits: int
    repetitions: int = 1

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.max_value < 1 or self.window_bits < 1 or self.repetitions < 1:
            raise ValueError("max_value, window_bits and repetitions must be >= 1")

    @classmethod
    def from_epsilon(cls, epsilon: float, max_value: int, n: int = 1,
                     repetitions: int | None = None) -> "ApproxParams":
        if not 0 < epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        inverse = 1 / cls._delta_fraction(epsilon, max_value)
        bits = 1
        while 2**bits < inverse:
            bits += 1
        reps = default_repetitions(n) if repetitions is None else repetitions
        return cls(epsilon, max_value, bits, reps)

    @staticmethod
    def _delta_fraction(epsilon: float, max_value: int) -> Fraction:
        eps = Fraction(epsilon).limit_denominator(10**9)
        return eps / (24 * (3 + ceil_log2(max_value)))

    @property
    def log_m(self) -> int:
        return ceil_log2(self.max_value)

    @property
    def delta(self) -> float:
        return float(self._delta_fraction(self.epsilon, self.max_value))

    @property
    def levels(self) -> int:
        return self.log_m + 1

    @property
    def shift_bound(self) -> int:
        return 2**self.log_m

    @property
    def alphabet_size(self) -> int:
        return 2**self.window_bits

    @property
    def window_covers_all(self) -> bool:
        return self.alphabet_size >= self.max_value + self.shift_bound


def score(x: int, y: int) -> int:
    """Three-way estimate of the sign contribution of the lowest window bit.

    x is the text window value, y the pattern window value.
    """
    x0, y0 = x % 2, y % 2
    if x0 == y0:
        return 0
    if _sgn(x - y) == _sgn(x0 - y0):
        return 1
    return -1


def _sgn(v: int) -> int:
    return (v > 0) - (v < 0)


def score_array(x, y):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    # parities differ only when x != y, so the product is the three-way score
    return ((x & 1) - (y & 1)) * np.sign(x - y)


@numba.njit(cache=True, nogil=True)
def _direct_score(t, p):
    n, m = t.shape[0], p.shape[0]
    out = np.zeros(n - m + 1, dtype=np.int64)
    for i in range(n - m + 1):
        s = 0
        for j in range(m):
            x = t[i + j]
            y = p[j]
            d = (x & 1) - (y & 1)
            if d != 0:
                if x > y:
                    s += d
                else:
                    s -= d
        out[i] = s
    return out


def score_weight(window_bits: int) -> WeightFunction:
    return WeightFunction(score_array, 2**window_bits, 1, _direct_score)


def pairwise_estimate(x, y, shift, params: ApproxParams) -> np.ndarray:
    """Elementwise single-pair estimate C of |x - y| for the given shift(s)."""
    xs = np.asarray(x, dtype=np.int64) + np.asarray(shift, dtype=np.int64)
    ys = np.asarray(y, dtype=np.int64) + np.asarray(shift, dtype=np.int64)
    mask = params.alphabet_size - 1
    total = np.zeros(np.broadcast(xs, ys).shape, dtype=np.int64)
    for level in range(params.levels):
        total += score_array((xs >> level) & mask, (ys >> level) & mask) << level
    return total


def _check_bound(t: np.ndarray, p: np.ndarray, params: ApproxParams):
    if min(t.min(), p.min()) < 0 or max(t.max(), p.max()) > params.max_value:
        raise ValueError(f"values must lie in [0, {params.max_value}]; normalize first")


def approximate_once(T, P, params: ApproxParams, rng=None, shift: int | None = None,
                     route: str = "auto", exact_shortcut: bool = True) -> np.ndarray:
    """One run of the shifted bit-window estimator; signed, unclamped."""
    t, p = as_int_array(T), as_int_array(P)
    if len(p) > len(t):
        raise ValueError(f"pattern longer than text ({len(p)} > {len(t)})")
    _check_bound(t, p, params)
    if exact_shortcut and params.window_covers_all:
        return exact_l1(t, p)
    if shift is None:
        rng = np.random.default_rng(rng)
        shift = int(rng.integers(0, params.shift_bound))
    elif not 0 <= shift < params.shift_bound:
        raise ValueError("shift out of range")
    instrument.bump("runs")
    instrument.record_max("alphabet_size", params.alphabet_size)
    sigma = score_weight(params.window_bits)
    mask = params.alphabet_size - 1
    ts, ps = t + shift, p + shift
    estimate = np.zeros(len(t) - len(p) + 1, dtype=np.int64)
    for level in range(params.levels):
        instrument.bump("levels")
        level_scores = weighted_mismatches((ts >> level) & mask, (ps >> level) & mask, sigma, route)
        estimate += level_scores << level
    return estimate


def _base_entropy(rng) -> int:
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63))
    return int(np.random.SeedSequence(rng).generate_state(1, np.uint64)[0])


def _value_bound(*seqs) -> int:
    bound = 1
    for seq in seqs:
        if isinstance(seq, IntSequence):
            bound = max(bound, seq.max_value)
        else:
            bound = max(bound, int(as_int_array(seq).max()))
    return bound


def approximate(T, P, epsilon: float, rng=None, repetitions: int | None = None,
                route: str = "auto") -> DistanceArray:
    """Median of independent runs, clamped below at 0.

    ``rng`` may be a Generator, an int seed, or None; repetition r draws its
    shift from a stream derived from (base seed, r).
    """
    t, p = as_int_array(T), as_int_array(P)
    params = ApproxParams.from_epsilon(epsilon, _value_bound(T, P), len(t), repetitions)
    if params.window_covers_all:
        return DistanceArray.exact(approximate_once(t, p, params))
    base = _base_entropy(rng)

    def one_run(r: int) -> np.ndarray:
        return approximate_once(t, p, params, np.random.default_rng([base, r]), route=route)

    runs = np.stack(pmap(one_run, range(params.repetitions)))
    # lower median: an actual sample, so the result stays integral
    middle = (params.repetitions - 1) // 2
    median = np.partition(runs, middle, axis=0)[middle]
    return DistanceArray.exact(np.maximum(median, 0))
