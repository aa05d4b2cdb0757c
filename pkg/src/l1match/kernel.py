"""k-approximated L1 distance: period casework, filtering, and kernelization.

The text is cut into chunks of length <= 2m. If the pattern has no small
approximate period, alignments are filtered with projected Hamming
estimates and the survivors are verified with kangaroo jumps. Otherwise the
candidate text region and the pattern are rearranged by residue class modulo
the period into short wildcard-padded strings with few runs, and an exact
RLE distance routine is run on them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .convolve import exact_l1
from .hamapprox import DEFAULT_ZETA, approx_ham, approx_self_ham, default_repetitions
from .kangaroo import build_lcp, verify_alignment
from .parallel import pmap
from .rledist import rle_l1
from .seqcore import INF, DistanceArray, RleSequence, WildcardSequence, as_int_array, rle_encode

# runs(P*) + runs(T*) <= KERNEL_RUN_FACTOR * k and lengths <= KERNEL_LENGTH_FACTOR * m
KERNEL_RUN_FACTOR = 40
KERNEL_LENGTH_FACTOR = 4
# NoSmallPeriod survivors per chunk <= SURVIVOR_FACTOR * m / k
SURVIVOR_FACTOR = 8


class PeriodCase(enum.Enum):
    NO_SMALL_PERIOD = "no-small-period"
    SMALL_PERIOD = "small-period"


@dataclass(frozen=True, eq=False)
class PeriodReport:
    case: PeriodCase
    period: int | None
    estimates: object = None

    @property
    def is_periodic(self) -> bool:
        return self.case is PeriodCase.SMALL_PERIOD


def classify_period(P, k: int, rng=None, repetitions: int | None = None) -> PeriodReport:
    """Smallest shift <= k whose self-overlap estimate is <= 16k/3, if any.

    With a two-sided 1/3-accurate estimate, an accepted shift has true
    self-overlap Hamming <= 8k, and rejecting every shift < k means every
    true value there exceeds 4k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p = as_int_array(P)
    m = len(p)
    if m < 2:
        return PeriodReport(PeriodCase.NO_SMALL_PERIOD, None)
    est = approx_self_ham(p, DEFAULT_ZETA, rng, repetitions)
    accept = est.at_most(Fraction(16 * k, 3))
    for shift in range(1, min(k, m - 1) + 1):
        if accept[shift]:
            return PeriodReport(PeriodCase.SMALL_PERIOD, shift, est)
    return PeriodReport(PeriodCase.NO_SMALL_PERIOD, None, est)


def filter_alignments(T_chunk, P, k: int, rng=None, repetitions: int | None = None) -> np.ndarray:
    """Alignments whose projected Hamming estimate is <= 4k/3.

    Keeps every alignment with true Hamming <= k (so every one with L1 <= k);
    every kept alignment has true Hamming <= 2k.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    t, p = as_int_array(T_chunk), as_int_array(P)
    if len(t) > 2 * len(p):
        raise ValueError("chunk longer than 2m")
    est = approx_ham(t, p, DEFAULT_ZETA, rng, repetitions)
    return np.flatnonzero(est.at_most(Fraction(4 * k, 3)))


def extract_region(T_chunk, candidates, m: int) -> tuple[np.ndarray, int]:
    """Text span from the first to the last candidate window, with its offset."""
    t = as_int_array(T_chunk)
    candidates = np.asarray(candidates)
    if len(candidates) == 0:
        raise ValueError("no candidates")
    first, last = int(candidates.min()), int(candidates.max())
    return t[first:last + m], first


@dataclass(frozen=True, eq=False)
class KernelInstance:
    """Residue-class rearrangement of a pattern and a text region.

    Blocks of width ``block_width``: P* holds pattern class r in block r;
    T* holds text classes 0..l-1 and then the same classes advanced by one
    period. Region alignment i = s*l + rho maps to kernel alignment
    rho*block_width + s.
    """

    p_star: WildcardSequence
    t_star: WildcardSequence
    period: int
    block_width: int
    pattern_length: int
    region_length: int
    candidate_set: range = field(default=range(0))

    def map(self, i: int) -> int:
        s, rho = divmod(i, self.period)
        return rho * self.block_width + s

    @property
    def runs(self) -> int:
        return len(rle_encode(self.p_star)) + len(rle_encode(self.t_star))


def _class_blocks(seq: np.ndarray, period: int, width: int, advance: int) -> tuple[np.ndarray, np.ndarray]:
    values = np.zeros(period * width, dtype=np.int64)
    wild = np.ones(period * width, dtype=bool)
    for r in range(period):
        members = seq[r + advance * period::period][:width]
        values[r * width:r * width + len(members)] = members
        wild[r * width:r * width + len(members)] = False
    return values, wild


def kernelize(P, T_region, period: int, k: int) -> KernelInstance:
    p, t = as_int_array(P), as_int_array(T_region)
    m, length = len(p), len(t)
    if period < 1 or period >= m:
        raise ValueError("degenerate period")
    if length < m:
        raise ValueError("region shorter than pattern")
    # wide enough that a pattern class, shifted by any s <= (length-m)/period,
    # stays inside its text block
    width = -(-length // period) + 1
    pv, pw = _class_blocks(p, period, width, 0)
    tv0, tw0 = _class_blocks(t, period, width, 0)
    tv1, tw1 = _class_blocks(t, period, width, 1)
    bound = max(1, int(max(p.max(), t.max())))
    p_star = WildcardSequence(pv, pw, bound)
    t_star = WildcardSequence(np.concatenate([tv0, tv1]), np.concatenate([tw0, tw1]), bound)
    return KernelInstance(p_star, t_star, period, width, m, length, range(length - m + 1))


RleBackend = Callable[[RleSequence, RleSequence], DistanceArray]


@dataclass
class PipelineTrace:
    """Diagnostics collected by kapprox_l1 when a trace object is passed in."""

    period: PeriodReport | None = None
    survivors: list = field(default_factory=list)
    kernels: list = field(default_factory=list)
    kernel_checks: list = field(default_factory=list)
    fallback: bool = False


def _chunk_bounds(n: int, m: int):
    count = n - m + 1
    for start in range(0, count, m):
        stop = min(start + m, count)
        yield start, stop


def _groups(candidates: np.ndarray, span: int):
    """Split sorted candidates into runs whose first-to-last distance is <= span."""
    group = []
    for c in candidates.tolist():
        if group and c - group[0] > span:
            yield group
            group = []
        group.append(c)
    if group:
        yield group


def kapprox_l1(T, P, k: int, rng=None, backend: RleBackend = rle_l1,
               trace: PipelineTrace | None = None) -> DistanceArray:
    """Values <= k exactly, everything else INF (with high probability)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    t, p = as_int_array(T), as_int_array(P)
    n, m = len(t), len(p)
    if m > n:
        raise ValueError(f"pattern longer than text ({m} > {n})")
    if k >= m:
        if trace is not None:
            trace.fallback = True
        exact = exact_l1(t, p)
        return DistanceArray(exact, exact > k)

    seeds = np.random.SeedSequence(np.random.default_rng(rng).integers(0, 2**63))
    period_seed, *chunk_seeds = seeds.spawn(1 + -(-(n - m + 1) // m))
    report = (classify_period(p, k, np.random.default_rng(period_seed)) if k >= 1
              else PeriodReport(PeriodCase.NO_SMALL_PERIOD, None))
    if trace is not None:
        trace.period = report
    reps = default_repetitions(n, DEFAULT_ZETA)
    idx = build_lcp(t, p) if not report.is_periodic else None

    def run_chunk(job):
        (start, stop), seed = job
        chunk = t[start:stop + m - 1]
        found = {}
        notes = {"start": start, "kernels": []}
        candidates = filter_alignments(chunk, p, k, np.random.default_rng(seed), reps)
        notes["survivors"] = len(candidates)
        if not report.is_periodic:
            for c in candidates.tolist():
                value = verify_alignment(idx, t, p, start + c, k)
                if value is not INF:
                    found[start + c] = value
            return found, notes
        # small spans keep the kernel within 4m when the period is <= m/4
        for group in _groups(candidates, max(1, m // 2)):
            region, offset = extract_region(chunk, group, m)
            inst = kernelize(p, region, report.period, k)
            scores = backend(rle_encode(inst.t_star), rle_encode(inst.p_star))
            notes["kernels"].append((inst, start + offset, scores))
            for i in inst.candidate_set:
                value = scores[inst.map(i)]
                if value is not INF and value <= k:
                    found[start + offset + i] = value
        return found, notes

    results = pmap(run_chunk, list(zip(_chunk_bounds(n, m), chunk_seeds)))
    values = np.zeros(n - m + 1, dtype=np.int64)
    infinite = np.ones(n - m + 1, dtype=bool)
    for found, notes in results:
        for i, v in found.items():
            values[i] = v
            infinite[i] = False
        if trace is not None:
            trace.survivors.append(notes["survivors"])
            trace.kernels.extend(inst for inst, _, _ in notes["kernels"])
            trace.kernel_checks.extend(notes["kernels"])
    return DistanceArray(values, infinite)
