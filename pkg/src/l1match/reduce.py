"""Linearity-preserving reductions between Hamming and L1 distance.

A reduction expresses a target symbol score as

    target(x, y) = c + sum_i alpha_i * base(f_i(x), g_i(y))

so a whole target distance array is ``c*m`` plus the same linear combination
of base distance arrays computed on remapped sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .convolve import exact_hamming
from .kangaroo import k_mismatch
from .kernel import PipelineTrace, kapprox_l1
from .rledist import rle_ham_via_capped
from .seqcore import (
    WILDCARD, DistanceArray, RleSequence, WildcardSequence, as_int_array,
)

SymbolMap = Callable[[np.ndarray], np.ndarray]


def _identity(x):
    return x


@dataclass(frozen=True)
class LinearReduction:
    coefficients: tuple
    text_maps: tuple
    pattern_maps: tuple
    constant: Fraction = Fraction(0)
    domain_max: int = 1
    base_metric: str = "ham"
    target_metric: str = "l1"

    def __post_init__(self):
        if not (len(self.coefficients) == len(self.text_maps) == len(self.pattern_maps)):
            raise ValueError("coefficients and maps must have equal counts")
        object.__setattr__(self, "coefficients", tuple(Fraction(a) for a in self.coefficients))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @property
    def size(self) -> int:
        return len(self.coefficients)

    def constant_term(self, m: int) -> Fraction:
        return self.constant * m


def _metric(name: str):
    if name == "l1":
        return lambda x, y: np.abs(x - y)
    if name == "ham":
        return lambda x, y: (x != y).astype(np.int64)
    raise ValueError(f"unknown metric {name!r}")


def verify_family(family: Sequence[LinearReduction], domain_max: int | None = None) -> bool:
    """Check that the reductions sum to their target metric on [0, domain_max]^2."""
    top = family[0].domain_max if domain_max is None else domain_max
    x, y = np.meshgrid(np.arange(top + 1), np.arange(top + 1), indexing="ij")
    scale = math.lcm(*(d for red in family
                       for d in (red.constant.denominator, *(a.denominator for a in red.coefficients))))
    total = np.zeros(x.shape, dtype=np.int64)
    for red in family:
        base = _metric(red.base_metric)
        total += int(red.constant * scale)
        for alpha, f, g in zip(red.coefficients, red.text_maps, red.pattern_maps):
            fx, gy = f(x), g(y)
            if fx.min() < 0 or gy.min() < 0:
                return False
            total += int(alpha * scale) * base(fx, gy)
    return bool((total == scale * _metric(family[0].target_metric)(x, y)).all())


def verify_identity(red: LinearReduction, domain_max: int | None = None) -> bool:
    return verify_family([red], domain_max)


def map_symbols(seq, fn: SymbolMap):
    """Apply a symbol map; wildcards stay wildcards, RLE runs are re-merged."""
    if isinstance(seq, RleSequence):
        syms = [s for s, _ in seq.runs if s is not WILDCARD]
        mapped = dict(zip(syms, fn(np.array(syms, dtype=np.int64)).tolist())) if syms else {}
        runs = []
        for sym, length in seq.runs:
            new = WILDCARD if sym is WILDCARD else mapped[sym]
            if runs and runs[-1][0] == new:
                runs[-1] = (new, runs[-1][1] + length)
            else:
                runs.append((new, length))
        return RleSequence(tuple(runs), seq.total_length)
    if isinstance(seq, WildcardSequence):
        values = np.where(seq.wild, 0, fn(seq.values))
        return WildcardSequence(values, seq.wild, max(1, int(values.max(initial=0))))
    return fn(as_int_array(seq))


def _pattern_length(seq) -> int:
    if isinstance(seq, RleSequence):
        return seq.total_length
    return len(seq)


def apply(red: LinearReduction, T, P, base_solver) -> DistanceArray:
    """constant*m + sum_i alpha_i * base_solver(f_i(T), g_i(P)), exactly."""
    m = _pattern_length(P)
    scale = math.lcm(red.constant.denominator, *(a.denominator for a in red.coefficients))
    total = None
    for alpha, f, g in zip(red.coefficients, red.text_maps, red.pattern_maps):
        result = base_solver(map_symbols(T, f), map_symbols(P, g))
        if isinstance(result, DistanceArray):
            if result.has_infinite:
                raise ValueError("capped base results cannot be linearly combined")
            result = result.values
        term = int(alpha * scale) * np.asarray(result, dtype=np.int64)
        total = term if total is None else total + term
    total = total + int(red.constant_term(m) * scale)
    if (total % scale).any():
        raise ArithmeticError("reduction identity violated")
    return DistanceArray.exact(total // scale)


def apply_family(family: Sequence[LinearReduction], T, P, base_solver) -> DistanceArray:
    total = None
    for red in family:
        part = apply(red, T, P, base_solver).values
        total = part if total is None else total + part
    return DistanceArray.exact(total)


def _plus_one(x):
    return x + 1


def ham_to_l1(domain_max: int = 255) -> LinearReduction:
    """[x != y] = 1 - |x+1-y|/2 - |x-(y+1)|/2 + |x-y|.

    For d = x - y, |d+1| + |d-1| - 2|d| is 2 when d = 0 and 0 otherwise.
    Shifted symbols need the domain enlarged by one.
    """
    half = Fraction(-1, 2)
    return LinearReduction(
        coefficients=(half, half, 1),
        text_maps=(_plus_one, _identity, _identity),
        pattern_maps=(_identity, _plus_one, _identity),
        constant=Fraction(1),
        domain_max=domain_max,
        base_metric="l1",
        target_metric="ham",
    )


def _threshold(t: int) -> SymbolMap:
    def at_least(x):
        return (np.asarray(x) >= t).astype(np.int64)

    at_least.threshold = t
    return at_least


def l1_to_ham(domain_max: int) -> list[LinearReduction]:
    """|x - y| = sum_{t=1}^{M} [ [x>=t] != [y>=t] ] on [0, M]."""
    if domain_max < 1:
        raise ValueError("domain_max must be >= 1")
    return [
        LinearReduction((1,), (_threshold(t),), (_threshold(t),), Fraction(0), domain_max, "ham", "l1")
        for t in range(1, domain_max + 1)
    ]


def collapse_thresholds(symbols: np.ndarray) -> list[LinearReduction]:
    """Threshold family restricted to the given symbol set.

    All thresholds in (v_j, v_{j+1}] act identically on the symbols present,
    so they merge into one instance with coefficient v_{j+1} - v_j.
    """
    values = np.unique(np.asarray(symbols, dtype=np.int64))
    top = int(values.max(initial=1))
    family = []
    for low, high in zip(values[:-1].tolist(), values[1:].tolist()):
        family.append(LinearReduction((high - low,), (_threshold(high),), (_threshold(high),),
                                      Fraction(0), max(1, top), "ham", "l1"))
    return family


def convolution_ham_backend(t: np.ndarray, p: np.ndarray, limit: int) -> DistanceArray:
    """Capped Hamming via exact per-symbol correlations."""
    exact = exact_hamming(t, p)
    return DistanceArray(exact, exact > limit)


def kangaroo_ham_backend(t: np.ndarray, p: np.ndarray, limit: int) -> DistanceArray:
    return k_mismatch(t, p, limit)


def _rle_symbols(*seqs: RleSequence) -> np.ndarray:
    return np.array([s for seq in seqs for s, _ in seq.runs if s is not WILDCARD], dtype=np.int64)


def rle_l1_via_ham(T: RleSequence, P: RleSequence, ham_backend=convolution_ham_backend) -> DistanceArray:
    """Wildcard L1 on RLE inputs from binary threshold instances.

    Thresholding never adds runs; each binary instance goes through the
    sparse capped-Hamming route.
    """
    family = collapse_thresholds(_rle_symbols(T, P))
    if not family:
        return DistanceArray.exact(np.zeros(T.total_length - P.total_length + 1, dtype=np.int64))
    return apply_family(family, T, P, lambda a, b: rle_ham_via_capped(a, b, ham_backend))


def kapprox_l1_via_ham(T, P, k: int, rng=None, ham_backend=convolution_ham_backend,
                       trace: PipelineTrace | None = None) -> DistanceArray:
    """k-approximated L1 through the kernel pipeline with a Hamming backend."""
    return kapprox_l1(T, P, k, rng, lambda t, p: rle_l1_via_ham(t, p, ham_backend), trace)

