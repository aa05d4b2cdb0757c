"""Sequence types shared by every distance routine.

Alignment convention: entry ``i`` of a distance array scores the pattern
against ``text[i:i+m]`` (0-based).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class _Wildcard:
    """The don't-care symbol. Compares equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Wildcard, ())


class _Infinity:
    """Marker for capped distance entries."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


WILDCARD = _Wildcard()
INF = _Infinity()


def _frozen(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def as_int_array(seq) -> np.ndarray:
    """Coerce an IntSequence or any integer sequence to an int64 array."""
    if isinstance(seq, IntSequence):
        return seq.data
    arr = np.asarray(seq)
    if arr.dtype == object or arr.dtype.kind not in "iub":
        arr = np.array([int(v) for v in seq], dtype=np.int64)
    return arr.astype(np.int64, copy=False)


@dataclass(frozen=True, eq=False)
class IntSequence:
    data: np.ndarray
    max_value: int

    def __post_init__(self):
        data = _frozen(self.data)
        if data.ndim != 1 or len(data) == 0:
            raise ValueError("empty sequence")
        if self.max_value < 1:
            raise ValueError("max_value must be >= 1")
        if data.min() < 0 or data.max() > self.max_value:
            raise ValueError(f"entries must lie in [0, {self.max_value}]")
        object.__setattr__(self, "data", data)

    @classmethod
    def of(cls, values: Iterable[int], max_value: int | None = None) -> "IntSequence":
        data = np.array(list(values), dtype=np.int64)
        if max_value is None:
            max_value = max(1, int(data.max())) if len(data) else 1
        return cls(data, max_value)

    def __len__(self):
        return len(self.data)

    def __getitem__(self, idx):
        return self.data[idx]

    def __iter__(self):
        return iter(self.data.tolist())

    def __eq__(self, other):
        if not isinstance(other, IntSequence):
            return NotImplemented
        return self.max_value == other.max_value and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.max_value, self.data.tobytes()))

    def tolist(self) -> list[int]:
        return self.data.tolist()


@dataclass(frozen=True, eq=False)
class WildcardSequence:
    """Integer symbols plus a mask of wildcard positions.

    ``values`` holds 0 at wildcard positions; only ``wild`` is meaningful there.
    """

    values: np.ndarray
    wild: np.ndarray
    max_value: int

    def __post_init__(self):
        values = _frozen(self.values)
        wild = _frozen(self.wild, dtype=bool)
        if values.shape != wild.shape or values.ndim != 1:
            raise ValueError("values and wildcard mask must be 1-d and equally long")
        values = np.where(wild, 0, values)
        values.setflags(write=False)
        real = values[~wild]
        if len(real) and (real.min() < 0 or real.max() > self.max_value):
            raise ValueError(f"symbols must lie in [0, {self.max_value}]")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "wild", wild)

    @classmethod
    def of(cls, items: Iterable, max_value: int | None = None) -> "WildcardSequence":
        items = list(items)
        wild = np.array([v is WILDCARD for v in items], dtype=bool)
        values = np.array([0 if v is WILDCARD else int(v) for v in items], dtype=np.int64)
        if max_value is None:
            max_value = max(1, int(values.max())) if len(values) else 1
        return cls(values, wild, max_value)

    @classmethod
    def from_ints(cls, seq) -> "WildcardSequence":
        data = as_int_array(seq)
        max_value = seq.max_value if isinstance(seq, IntSequence) else max(1, int(data.max(initial=0)))
        return cls(data, np.zeros(len(data), dtype=bool), max_value)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx):
        if self.wild[idx]:
            return WILDCARD
        return int(self.values[idx])

    def __eq__(self, other):
        if not isinstance(other, WildcardSequence):
            return NotImplemented
        return np.array_equal(self.wild, other.wild) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.values.tobytes(), self.wild.tobytes()))

    def tolist(self) -> list:
        return [WILDCARD if w else v for v, w in zip(self.values.tolist(), self.wild.tolist())]

    @property
    def nonwild_count(self) -> int:
        return int((~self.wild).sum())


@dataclass(frozen=True)
class RleSequence:
    runs: tuple
    total_length: int

    def __post_init__(self):
        runs = tuple((sym if sym is WILDCARD else int(sym), int(length)) for sym, length in self.runs)
        total = 0
        prev = None
        for i, (sym, length) in enumerate(runs):
            if length < 1:
                raise ValueError("run lengths must be positive")
            if i and sym == prev:
                raise ValueError("adjacent runs must carry different symbols")
            prev = sym
            total += length
        if total != self.total_length:
            raise ValueError(f"run lengths sum to {total}, declared {self.total_length}")
        object.__setattr__(self, "runs", runs)

    def __len__(self):
        return len(self.runs)

    def blocks(self):
        """Yield (start, end_inclusive, symbol) for every run."""
        pos = 0
        for sym, length in self.runs:
            yield pos, pos + length - 1, sym
            pos += length


def rle_encode(seq: WildcardSequence) -> RleSequence:
    if not isinstance(seq, WildcardSequence):
        seq = WildcardSequence.from_ints(seq)
    n = len(seq)
    if n == 0:
        return RleSequence((), 0)
    # a position starts a run when its (wild, value) key differs from the previous one
    change = np.empty(n, dtype=bool)
    change[0] = True
    change[1:] = (seq.wild[1:] != seq.wild[:-1]) | (seq.values[1:] != seq.values[:-1])
    starts = np.flatnonzero(change)
    lengths = np.diff(np.append(starts, n))
    runs = tuple(
        (WILDCARD if seq.wild[s] else int(seq.values[s]), int(length))
        for s, length in zip(starts, lengths)
    )
    return RleSequence(runs, n)


def rle_decode(rle: RleSequence, max_value: int | None = None) -> WildcardSequence:
    values = np.zeros(rle.total_length, dtype=np.int64)
    wild = np.zeros(rle.total_length, dtype=bool)
    for start, end, sym in rle.blocks():
        if sym is WILDCARD:
            wild[start:end + 1] = True
        else:
            values[start:end + 1] = sym
    if max_value is None:
        max_value = max(1, int(values.max(initial=0)))
    return WildcardSequence(values, wild, max_value)


def normalize(raw: Sequence[int]) -> IntSequence:
    """Shift a signed sequence so its minimum is at least 0."""
    if len(raw) == 0:
        raise ValueError("empty sequence")
    data = np.array([int(v) for v in raw], dtype=np.int64)
    shift = max(0, -int(data.min()))
    data = data + shift
    return IntSequence(data, max(1, int(data.max())))


def normalize_pair(text: Sequence[int], pattern: Sequence[int]) -> tuple[IntSequence, IntSequence, int]:
    """Normalize text and pattern with one common shift so distances are unchanged.

    Returns (text, pattern, shift); both sequences share the same max_value.
    """
    if len(text) == 0 or len(pattern) == 0:
        raise ValueError("empty sequence")
    t = np.array([int(v) for v in text], dtype=np.int64)
    p = np.array([int(v) for v in pattern], dtype=np.int64)
    shift = max(0, -min(int(t.min()), int(p.min())))
    t += shift
    p += shift
    bound = max(1, int(t.max()), int(p.max()))
    return IntSequence(t, bound), IntSequence(p, bound), shift


def generate(length: int, alphabet_size: int, period: int | None = None,
             corruption_count: int = 0, seed: int = 0) -> IntSequence:
    """Random sequence over [0, alphabet_size), optionally periodic with corruptions.

    With a period, the sequence is a tiled random block and then exactly
    ``corruption_count`` distinct positions are overwritten with fresh random
    symbols, so its self-overlap Hamming distance at the period is at most
    twice the corruption count.
    """
    if length < 1 or alphabet_size < 1:
        raise ValueError("length and alphabet_size must be >= 1")
    if corruption_count < 0 or corruption_count > length:
        raise ValueError("corruption_count must lie in [0, length]")
    rng = np.random.default_rng(seed)
    if period is None:
        data = rng.integers(0, alphabet_size, size=length)
    else:
        if period < 1 or period > length:
            raise ValueError("period must lie in [1, length]")
        block = rng.integers(0, alphabet_size, size=period)
        data = np.resize(block, length)
    if corruption_count:
        where = rng.choice(length, size=corruption_count, replace=False)
        data[where] = rng.integers(0, alphabet_size, size=corruption_count)
    return IntSequence(data.astype(np.int64), max(1, alphabet_size - 1))


@dataclass(frozen=True, eq=False)
class DistanceArray:
    """Per-alignment scores; ``infinite`` marks entries capped to INF."""

    values: np.ndarray
    infinite: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        infinite = _frozen(self.infinite, dtype=bool)
        if values.shape != infinite.shape or values.ndim != 1:
            raise ValueError("values and infinity mask must be 1-d and equally long")
        values = np.where(infinite, 0, values)
        if (values < 0).any():
            raise ValueError("finite distances must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "infinite", infinite)

    @classmethod
    def exact(cls, values) -> "DistanceArray":
        values = np.asarray(values, dtype=np.int64)
        return cls(values, np.zeros(len(values), dtype=bool))

    @classmethod
    def of(cls, items: Iterable) -> "DistanceArray":
        items = list(items)
        infinite = np.array([v is INF for v in items], dtype=bool)
        values = np.array([0 if v is INF else int(v) for v in items], dtype=np.int64)
        return cls(values, infinite)

    @classmethod
    def all_infinite(cls, length: int) -> "DistanceArray":
        return cls(np.zeros(length, dtype=np.int64), np.ones(length, dtype=bool))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx: int):
        if self.infinite[idx]:
            return INF
        return int(self.values[idx])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, DistanceArray):
            return NotImplemented
        return np.array_equal(self.infinite, other.infinite) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.values.tobytes(), self.infinite.tobytes()))

    def __repr__(self):
        return f"DistanceArray({self.tolist()!r})"

    def tolist(self) -> list:
        return list(self)

    @property
    def has_infinite(self) -> bool:
        return bool(self.infinite.any())
