"""Brute-force reference distances.

Deliberately plain Python loops: these are the ground truth the fast
routines are checked against, so they share no code with them.
"""
from .seqcore import INF, WILDCARD, DistanceArray, WildcardSequence


def _plain(seq):
    if isinstance(seq, WildcardSequence):
        return seq.tolist()
    if hasattr(seq, "tolist"):
        return seq.tolist()
    return list(seq)


def _windows(text, pattern):
    n, m = len(text), len(pattern)
    if m > n:
        raise ValueError(f"pattern longer than text ({m} > {n})")
    return n - m + 1, m


def naive_l1(T, P) -> DistanceArray:
    text, pattern = _plain(T), _plain(P)
    count, m = _windows(text, pattern)
    scores = []
    for i in range(count):
        total = 0
        for j in range(m):
            total += abs(text[i + j] - pattern[j])
        scores.append(total)
    return DistanceArray.of(scores)


def naive_ham(T, P) -> DistanceArray:
    text, pattern = _plain(T), _plain(P)
    count, m = _windows(text, pattern)
    scores = []
    for i in range(count):
        total = 0
        for j in range(m):
            if text[i + j] != pattern[j]:
                total += 1
        scores.append(total)
    return DistanceArray.of(scores)


def naive_wild(T, P, metric: str = "l1") -> DistanceArray:
    """Distance where a wildcard on either side contributes 0."""
    if metric not in ("l1", "ham"):
        raise ValueError(f"unknown metric {metric!r}")
    text, pattern = _plain(T), _plain(P)
    count, m = _windows(text, pattern)
    scores = []
    for i in range(count):
        total = 0
        for j in range(m):
            x, y = text[i + j], pattern[j]
            if x is WILDCARD or y is WILDCARD:
                continue
            if metric == "l1":
                total += abs(x - y)
            elif x != y:
                total += 1
        scores.append(total)
    return DistanceArray.of(scores)


def cap(S: DistanceArray, k: int) -> DistanceArray:
    """Replace every entry above k by INF."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return DistanceArray.of(INF if v is INF or v > k else v for v in S)
