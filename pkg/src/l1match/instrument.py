"""Operation counters for the benchmark harness.

Counting is off unless a ``counting()`` block is active, so library calls
pay only a context-variable lookup.
"""
from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar

_active: ContextVar[Counter | None] = ContextVar("l1match_counters", default=None)


def bump(name: str, amount: int = 1) -> None:
    counter = _active.get()
    if counter is not None:
        counter[name] += amount


def record_max(name: str, value: int) -> None:
    counter = _active.get()
    if counter is not None and value > counter[name]:
        counter[name] = value


@contextmanager
def counting():
    counter = Counter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)
