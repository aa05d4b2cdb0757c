"""Command-line entry point.

Exit codes: 0 ok, 1 unreadable input, 2 constraint violation,
3 oracle check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import instrument
from .convolve import exact_hamming, exact_l1
from .kangaroo import k_mismatch
from .kernel import PipelineTrace, kapprox_l1
from .l1approx import ApproxParams, approximate, approximate_once
from .oracle import cap, naive_ham, naive_l1
from .seqcore import INF, DistanceArray, generate, normalize_pair

DEFAULT_SEED = 20180417
COMMANDS = ("exact", "approx", "kapprox", "gen", "bench", "selftest")


class InputError(Exception):
    pass


class ConstraintError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    text_path: str | None = None
    pattern_path: str | None = None
    metric: str = "l1"
    epsilon: float | None = None
    k: int | None = None
    seed: int = DEFAULT_SEED
    repetitions: int | None = None
    output_format: str = "csv"
    oracle_check: bool = False
    out: str | None = None
    length: int = 1024
    alphabet: int = 16
    period: int | None = None
    corruptions: int = 0

    def validate(self):
        if self.command not in COMMANDS:
            raise ConstraintError(f"unknown command {self.command!r}")
        if self.metric not in ("l1", "ham"):
            raise ConstraintError("metric must be l1 or ham")
        if self.command in ("approx", "bench"):
            if self.epsilon is None or not 0 < self.epsilon <= 1:
                raise ConstraintError("epsilon must lie in (0, 1]")
        if self.command == "kapprox" and (self.k is None or self.k < 0):
            raise ConstraintError("k must be >= 0")
        if self.repetitions is not None and self.repetitions < 1:
            raise ConstraintError("reps must be >= 1")
        if self.command in ("exact", "approx", "kapprox", "bench"):
            if not self.text_path or not self.pattern_path:
                raise ConstraintError("--text and --pattern are required")


def read_ints(path: str) -> list[int]:
    try:
        tokens = Path(path).read_text().split()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not values:
        raise InputError(f"{path}: empty sequence")
    return values


def load_pair(cfg: RunConfig):
    text, pattern = read_ints(cfg.text_path), read_ints(cfg.pattern_path)
    if len(pattern) > len(text):
        raise ConstraintError(f"pattern longer than text ({len(pattern)} > {len(text)})")
    t, p, shift = normalize_pair(text, pattern)
    print(f"normalized with shift N={shift}", file=sys.stderr)
    return t, p


def render(scores: DistanceArray, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"positions": [None if v is INF else v for v in scores]}) + "\n"
    lines = ["position,distance"]
    lines += [f"{i},{'inf' if v is INF else v}" for i, v in enumerate(scores)]
    return "\n".join(lines) + "\n"


def emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _oracle(t, p, metric: str) -> DistanceArray:
    return naive_l1(t, p) if metric == "l1" else naive_ham(t, p)


def run_exact(cfg: RunConfig) -> int:
    t, p = load_pair(cfg)
    values = exact_l1(t, p) if cfg.metric == "l1" else exact_hamming(t, p)
    scores = DistanceArray.exact(values)
    emit(render(scores, cfg.output_format), cfg.out)
    if cfg.oracle_check:
        return _count_mismatches(scores, _oracle(t, p, cfg.metric))
    return 0


def run_kapprox(cfg: RunConfig) -> int:
    t, p = load_pair(cfg)
    if cfg.metric == "l1":
        scores = kapprox_l1(t, p, cfg.k, rng=cfg.seed)
    else:
        scores = k_mismatch(t, p, cfg.k)
    emit(render(scores, cfg.output_format), cfg.out)
    if cfg.oracle_check:
        return _count_mismatches(scores, cap(_oracle(t, p, cfg.metric), cfg.k))
    return 0


def _count_mismatches(got: DistanceArray, want: DistanceArray) -> int:
    bad = sum(a != b for a, b in zip(got, want))
    print(f"oracle check: {bad} mismatching positions", file=sys.stderr)
    return 3 if bad else 0


def run_approx(cfg: RunConfig) -> int:
    if cfg.metric != "l1":
        raise ConstraintError("approx supports the l1 metric only")
    t, p = load_pair(cfg)
    scores = approximate(t, p, cfg.epsilon, rng=cfg.seed, repetitions=cfg.repetitions)
    emit(render(scores, cfg.output_format), cfg.out)
    if cfg.oracle_check:
        truth = naive_l1(t, p).values
        got = scores.values
        zero_ok = bool((got[truth == 0] == 0).all())
        nonzero = truth > 0
        rel = float(np.max(np.abs(got[nonzero] - truth[nonzero]) / truth[nonzero])) if nonzero.any() else 0.0
        print(f"oracle check: max relative error {rel:.6g}", file=sys.stderr)
        return 0 if zero_ok and rel <= cfg.epsilon else 3
    return 0


def bench_report(cfg: RunConfig) -> dict:
    """Counters for one approximation pass (and a kapprox pass when k is given).

    The approximation runs on the convolution route so the counters reflect
    one correlation per window symbol per level.
    """
    t, p = load_pair(cfg)
    reps = cfg.repetitions or 1
    params = ApproxParams.from_epsilon(cfg.epsilon, max(t.max_value, p.max_value), len(t), reps)
    rng = np.random.default_rng(cfg.seed)
    report = {
        "n": len(t), "m": len(p), "max_value": params.max_value, "epsilon": cfg.epsilon,
        "delta": params.delta, "window_bits": params.window_bits,
        "alphabet_size": params.alphabet_size, "levels": params.levels, "repetitions": reps,
    }
    start = time.perf_counter()
    with instrument.counting() as counters:
        for _ in range(reps):
            approximate_once(t, p, params, rng, route="convolution", exact_shortcut=False)
    report["approx"] = {
        "wall_time_s": time.perf_counter() - start,
        "counters": dict(counters),
        "correlations_per_run": counters["correlations"] / reps,
    }
    if cfg.k is not None:
        trace = PipelineTrace()
        start = time.perf_counter()
        with instrument.counting() as counters:
            kapprox_l1(t, p, cfg.k, rng=cfg.seed, trace=trace)
        report["kapprox"] = {
            "wall_time_s": time.perf_counter() - start,
            "counters": dict(counters),
            "k": cfg.k,
            "period_case": trace.period.case.value if trace.period else "exact-fallback",
            "survivors": trace.survivors,
            "kernel_runs": [inst.runs for inst in trace.kernels],
        }
    return report


def run_bench(cfg: RunConfig) -> int:
    emit(json.dumps(bench_report(cfg), indent=2, sort_keys=True) + "\n", cfg.out)
    return 0


def run_gen(cfg: RunConfig) -> int:
    try:
        seq = generate(cfg.length, cfg.alphabet, cfg.period, cfg.corruptions, cfg.seed)
    except ValueError as exc:
        raise ConstraintError(str(exc)) from exc
    emit(" ".join(map(str, seq.tolist())) + "\n", cfg.out)
    return 0


def run_selftest(cfg: RunConfig) -> int:
    """Quick randomized comparison of every fast path against the oracles."""
    from .rledist import rle_ham, rle_l1
    from .oracle import naive_wild
    from .seqcore import WildcardSequence, rle_encode

    rng = np.random.default_rng(cfg.seed)
    failures = 0
    for trial in range(40):
        n = int(rng.integers(8, 96))
        m = int(rng.integers(1, n + 1))
        t = rng.integers(0, 8, n)
        p = rng.integers(0, 8, m)
        k = int(rng.integers(0, 2 * m))
        failures += not np.array_equal(exact_l1(t, p), naive_l1(t, p).values)
        failures += kapprox_l1(t, p, k, rng=trial) != cap(naive_l1(t, p), k)
        tw = WildcardSequence(t, rng.random(n) < 0.2, 8)
        pw = WildcardSequence(p, rng.random(m) < 0.2, 8)
        failures += rle_l1(rle_encode(tw), rle_encode(pw)) != naive_wild(tw, pw, "l1")
        failures += rle_ham(rle_encode(tw), rle_encode(pw)) != naive_wild(tw, pw, "ham")
    print(f"selftest: {failures} failures", file=sys.stderr)
    return 3 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="l1match", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--text", dest="text_path")
    parser.add_argument("--pattern", dest="pattern_path")
    parser.add_argument("--metric", choices=("l1", "ham"), default="l1")
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--k", type=int)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--reps", type=int, dest="repetitions")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", dest="output_format")
    parser.add_argument("--oracle-check", action="store_true")
    parser.add_argument("--out")
    gen = parser.add_argument_group("gen")
    gen.add_argument("--length", type=int, default=1024)
    gen.add_argument("--alphabet", type=int, default=16)
    gen.add_argument("--period", type=int)
    gen.add_argument("--corruptions", type=int, default=0)
    return parser


RUNNERS = {
    "exact": run_exact, "approx": run_approx, "kapprox": run_kapprox,
    "gen": run_gen, "bench": run_bench, "selftest": run_selftest,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        return RUNNERS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConstraintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(RunConfig(**vars(args)))


if __name__ == "__main__":
    sys.exit(main())
