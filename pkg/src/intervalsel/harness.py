"""Instance generation, seeded orders, Monte Carlo runs, and property drivers.

Trials are independent: trial k draws all of its randomness from
``derive(seed, k + 1)`` (index 0 is reserved for instance generation), so
results do not depend on execution order or worker count.  Aggregation is
over integer output sizes (count, sum, sum of squares, min, max), which
merges associatively and exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Literal, Sequence

from . import gadget as gadget_mod
from .geometry import (
    IndependentSet,
    Scalar,
    UnitInterval,
    alpha,
    parse_intervals,
)
from .recurrence import build_out_table
from .restricted import run_restricted
from .rng import SplitMix64, derive, fisher_yates
from .windows import run_windowed

MAX_EXHAUSTIVE = 8
DEFAULT_JITTER_DENOMINATOR = 1 << 20

AlgorithmName = Literal["restricted", "windowed"]


class ValidationError(RuntimeError):
    """An algorithm output failed a hard check (independence or the alpha ceiling)."""


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for a reproducible instance family.

    kind "independent" needs alpha; "clique" needs size; "gadget" needs t;
    "custom-file" needs path.  delta is the window width the stream must fit
    (inputs confined to [0, delta)); seed drives all generation.
    """

    kind: Literal["independent", "clique", "gadget", "custom-file"]
    delta: int
    seed: int
    alpha: int | None = None
    size: int | None = None
    t: int | None = None
    path: str | None = None
    aligned: bool = False
    jitter_denominator: int = DEFAULT_JITTER_DENOMINATOR


@dataclass(frozen=True)
class TrialSummary:
    trials: int
    mean: float
    std: float
    min_size: int
    max_size: int
    alpha: int
    empirical_factor: float
    predicted_bound: float
    stderr: float
    meets_prediction: bool

    def __post_init__(self):
        if not (self.min_size <= self.mean <= self.max_size <= self.alpha):
            raise ValidationError(
                f"summary out of order: min={self.min_size} mean={self.mean} "
                f"max={self.max_size} alpha={self.alpha}"
            )

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "std": self.std,
            "min": self.min_size,
            "max": self.max_size,
            "alpha": self.alpha,
            "empirical_factor": self.empirical_factor,
            "predicted_bound": self.predicted_bound,
            "stderr": self.stderr,
            "meets_prediction": self.meets_prediction,
        }


def gen_independent(
    alpha_target: int,
    delta: int,
    seed: int,
    aligned: bool = False,
    jitter_denominator: int = DEFAULT_JITTER_DENOMINATOR,
) -> list[UnitInterval]:
    """alpha pairwise-independent unit intervals inside [0, delta).

    Left endpoints are rationals over the jitter denominator and are kept
    non-integral unless ``aligned`` asks for integer positions (which only
    pack up to alpha <= delta // 2).
    """
    if not 1 <= alpha_target <= delta - 1:
        raise ValueError(f"alpha must be in [1, {delta - 1}], got {alpha_target}")
    rng = derive(seed, 0)
    if aligned:
        if 2 * (alpha_target - 1) > delta - 2:
            raise ValueError(
                f"aligned packing of alpha={alpha_target} needs delta >= {2 * alpha_target}"
            )
        slack = delta - 2 - 2 * (alpha_target - 1)
        offsets = sorted(rng.below(slack + 1) for _ in range(alpha_target))
        return [
            UnitInterval(Scalar(off + 2 * k)) for k, off in enumerate(offsets)
        ]

    q = jitter_denominator
    if q < 2:
        raise ValueError("jitter denominator must be at least 2")
    # Positions in units of 1/q: consecutive lefts at least q+1 apart (gap
    # strictly above 1) and the last one strictly below (delta-1)*q.
    budget = (delta - alpha_target) * q - alpha_target
    if budget < 0:
        raise ValueError("jitter denominator too small for this packing")
    for _ in range(256):
        offsets = sorted(rng.below(budget + 1) for _ in range(alpha_target))
        numerators = [(q + 1) * k + off for k, off in enumerate(offsets)]
        if all(n % q != 0 for n in numerators):
            return [UnitInterval(Scalar(n, q)) for n in numerators]
    raise ValueError("jitter denominator too small to avoid integer endpoints")


def gen_clique(size: int) -> list[UnitInterval]:
    """size mutually overlapping unit intervals (max independent set 1)."""
    if size < 1:
        raise ValueError("clique size must be positive")
    return [UnitInterval(Scalar(i, size + 1)) for i in range(size)]


def shuffle(intervals: Sequence[UnitInterval], seed: int) -> list[UnitInterval]:
    """Uniform random order of the instance; the same seed replays the same order."""
    return fisher_yates(intervals, SplitMix64(seed))


def instance_from_spec(spec: InstanceSpec) -> list[UnitInterval]:
    if spec.kind == "independent":
        if spec.alpha is None:
            raise ValueError("independent instances need alpha")
        return gen_independent(
            spec.alpha,
            spec.delta,
            spec.seed,
            aligned=spec.aligned,
            jitter_denominator=spec.jitter_denominator,
        )
    if spec.kind == "clique":
        if spec.size is None:
            raise ValueError("clique instances need size")
        return gen_clique(spec.size)
    if spec.kind == "gadget":
        if spec.t is None:
            raise ValueError("gadget instances need t")
        g = gadget_mod.random_gadget(spec.t, derive(spec.seed, 0))
        # Shift right so the construction fits [0, delta); width just above 4.
        if spec.delta < 5:
            raise ValueError("gadget instances need delta >= 5")
        return [iv.translate(2) for iv in g.stream]
    if spec.kind == "custom-file":
        if spec.path is None:
            raise ValueError("custom instances need a path")
        return parse_intervals(Path(spec.path).read_text())
    raise ValueError(f"unknown instance kind {spec.kind!r}")


def _run_algorithm(name: AlgorithmName, delta: int, stream) -> IndependentSet:
    if name == "restricted":
        return run_restricted(delta, stream).output
    if name == "windowed":
        return run_windowed(delta, stream)
    raise ValueError(f"unknown algorithm {name!r}")


def _validate_output(output: IndependentSet, ceiling: int) -> int:
    # IndependentSet construction already proved pairwise independence.
    size = len(output)
    if size > ceiling:
        raise ValidationError(f"output of size {size} exceeds alpha={ceiling}")
    return size


def _trial_block(
    spec: InstanceSpec,
    algorithm: AlgorithmName,
    start: int,
    stop: int,
) -> tuple[int, int, int, int, int]:
    """Aggregate (count, sum, sum of squares, min, max) over a trial range."""
    intervals = instance_from_spec(spec)
    ceiling = alpha(intervals)
    total = total_sq = 0
    lo, hi = None, None
    for k in range(start, stop):
        order = fisher_yates(intervals, derive(spec.seed, k + 1))
        size = _validate_output(_run_algorithm(algorithm, spec.delta, order), ceiling)
        total += size
        total_sq += size * size
        lo = size if lo is None else min(lo, size)
        hi = size if hi is None else max(hi, size)
    return stop - start, total, total_sq, lo or 0, hi or 0


def monte_carlo(
    spec: InstanceSpec,
    trials: int,
    algorithm: AlgorithmName = "restricted",
    threads: int = 1,
) -> TrialSummary:
    """Run the chosen algorithm on fresh uniform orders of one fixed instance.

    Reports mean and dispersion of the output size, the oracle's alpha, and
    the certified lower bound out_lb(alpha) for comparison.  The prediction
    check is one-sided: mean >= bound - 3 * stderr.
    """
    if trials < 1:
        raise ValueError("need at least one trial")

    blocks: list[tuple[int, int, int, int, int]]
    if threads > 1 and trials >= 4:
        chunk = max(1, math.ceil(trials / (threads * 4)))
        ranges = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            blocks = list(
                pool.map(
                    _trial_block,
                    [spec] * len(ranges),
                    [algorithm] * len(ranges),
                    [s for s, _ in ranges],
                    [e for _, e in ranges],
                )
            )
    else:
        blocks = [_trial_block(spec, algorithm, 0, trials)]

    count = sum(b[0] for b in blocks)
    total = sum(b[1] for b in blocks)
    total_sq = sum(b[2] for b in blocks)
    lo = min(b[3] for b in blocks)
    hi = max(b[4] for b in blocks)

    intervals = instance_from_spec(spec)
    a = alpha(intervals)
    mean = total / count
    var = (total_sq - count * mean * mean) / (count - 1) if count > 1 else 0.0
    std = math.sqrt(max(var, 0.0))
    stderr = std / math.sqrt(count)
    bound = float(build_out_table(max(a, 2)).bound(a)) if a >= 1 else 0.0
    return TrialSummary(
        trials=count,
        mean=mean,
        std=std,
        min_size=lo,
        max_size=hi,
        alpha=a,
        empirical_factor=mean / a if a else 0.0,
        predicted_bound=bound,
        stderr=stderr,
        meets_prediction=mean >= bound - 3 * stderr,
    )


def exhaustive_expectation(intervals: Sequence[UnitInterval], delta: int) -> Fraction:
    """Exact mean output size over every permutation of the instance (n <= 8)."""
    n = len(intervals)
    if n > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive expectation limited to n <= {MAX_EXHAUSTIVE}")
    if n == 0:
        return Fraction(0)
    ceiling = alpha(intervals)
    total = 0
    count = 0
    for order in permutations(intervals):
        total += _validate_output(run_restricted(delta, order).output, ceiling)
        count += 1
    return Fraction(total, count)


@dataclass(frozen=True)
class MonotonicityReport:
    trials: int
    violations: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "violations": self.violation_count,
            "examples": list(self.violations[:5]),
        }


def _random_stream(rng: SplitMix64, delta: int, n: int) -> list[UnitInterval]:
    """n arbitrary unit intervals inside [0, delta), degenerate cases included."""
    out = []
    for _ in range(n):
        den = (1, 2, 4, DEFAULT_JITTER_DENOMINATOR)[rng.below(4)]
        num = rng.below((delta - 1) * den)
        out.append(UnitInterval(Scalar(num, den)))
    arrangement = rng.below(3)
    if arrangement == 1:
        out.sort(key=lambda iv: iv.left)
    elif arrangement == 2:
        out.sort(key=lambda iv: iv.left, reverse=True)
    return out


def substream_monotonicity_test(trials: int, seed: int) -> MonotonicityReport:
    """Deleting intervals from a stream must never grow the output.

    Per trial: a random stream in an arbitrary (not necessarily uniform)
    order, a random order-preserving substream, one run of each, and a
    check that |OUT(substream)| <= |OUT(stream)|.  Returns the violations
    found; a correct implementation returns none.
    """
    violations = []
    for k in range(trials):
        rng = derive(seed, k)
        delta = 2 + rng.below(5)
        n = rng.below(11)
        stream = _random_stream(rng, delta, n)
        mode = rng.below(8)
        if mode == 0:
            sub = list(stream)
        elif mode == 1:
            sub = []
        else:
            sub = [iv for iv in stream if rng.bit()]
        full_size = len(run_restricted(delta, stream).output)
        sub_size = len(run_restricted(delta, sub).output)
        if sub_size > full_size:
            violations.append(
                {
                    "trial": k,
                    "delta": delta,
                    "stream": [str(iv.left) for iv in stream],
                    "substream": [str(iv.left) for iv in sub],
                    "full_size": full_size,
                    "sub_size": sub_size,
                }
            )
    return MonotonicityReport(trials=trials, violations=tuple(violations))
