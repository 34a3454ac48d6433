"""Hard-instance construction coupling interval selection to bit recovery.

The construction stacks t mutually overlapping unit intervals (a clique,
so any independent set keeps at most one of them) and two wing intervals
around the clique member at a secret index A:

    I[i]  = [ i/(t+1) + b_i/t**2,  1 + i/(t+1) + b_i/t**2 ]      b_i in {0,1}
    J_L   = [ A/(t+1) - 1/t**3 - 1,  A/(t+1) - 1/t**3 ]
    J_R   = [ 1 + A/(t+1) + 1/t**2 + 1/t**3,  2 + A/(t+1) + 1/t**2 + 1/t**3 ]

Every clique interval other than I[A] intersects exactly one wing, so the
unique independent set of size 3 is {J_L, I[A], J_R}; recovering it reveals
the bit b_A.  The wing geometry needs 1/(t+1) >= 1/t**2 + 1/t**3, which
holds exactly for t >= 3 and is checked per instance.

Arrival order: a bijection assigns each of the t+2 logical items (t bit
items plus the two wing items) a stream position.  Items arriving before
the earlier wing position j' carry the sender's private bits; items at or
after j' carry public bits or the wings.  The resulting stream is a
uniform random order of the finished instance when the bijection is drawn
uniformly.

Simulation samples are independent: sample k draws everything from
``derive(seed, k)`` and may run in parallel.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .geometry import (
    IndependentSet,
    Scalar,
    UnitInterval,
    intersects,
    max_independent_set,
)
from .rng import SplitMix64, derive, fisher_yates
from .windows import run_windowed

MIN_T = 3

Algorithm = Callable[[Sequence[UnitInterval]], IndependentSet]


class GadgetInvariantError(RuntimeError):
    """A structural property of the construction failed; names the property."""


@dataclass(frozen=True)
class GadgetInstance:
    """One sampled instance: bits, arrival bijection, and the built intervals.

    ``clique_positions[i]`` is the stream position of clique interval i;
    the wing positions complete the bijection over [t+2].  ``stream`` lists
    the intervals in arrival order.
    """

    t: int
    index: int
    alice_bits: tuple[int, ...]
    public_bits: tuple[int, ...]
    clique_positions: tuple[int, ...]
    wing_left_position: int
    wing_right_position: int
    clique: tuple[UnitInterval, ...]
    wing_left: UnitInterval
    wing_right: UnitInterval

    @property
    def n(self) -> int:
        return self.t + 2

    @property
    def first_wing_position(self) -> int:
        return min(self.wing_left_position, self.wing_right_position)

    @property
    def target_position(self) -> int:
        return self.clique_positions[self.index]

    @property
    def alice_built_target(self) -> bool:
        """True iff the target interval arrives before both wings."""
        return self.target_position < self.first_wing_position

    @property
    def encoded_bits(self) -> tuple[int, ...]:
        """The bit actually baked into each clique interval."""
        j = self.first_wing_position
        return tuple(
            self.alice_bits[i] if self.clique_positions[i] < j else self.public_bits[i]
            for i in range(self.t)
        )

    @property
    def stream(self) -> tuple[UnitInterval, ...]:
        order: list[UnitInterval | None] = [None] * self.n
        for i, pos in enumerate(self.clique_positions):
            order[pos] = self.clique[i]
        order[self.wing_left_position] = self.wing_left
        order[self.wing_right_position] = self.wing_right
        return tuple(order)  # type: ignore[arg-type]

    @property
    def alice_stream(self) -> tuple[UnitInterval, ...]:
        """The prefix fed before the protocol state is handed over."""
        return self.stream[: self.first_wing_position]


def wing_gap_inequality_holds(t: int) -> bool:
    """1/(t+1) >= 1/t**2 + 1/t**3: neighbours reach their wing, exactly."""
    return Fraction(1, t + 1) >= Fraction(1, t * t) + Fraction(1, t**3)


def build(
    t: int,
    index: int,
    alice_bits: Sequence[int],
    public_bits: Sequence[int],
    sigma: Sequence[int],
) -> GadgetInstance:
    """Construct the instance for one draw of bits and arrival bijection.

    ``sigma[item]`` is the stream position of logical item ``item``: items
    0..t-1 are the clique bit items, item t the left wing, item t+1 the
    right wing.
    """
    if t < MIN_T:
        raise ValueError(
            f"t must be >= {MIN_T}: for smaller t the wing gap inequality "
            "1/(t+1) >= 1/t^2 + 1/t^3 fails and off-target intervals miss their wing"
        )
    if not 0 <= index < t:
        raise ValueError(f"index must lie in [0, {t})")
    if len(alice_bits) != t or len(public_bits) != t:
        raise ValueError("bit vectors must have length t")
    if any(b not in (0, 1) for b in alice_bits) or any(
        b not in (0, 1) for b in public_bits
    ):
        raise ValueError("bit vectors must be 0/1")
    if sorted(sigma) != list(range(t + 2)):
        raise ValueError("sigma must be a bijection onto positions 0..t+1")

    wing_left_pos = sigma[t]
    wing_right_pos = sigma[t + 1]
    j_prime = min(wing_left_pos, wing_right_pos)

    t_sq = t * t
    t_cu = t_sq * t
    clique = []
    for i in range(t):
        bit = alice_bits[i] if sigma[i] < j_prime else public_bits[i]
        left = Scalar(i, t + 1) + Scalar(bit, t_sq)
        clique.append(UnitInterval(left, label=f"clique:{i}"))

    base = Scalar(index, t + 1)
    wing_left = UnitInterval(base - Scalar(1, t_cu) - 1, label="wing:L")
    wing_right = UnitInterval(base + Scalar(1, t_sq) + Scalar(1, t_cu) + 1, label="wing:R")

    return GadgetInstance(
        t=t,
        index=index,
        alice_bits=tuple(alice_bits),
        public_bits=tuple(public_bits),
        clique_positions=tuple(sigma[:t]),
        wing_left_position=wing_left_pos,
        wing_right_position=wing_right_pos,
        clique=tuple(clique),
        wing_left=wing_left,
        wing_right=wing_right,
    )


def sample_sigma(t: int, rng: SplitMix64) -> list[int]:
    """Uniform bijection item -> position over t+2 items."""
    perm = fisher_yates(range(t + 2), rng)
    positions = [0] * (t + 2)
    for pos, item in enumerate(perm):
        positions[item] = pos
    return positions


def random_gadget(t: int, rng: SplitMix64) -> GadgetInstance:
    """Draw bits, a target index, and an arrival bijection uniformly."""
    alice_bits = rng.bits(t)
    index = rng.below(t)
    public_bits = rng.bits(t)
    return build(t, index, alice_bits, public_bits, sample_sigma(t, rng))


@dataclass(frozen=True)
class VerificationReport:
    t: int
    index: int
    alpha: int
    clique_pairwise_intersecting: bool
    wing_incidence_ok: bool
    target_independent_of_wings: bool
    unique_triple: bool
    wing_gap_inequality: bool
    triple_checked_exhaustively: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "n": self.t + 2,
            "index": self.index,
            "alpha": self.alpha,
            "clique_pairwise_intersecting": self.clique_pairwise_intersecting,
            "wing_incidence_ok": self.wing_incidence_ok,
            "target_independent_of_wings": self.target_independent_of_wings,
            "unique_triple": self.unique_triple,
            "wing_gap_inequality": self.wing_gap_inequality,
            "triple_checked_exhaustively": self.triple_checked_exhaustively,
        }


def verify(g: GadgetInstance, exhaustive: bool = False) -> VerificationReport:
    """Check every structural guarantee with exact arithmetic.

    Raises GadgetInvariantError naming the violated property.  Uniqueness
    of the size-3 set follows from the clique property (at most one clique
    member per independent set, so a 3-set must hold both wings) plus the
    per-interval wing incidence counts; ``exhaustive=True`` additionally
    enumerates all triples, which is only practical for modest t.
    """
    if not wing_gap_inequality_holds(g.t):
        raise GadgetInvariantError(f"wing gap inequality fails for t={g.t}")

    for a in range(g.t):
        for b in range(a + 1, g.t):
            if not intersects(g.clique[a], g.clique[b]):
                raise GadgetInvariantError(
                    f"clique intervals {a} and {b} fail to intersect"
                )

    for i, iv in enumerate(g.clique):
        hits_left = intersects(iv, g.wing_left)
        hits_right = intersects(iv, g.wing_right)
        if i == g.index:
            if hits_left or hits_right:
                raise GadgetInvariantError(f"target interval {i} intersects a wing")
        elif i < g.index:
            if not hits_left or hits_right:
                raise GadgetInvariantError(
                    f"clique interval {i} < target must intersect exactly the left wing"
                )
        elif hits_left or not hits_right:
            raise GadgetInvariantError(
                f"clique interval {i} > target must intersect exactly the right wing"
            )

    instance = list(g.clique) + [g.wing_left, g.wing_right]
    a = len(max_independent_set(instance))
    if a != 3:
        raise GadgetInvariantError(f"oracle alpha is {a}, expected 3")

    # With the incidence counts proven, any independent triple must be both
    # wings plus the one clique interval independent of both: the target.
    IndependentSet([g.wing_left, g.clique[g.index], g.wing_right])

    if exhaustive:
        triple = {g.wing_left.left, g.clique[g.index].left, g.wing_right.left}
        found = []
        n = len(instance)
        for x in range(n):
            for y in range(x + 1, n):
                if intersects(instance[x], instance[y]):
                    continue
                for z in range(y + 1, n):
                    if not intersects(instance[x], instance[z]) and not intersects(
                        instance[y], instance[z]
                    ):
                        found.append({instance[x].left, instance[y].left, instance[z].left})
        if found != [triple]:
            raise GadgetInvariantError(
                f"expected exactly one independent triple, found {len(found)}"
            )

    return VerificationReport(
        t=g.t,
        index=g.index,
        alpha=a,
        clique_pairwise_intersecting=True,
        wing_incidence_ok=True,
        target_independent_of_wings=True,
        unique_triple=True,
        wing_gap_inequality=True,
        triple_checked_exhaustively=exhaustive,
    )


def wing_after_probability(t: int, samples: int, seed: int) -> float:
    """Fraction of uniform draws where the target precedes both wings.

    Only the relative order of three of the t+2 items matters, so the
    fraction concentrates at 1/3 for every t >= 1.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if t < 1:
        raise ValueError("need at least one clique item")
    hits = 0
    for k in range(samples):
        rng = derive(seed, k)
        index = rng.below(t)
        positions = sample_sigma(t, rng)
        if positions[index] < min(positions[t], positions[t + 1]):
            hits += 1
    return hits / samples


# --- protocol simulation ----------------------------------------------------


def _oracle_algorithm(stream: Sequence[UnitInterval]) -> IndependentSet:
    return max_independent_set(stream)


def _first_only_algorithm(stream: Sequence[UnitInterval]) -> IndependentSet:
    return IndependentSet(list(stream[:1]))


def resolve_algorithm(name: str) -> Algorithm:
    """Map "oracle", "first" or "windowed:DELTA" to a stream consumer."""
    if name == "oracle":
        return _oracle_algorithm
    if name == "first":
        return _first_only_algorithm
    if name.startswith("windowed:"):
        delta = int(name.split(":", 1)[1])
        return lambda stream: run_windowed(delta, stream)
    raise ValueError(f"unknown algorithm {name!r}")


@dataclass(frozen=True)
class BranchStats:
    samples: int
    successes: int
    size_sum: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.samples if self.samples else 0.0

    @property
    def mean_size(self) -> float:
        return self.size_sum / self.samples if self.samples else 0.0

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "success_rate": self.success_rate,
            "mean_output_size": self.mean_size,
        }


@dataclass(frozen=True)
class ProtocolStats:
    """Aggregate outcome of simulating the recovery protocol."""

    t: int
    samples: int
    successes: int
    size_sum: int
    triple_count: int
    alice_branch: BranchStats
    bob_branch: BranchStats

    @property
    def n(self) -> int:
        return self.t + 2

    @property
    def success_rate(self) -> float:
        return self.successes / self.samples

    @property
    def mean_output_size(self) -> float:
        return self.size_sum / self.samples

    @property
    def approx_factor(self) -> float:
        return self.mean_output_size / 3.0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "n": self.n,
            "samples": self.samples,
            "success_rate": self.success_rate,
            "mean_output_size": self.mean_output_size,
            "approx_factor": self.approx_factor,
            "unique_triple_rate": self.triple_count / self.samples,
            "target_built_privately": self.alice_branch.to_dict(),
            "target_built_publicly": self.bob_branch.to_dict(),
        }


def _run_sample(t: int, algorithm: Algorithm, rng: SplitMix64) -> tuple[int, bool, bool]:
    """One protocol round: returns (output size, bit correct, target built privately)."""
    g = random_gadget(t, rng)
    raw = algorithm(g.stream)
    output = raw if isinstance(raw, IndependentSet) else IndependentSet(raw)
    size = len(output)
    if size > 3:
        raise GadgetInvariantError(f"algorithm produced size {size} > alpha = 3")

    base = Scalar(g.index, g.t + 1)
    shifted = base + Scalar(1, g.t * g.t)
    target_left = None
    if size == 3:
        lefts = {iv.left for iv in output}
        want = {g.wing_left.left, g.wing_right.left}
        clique_lefts = lefts - want
        if lefts & want != want or len(clique_lefts) != 1:
            raise GadgetInvariantError(
                "size-3 output is not the wings plus one clique interval"
            )
        (target_left,) = clique_lefts
        if target_left != base and target_left != shifted:
            raise GadgetInvariantError("size-3 output kept a non-target clique interval")

    if size == 3 and g.alice_built_target:
        recovered = 0 if target_left == base else 1
    else:
        recovered = rng.bit()
    correct = recovered == g.alice_bits[g.index]
    return size, correct, g.alice_built_target


def _aggregate_samples(
    t: int, algorithm: Algorithm, seed: int, start: int, stop: int
) -> tuple[int, int, int, int, int, int, int, int]:
    successes = size_sum = triples = 0
    a_n = a_succ = a_size = 0
    b_succ = b_size = 0
    for k in range(start, stop):
        size, correct, private = _run_sample(t, algorithm, derive(seed, k))
        successes += correct
        size_sum += size
        triples += size == 3
        if private:
            a_n += 1
            a_succ += correct
            a_size += size
        else:
            b_succ += correct
            b_size += size
    return successes, size_sum, triples, a_n, a_succ, a_size, b_succ, b_size


def _sample_block(
    t: int, algorithm_name: str, seed: int, start: int, stop: int
) -> tuple[int, int, int, int, int, int, int, int]:
    return _aggregate_samples(t, resolve_algorithm(algorithm_name), seed, start, stop)


def simulate_protocol(
    t: int,
    samples: int,
    algorithm: Union[str, Algorithm],
    seed: int,
    threads: int = 1,
) -> ProtocolStats:
    """Simulate the one-pass recovery protocol against a streaming algorithm.

    Per sample: draw bits, target index and arrival bijection; build the
    instance; run the algorithm over the arrival-ordered stream; recover a
    bit per the output rule (a coin flip unless the output is the full
    triple and the target was built from the private bits).  Reports the
    recovery success rate, the achieved approximation factor (mean size
    over 3), and the breakdown by who built the target interval.

    ``algorithm`` may be a registry name ("oracle", "first",
    "windowed:DELTA") or any callable from a stream to an independent set;
    parallel execution needs the picklable name form.
    """
    if samples < 1:
        raise ValueError("need at least one sample")

    if isinstance(algorithm, str) and threads > 1 and samples >= 4:
        chunk = max(1, math.ceil(samples / (threads * 4)))
        ranges = [(s, min(s + chunk, samples)) for s in range(0, samples, chunk)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            blocks = list(
                pool.map(
                    _sample_block,
                    [t] * len(ranges),
                    [algorithm] * len(ranges),
                    [seed] * len(ranges),
                    [s for s, _ in ranges],
                    [e for _, e in ranges],
                )
            )
    else:
        fn = resolve_algorithm(algorithm) if isinstance(algorithm, str) else algorithm
        blocks = [_aggregate_samples(t, fn, seed, 0, samples)]

    successes = sum(b[0] for b in blocks)
    size_sum = sum(b[1] for b in blocks)
    triples = sum(b[2] for b in blocks)
    a_n = sum(b[3] for b in blocks)
    a_succ = sum(b[4] for b in blocks)
    a_size = sum(b[5] for b in blocks)
    b_succ = sum(b[6] for b in blocks)
    b_size = sum(b[7] for b in blocks)
    b_n = samples - a_n

    return ProtocolStats(
        t=t,
        samples=samples,
        successes=successes,
        size_sum=size_sum,
        triple_count=triples,
        alice_branch=BranchStats(a_n, a_succ, a_size),
        bob_branch=BranchStats(b_n, b_succ, b_size),
    )
