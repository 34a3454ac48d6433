"""Recursive split-point streaming algorithm on a fixed integer domain.

An instance on [a, b) watches every integer split point i strictly inside
the domain.  For each i it keeps the left-most interval seen inside
[i, b) (slot ``R_i``), the right-most seen inside [a, i) (slot ``L_i``),
and four recursive children: unconditional pass-through children T_L(i)
on [a, i) and T_R(i) on [i, b), plus conditional children A_L(i) and
A_R(i) that only receive intervals strictly beyond the current slot.
Per arriving interval and split point the update order matters and is
fixed: pass-through feed, slot update, then the conditional feed judged
against the *updated* slot.

At the end of the stream each split point offers two candidates,
``OUT(T_L(i)) + R_i + OUT(A_R(i))`` and ``OUT(A_L(i)) + L_i + OUT(T_R(i))``,
and the largest over all split points is returned (smallest split point
wins ties, the R-side candidate preferred, for reproducibility).

Memory grows exponentially with the domain length k: an eagerly built
recursion tree would hold about 4 * 5**(k-2) instances.  Children here
are created lazily on first feed, which is observably identical (an
instance that is never fed outputs the empty set) and keeps small streams
cheap; the ``instances_touched`` counter reports how many nodes actually
materialised.

A single instance is a mutable single-writer state machine; distinct
instances are independent and may run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .geometry import Domain, IndependentSet, UnitInterval, contained_in

RIGHT_CANDIDATE = "right-candidate"
LEFT_CANDIDATE = "left-candidate"


class DomainError(ValueError):
    """An interval was fed to an instance whose domain does not contain it."""


def eager_instance_estimate(length: int) -> int:
    """Estimated node count of the eagerly built recursion tree, 4 * 5**(k-2).

    Documentation only; the implementation instantiates lazily and reports
    the exact materialised count per run.
    """
    if length < 2:
        return 1
    return 4 * 5 ** (length - 2)


@dataclass(frozen=True, slots=True)
class RunReport:
    """Outcome of one streamed run plus bookkeeping counters.

    ``instances_touched`` counts materialised recursion nodes (the root
    included); ``peak_stored_intervals`` counts occupied L/R slots over the
    whole tree.  Slots never empty once filled, so the end-of-stream count
    equals the peak.
    """

    output: IndependentSet
    winning_split_point: int | None
    winning_side: str | None
    instances_touched: int
    peak_stored_intervals: int

    def to_dict(self) -> dict:
        return {
            "output_size": len(self.output),
            "output_intervals": [str(iv.left) for iv in self.output],
            "winning_split_point": self.winning_split_point,
            "winning_side": self.winning_side,
            "instances_touched": self.instances_touched,
            "peak_stored_intervals": self.peak_stored_intervals,
        }


class InstanceState:
    """One node of the recursive algorithm, confined to an integer domain."""

    __slots__ = ("domain", "_r", "_l", "_tr", "_ar", "_tl", "_al")

    def __init__(self, domain: Domain):
        self.domain = domain
        self._r: dict[int, UnitInterval] = {}
        self._l: dict[int, UnitInterval] = {}
        self._tr: dict[int, InstanceState] = {}
        self._ar: dict[int, InstanceState] = {}
        self._tl: dict[int, InstanceState] = {}
        self._al: dict[int, InstanceState] = {}

    def feed(self, interval: UnitInterval) -> None:
        """Route one arriving interval through every split point.

        Raises DomainError unless the interval lies inside this domain;
        recursive feeds below satisfy containment by construction and skip
        the check.
        """
        if not contained_in(interval, self.domain):
            raise DomainError(f"{interval} not contained in {self.domain}")
        self._feed(interval)

    def _feed(self, iv: UnitInterval) -> None:
        # Containment at an inner node reduces to integer tests against the
        # floor of the left endpoint: with a <= x and x+1 < b guaranteed,
        # I lies in [i, b) iff i <= floor(x), and in [a, i) iff i >= floor(x)+2.
        a = self.domain.a
        b = self.domain.b
        left = iv.left
        num = left.num
        den = left.den
        fl = num // den

        for i in range(a + 1, fl + 1):
            child = self._tr.get(i)
            if child is None:
                child = InstanceState(Domain(i, b))
                self._tr[i] = child
            child._feed(iv)
            r = self._r.get(i)
            if r is None or left < r.left:
                self._r[i] = iv
                r = iv
            rl = r.left
            # independent of and further right than the slot: x > R_i + 1
            if num * rl.den > (rl.num + rl.den) * den:
                child = self._ar.get(i)
                if child is None:
                    child = InstanceState(Domain(i, b))
                    self._ar[i] = child
                child._feed(iv)

        for i in range(fl + 2, b):
            child = self._tl.get(i)
            if child is None:
                child = InstanceState(Domain(a, i))
                self._tl[i] = child
            child._feed(iv)
            l = self._l.get(i)
            if l is None or left > l.left:
                self._l[i] = iv
                l = iv
            ll = l.left
            # independent of and further left than the slot: x < L_i - 1
            if num * ll.den < (ll.num - ll.den) * den:
                child = self._al.get(i)
                if child is None:
                    child = InstanceState(Domain(a, i))
                    self._al[i] = child
                child._feed(iv)

    def _best(self) -> tuple[list[UnitInterval], int | None, str | None]:
        best: list[UnitInterval] = []
        best_point: int | None = None
        best_side: str | None = None
        if self.domain.length >= 2:
            best_point = self.domain.a + 1
            best_side = RIGHT_CANDIDATE
        for i in self.domain.split_points():
            tl = self._tl.get(i)
            cand = tl._best()[0] if tl is not None else []
            r = self._r.get(i)
            if r is not None:
                cand = cand + [r]
            ar = self._ar.get(i)
            if ar is not None:
                cand = cand + ar._best()[0]
            if len(cand) > len(best):
                best, best_point, best_side = cand, i, RIGHT_CANDIDATE

            al = self._al.get(i)
            cand = al._best()[0] if al is not None else []
            l = self._l.get(i)
            if l is not None:
                cand = cand + [l]
            tr = self._tr.get(i)
            if tr is not None:
                cand = cand + tr._best()[0]
            if len(cand) > len(best):
                best, best_point, best_side = cand, i, LEFT_CANDIDATE
        return best, best_point, best_side

    def output(self) -> RunReport:
        """Largest candidate over all split points, validated as independent."""
        best, point, side = self._best()
        return RunReport(
            output=IndependentSet(best),
            winning_split_point=point,
            winning_side=side,
            instances_touched=self._count_instances(),
            peak_stored_intervals=self._count_stored(),
        )

    def _count_instances(self) -> int:
        total = 1
        for children in (self._tr, self._ar, self._tl, self._al):
            for child in children.values():
                total += child._count_instances()
        return total

    def _count_stored(self) -> int:
        total = len(self._r) + len(self._l)
        for children in (self._tr, self._ar, self._tl, self._al):
            for child in children.values():
                total += child._count_stored()
        return total


def new_instance(domain: Domain) -> InstanceState:
    return InstanceState(domain)


def run_on_stream(domain: Domain, stream: Iterable[UnitInterval]) -> RunReport:
    """Feed the stream in order into a fresh instance and report the output."""
    inst = InstanceState(domain)
    for iv in stream:
        inst.feed(iv)
    return inst.output()


def wrapper_domain(delta: int) -> Domain:
    """Domain used to serve inputs confined to [0, delta).

    The instance runs on [-1, delta + 1) so that for every input the split
    points immediately left and right of it exist, including at the
    boundary positions 0 and delta.
    """
    if delta < 1:
        raise ValueError("delta must be at least 1")
    return Domain(-1, delta + 1)


def run_restricted(delta: int, stream: Sequence[UnitInterval]) -> RunReport:
    """Run on [-1, delta+1); every input must lie inside [0, delta)."""
    outer = wrapper_domain(delta)
    inner = Domain(0, delta)
    for iv in stream:
        if not contained_in(iv, inner):
            raise DomainError(f"{iv} not contained in {inner}")
    return run_on_stream(outer, stream)
