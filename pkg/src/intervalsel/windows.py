"""Shifting-window lift from a fixed domain to the whole line.

Every integer origin i defines a window [i, i + delta).  A unit interval
is fully contained in exactly delta - 1 such windows.  Each arriving
interval activates its containing windows (lazily: inactive windows use no
space), and is fed, translated by -i, into a per-window recursive instance
running on [-1, delta + 1).  At the end the window outputs are translated
back and a maximum independent set of their union is returned.

A WindowMap is single-writer during a stream; the per-window instances
are independent of one another.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import IndependentSet, UnitInterval, max_independent_set
from .restricted import InstanceState, RunReport, wrapper_domain


def windows_containing(interval: UnitInterval, delta: int) -> list[int]:
    """Origins i with i <= left and left + 1 < i + delta; always delta - 1 of them."""
    if delta < 2:
        raise ValueError("delta must be at least 2")
    fl = interval.left.floor()
    return list(range(fl - delta + 2, fl + 1))


@dataclass(frozen=True, slots=True)
class WindowReport:
    origin: int
    report: RunReport


class WindowMap:
    """Lazily activated length-delta windows, each backed by one instance."""

    __slots__ = ("delta", "_active", "_fed_count")

    def __init__(self, delta: int):
        if delta < 2:
            raise ValueError("delta must be at least 2")
        self.delta = delta
        self._active: dict[int, InstanceState] = {}
        self._fed_count = 0

    @property
    def active_origins(self) -> list[int]:
        return sorted(self._active)

    @property
    def active_count(self) -> int:
        return len(self._active)

    @property
    def fed_count(self) -> int:
        return self._fed_count

    def feed(self, interval: UnitInterval) -> None:
        """Activate the containing windows and feed the translated interval."""
        for origin in windows_containing(interval, self.delta):
            inst = self._active.get(origin)
            if inst is None:
                inst = InstanceState(wrapper_domain(self.delta))
                self._active[origin] = inst
            inst.feed(interval.translate(-origin))
        self._fed_count += 1

    def window_reports(self) -> list[WindowReport]:
        return [
            WindowReport(origin, self._active[origin].output())
            for origin in self.active_origins
        ]

    def merge_output(self) -> IndependentSet:
        """Translate every window's output back and select a maximum subset.

        The pooled candidates number at most (delta - 1) * alpha; duplicates
        from overlapping windows are collapsed before the exact greedy pass.
        """
        pool: dict = {}
        for origin in self.active_origins:
            report = self._active[origin].output()
            for iv in report.output:
                back = iv.translate(origin)
                pool.setdefault(back.left, back)
        return max_independent_set(list(pool.values()))


def run_windowed(delta: int, stream) -> IndependentSet:
    """Feed the stream through a fresh WindowMap and merge."""
    wm = WindowMap(delta)
    for iv in stream:
        wm.feed(iv)
    return wm.merge_output()
