"""Enumeration of admissible disturbance sequences on a time grid.

Events may occur at the grid points one quantum apart up to the horizon, so
a sequence is a slot vector with one alphabet value per grid point (0 meaning
no event). Each vector becomes a scenario whose event list keeps every slot explicit, so its
trace has one transition per slot plus one for the tail.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .des import Scenario, StateKey
from .errors import DomainError
from .events import EventList
from .exact import Number, exact, fmt


class EmptyEnumerationWarning(UserWarning):
    """The constraints admit no sequence at all."""


def _slots(seconds: Fraction, quantum: Fraction, what: str) -> int:
    n = seconds / quantum
    if n.denominator != 1 or n < 0:
        raise DomainError(f"{what} {fmt(seconds)} is not a multiple of the quantum {fmt(quantum)}")
    return int(n)


@dataclass(frozen=True)
class MaxEventsInWindow:
    """At most ``k`` events in any window of length ``window``."""

    window: Fraction
    k: int

    def automaton(self, quantum: Fraction):
        w = _slots(exact(self.window), quantum, "window")
        if w < 1:
            raise DomainError("window must span at least one slot")
        keep = (1 << (w - 1)) - 1

        def step(recent: int, nonzero: bool):
            if nonzero and bin(recent).count("1") + 1 > self.k:
                return None
            return ((recent << 1) | nonzero) & keep

        return 0, step

    def text(self) -> str:
        return f"constraint max_in_window {fmt(self.window)} {self.k}"


@dataclass(frozen=True)
class MinGap:
    """Consecutive events are at least ``gap`` apart."""

    gap: Fraction

    def automaton(self, quantum: Fraction):
        g = _slots(exact(self.gap), quantum, "gap")

        # state: slots since the last event, capped at g (no event yet counts as g)
        def step(since: int, nonzero: bool):
            if nonzero:
                return None if since < g else 1
            return min(since + 1, g)

        return g, step

    def text(self) -> str:
        return f"constraint min_gap {fmt(self.gap)}"


@dataclass(frozen=True)
class MaxTotalEvents:
    k: int

    def automaton(self, quantum: Fraction):
        def step(count: int, nonzero: bool):
            count += nonzero
            return None if count > self.k else count

        return 0, step

    def text(self) -> str:
        return f"constraint max_total {self.k}"


@dataclass(frozen=True)
class CustomPredicate:
    """Arbitrary test on the full event list; checked once the vector is complete."""

    predicate: Callable[[EventList], bool]
    name: str = "custom"


Constraint = MaxEventsInWindow | MinGap | MaxTotalEvents | CustomPredicate


@dataclass(frozen=True)
class EnumerationSpec:
    alphabet: frozenset[Fraction]
    horizon: Fraction
    quantum: Fraction
    constraints: tuple = ()
    initial_state: StateKey = b""
    model_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(exact(a) for a in self.alphabet))
        object.__setattr__(self, "horizon", exact(self.horizon))
        object.__setattr__(self, "quantum", exact(self.quantum))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if Fraction(0) not in self.alphabet:
            raise DomainError("the alphabet must contain 0")
        if self.quantum <= 0 or self.horizon <= 0:
            raise DomainError("horizon and quantum must be positive")
        _slots(self.horizon, self.quantum, "horizon")
        for c in self.constraints:
            if isinstance(c, (MaxEventsInWindow, MaxTotalEvents)) and c.k < 0:
                raise DomainError("event bounds must be non-negative")
            if not isinstance(c, CustomPredicate):
                c.automaton(self.quantum)

    @property
    def slots(self) -> int:
        return int(self.horizon / self.quantum)

    def values(self) -> list[Fraction]:
        return sorted(self.alphabet)

    def scenario(self, vector: Sequence[Number]) -> Scenario:
        q = self.quantum
        events = EventList(Fraction(0), tuple((q, exact(v)) for v in vector))
        return Scenario(self.initial_state, events, q)


def vector_of(s: Scenario) -> tuple[Fraction, ...]:
    """Slot vector of a scenario built by :meth:`EnumerationSpec.scenario`."""
    return tuple(e for _, e in s.events.entries)


def _machines(spec: EnumerationSpec):
    autos = [c.automaton(spec.quantum) for c in spec.constraints if not isinstance(c, CustomPredicate)]
    customs = [c for c in spec.constraints if isinstance(c, CustomPredicate)]
    return [a[0] for a in autos], [a[1] for a in autos], customs


def enumerate_vectors(spec: EnumerationSpec, leading: Number | None = None) -> Iterator[tuple]:
    """Admissible slot vectors in lexicographic order (values sorted numerically)."""
    starts, steps, customs = _machines(spec)
    values = spec.values()
    if leading is not None:
        leading = exact(leading)
        if leading not in spec.alphabet:
            return
    n = spec.slots
    found = False

    # DFS; the stack holds (prefix, automaton states) in reverse lexicographic order
    stack = [((), tuple(starts))]
    while stack:
        prefix, states = stack.pop()
        if len(prefix) == n:
            if customs:
                events = spec.scenario(prefix).events
                if not all(c.predicate(events) for c in customs):
                    continue
            found = True
            yield prefix
            continue
        choices = [leading] if (leading is not None and not prefix) else values
        nxt = []
        for v in choices:
            new = _step_all(steps, states, v != 0)
            if new is not _REJECT:
                nxt.append((prefix + (v,), new))
        stack.extend(reversed(nxt))
    if not found and leading is None:
        warnings.warn("no admissible disturbance sequence", EmptyEnumerationWarning, stacklevel=2)


_REJECT = object()


def _step_all(steps, states, nonzero: bool):
    out = []
    for fn, st in zip(steps, states):
        nxt = fn(st, nonzero)
        if nxt is None:
            return _REJECT
        out.append(nxt)
    return tuple(out)


def enumerate_admissible(spec: EnumerationSpec, leading: Number | None = None) -> Iterator[Scenario]:
    """Stream the admissible scenarios; ``leading`` restricts the first slot's value."""
    for vec in enumerate_vectors(spec, leading):
        yield spec.scenario(vec)


def count_admissible(spec: EnumerationSpec, leading: Number | None = None) -> int:
    """Number of admissible scenarios, by dynamic programming over automaton states."""
    starts, steps, customs = _machines(spec)
    if customs:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyEnumerationWarning)
            return sum(1 for _ in enumerate_vectors(spec, leading))
    nonzero_values = len(spec.alphabet) - 1
    layer = {tuple(starts): 1}
    for slot in range(spec.slots):
        if slot == 0 and leading is not None:
            leading = exact(leading)
            if leading not in spec.alphabet:
                return 0
            options = [(leading != 0, 1)]
        else:
            options = [(False, 1), (True, nonzero_values)]
        nxt: dict[tuple, int] = {}
        for states, count in layer.items():
            for nonzero, ways in options:
                if not ways:
                    continue
                new = _step_all(steps, states, nonzero)
                if new is not _REJECT:
                    nxt[new] = nxt.get(new, 0) + count * ways
        layer = nxt
    return sum(layer.values())


def shards(spec: EnumerationSpec) -> list[Fraction]:
    """Leading-slot values; enumerating each separately partitions the stream in order."""
    return spec.values()
