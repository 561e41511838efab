"""Discrete event systems, scenarios, traces and transition sets."""
from __future__ import annotations

import abc
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Sequence

from .errors import AlphabetError, DomainError, StepError
from .events import EventList
from .exact import Number, exact, fmt

StateKey = bytes


class DesModel(abc.ABC):
    """A deterministic discrete event system driven by single impulses.

    Subclasses define ``alphabet``, ``base_step``, the state codec and
    :meth:`evolve`. States cross the interface as canonical byte keys, so two
    states are equal exactly when their keys are.
    """

    alphabet: frozenset[Fraction]
    base_step: Fraction
    #: True when an event is held as a constant input for the whole run,
    #: False when it acts as a one-off impulse at the start of the run.
    holds_input: bool = False
    output_arity: int = 1
    model_id: str = ""

    @abc.abstractmethod
    def encode(self, state: Any) -> StateKey: ...

    @abc.abstractmethod
    def decode(self, key: StateKey) -> Any: ...

    @abc.abstractmethod
    def evolve(self, state: Any, event: Fraction, ticks: int) -> Any:
        """Advance a decoded state by ``ticks`` base steps under ``event``."""

    @abc.abstractmethod
    def observe(self, state: Any) -> tuple[float, ...]: ...

    @abc.abstractmethod
    def parse_state(self, literal: str) -> StateKey: ...

    @abc.abstractmethod
    def format_state(self, key: StateKey) -> str: ...

    def ticks(self, duration: Number) -> int:
        duration = exact(duration)
        n = duration / self.base_step
        if duration < 0 or n.denominator != 1:
            raise StepError(f"duration {fmt(duration)} is not a multiple of {fmt(self.base_step)}")
        return int(n)

    def check_event(self, event: Number) -> Fraction:
        event = exact(event)
        if event not in self.alphabet:
            raise AlphabetError(f"event {fmt(event)} is not in the alphabet")
        return event

    def phi(self, duration: Number, key: StateKey, event: Number) -> StateKey:
        """State reached after ``duration`` from ``key`` with impulse ``event`` at time 0.

        A zero duration returns ``key`` unchanged, so ``phi(0, x, u) == x``
        holds by construction.
        """
        event = self.check_event(event)
        n = self.ticks(duration)
        if n == 0:
            return key
        return self.encode(self.evolve(self.decode(key), event, n))

    def output(self, key: StateKey) -> tuple[float, ...]:
        return self.observe(self.decode(key))

    def continuation(self, event: Fraction) -> Fraction:
        """Event that continues the same input signal past an aligned split point."""
        return event if self.holds_input else Fraction(0)


@dataclass(frozen=True, order=True)
class Transition:
    source: StateKey
    event: Fraction
    duration: Fraction
    target: StateKey

    def dump(self) -> str:
        return f"TRANS {self.source.hex()} {fmt(self.event)} {fmt(self.duration)} {self.target.hex()}"


class TransitionSet:
    """Duplicate-free set of transitions iterated in canonical (sorted) order."""

    def __init__(self, items: Iterable[Transition] = ()):
        self._items: set[Transition] = set(items)

    def add(self, t: Transition) -> None:
        self._items.add(t)

    def update(self, items: Iterable[Transition]) -> None:
        self._items.update(items)

    def __or__(self, other: TransitionSet) -> TransitionSet:
        return TransitionSet(self._items | other._items)

    def __contains__(self, t) -> bool:
        return t in self._items

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Transition]:
        return iter(sorted(self._items))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionSet):
            return NotImplemented
        return self._items == other._items

    def __le__(self, other: TransitionSet) -> bool:
        return self._items <= other._items

    def __repr__(self) -> str:
        return f"TransitionSet({len(self)} transitions)"

    def dump(self) -> str:
        return "".join(t.dump() + "\n" for t in self)


@dataclass(frozen=True)
class Scenario:
    """An initial state, an event list and the time simulated after the last entry."""

    initial_state: StateKey
    events: EventList
    tail: Fraction

    def __post_init__(self):
        object.__setattr__(self, "tail", exact(self.tail))
        if self.tail <= 0:
            raise DomainError("scenario tail must be positive")

    def runs(self) -> list[tuple[Fraction, Fraction]]:
        """``(event, duration)`` of each run the scenario's trace performs."""
        values = self.events.events()
        durations = [g for g, _ in self.events.entries] + [self.tail]
        return list(zip(values, durations))

    @classmethod
    def from_runs(cls, initial_state: StateKey, runs: Sequence[tuple[Number, Number]]) -> Scenario:
        if not runs:
            raise DomainError("a scenario needs at least one run")
        runs = [(exact(p), exact(d)) for p, d in runs]
        entries = tuple((runs[i - 1][1], runs[i][0]) for i in range(1, len(runs)))
        return cls(initial_state, EventList(runs[0][0], entries), runs[-1][1])

    def validate(self, model: DesModel) -> None:
        self.events.check_alphabet(model.alphabet)
        for _, d in self.runs():
            if model.ticks(d) == 0:
                raise StepError("scenario durations must be positive")


def trace(model: DesModel, s: Scenario) -> list[Transition]:
    """One transition per run: ``(x_i, p_i, d_i, x_{i+1})``."""
    out = []
    x = s.initial_state
    for event, duration in s.runs():
        event = model.check_event(event)
        if model.ticks(duration) == 0:
            raise StepError("transition durations must be positive")
        y = model.phi(duration, x, event)
        out.append(Transition(x, event, duration, y))
        x = y
    return out


def transition_set(tr: Iterable[Transition]) -> TransitionSet:
    return TransitionSet(tr)


def scenario_transitions(model: DesModel, scenarios: Iterable[Scenario]) -> TransitionSet:
    """Union of the transition sets of ``scenarios``, each simulated from scratch."""
    out = TransitionSet()
    for s in scenarios:
        out.update(trace(model, s))
    return out
