"""Discrete event sequences in explicit event-list form.

An :class:`EventList` stores the impulse at time 0 plus a list of
``(gap, event)`` pairs, where ``gap`` is the time since the previous entry.
Entries whose event is 0 carry no impulse; they only mark a boundary at which
a trace starts a new transition (this is how quiet grid slots are kept
explicit). :meth:`EventList.canonical` drops them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import AlphabetError, DomainError
from .exact import Number, exact


@dataclass(frozen=True)
class EventList:
    initial_event: Fraction = Fraction(0)
    entries: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "initial_event", exact(self.initial_event))
        entries = tuple((exact(g), exact(e)) for g, e in self.entries)
        for gap, _ in entries:
            if gap <= 0:
                raise DomainError(f"event gap must be positive, got {gap}")
        object.__setattr__(self, "entries", entries)

    @property
    def span(self) -> Fraction:
        """Sum of all gaps (time of the last entry, zero-valued or not)."""
        return sum((g for g, _ in self.entries), Fraction(0))

    def events(self) -> list[Fraction]:
        return [self.initial_event] + [e for _, e in self.entries]

    def check_alphabet(self, alphabet: Iterable[Fraction]) -> None:
        allowed = set(alphabet)
        for value in self.events():
            if value not in allowed:
                raise AlphabetError(f"event {value} is not in the alphabet")

    def canonical(self) -> EventList:
        return event_list_from_impulses(impulses_from_event_list(self))


def event_list_from_impulses(
    impulses: Iterable[tuple[Number, Number]], alphabet: Iterable[Number] | None = None
) -> EventList:
    """Build the event list of ``sum(p_i * delta(t - t_i))``.

    Times must be strictly increasing; an impulse at time 0 becomes the
    initial event.
    """
    allowed = None if alphabet is None else {exact(a) for a in alphabet}
    initial = Fraction(0)
    entries = []
    last = None
    for time, magnitude in impulses:
        time, magnitude = exact(time), exact(magnitude)
        if time < 0 or (last is not None and time <= last):
            raise DomainError("impulse times must be non-negative and strictly increasing")
        if magnitude == 0:
            raise DomainError(f"impulse at {time} has zero magnitude")
        if allowed is not None and magnitude not in allowed:
            raise AlphabetError(f"impulse magnitude {magnitude} is not in the alphabet")
        if time == 0:
            initial = magnitude
        else:
            entries.append((time - (last or Fraction(0)), magnitude))
        last = time
    return EventList(initial, tuple(entries))


def impulses_from_event_list(e: EventList) -> list[tuple[Fraction, Fraction]]:
    out = []
    if e.initial_event != 0:
        out.append((Fraction(0), e.initial_event))
    t = Fraction(0)
    for gap, value in e.entries:
        t += gap
        if value != 0:
            out.append((t, value))
    return out


def horizon(e: EventList) -> Fraction:
    """Time of the last nonzero impulse, 0 when there is none."""
    imps = impulses_from_event_list(e)
    return imps[-1][0] if imps else Fraction(0)


def restrict(e: EventList, t1: Number, t2: Number) -> EventList:
    """Impulses in ``[t1, t2)``, shifted so that ``t1`` becomes time 0."""
    t1, t2 = exact(t1), exact(t2)
    if t1 < 0 or t1 >= t2:
        raise DomainError(f"empty or negative window [{t1}, {t2})")
    return event_list_from_impulses(
        (t - t1, p) for t, p in impulses_from_event_list(e) if t1 <= t < t2
    )


def concat(a: EventList, length_a: Number, b: EventList) -> EventList:
    """Concatenate ``a`` over the window ``[0, length_a)`` with ``b`` placed after it.

    Zero-valued entries of both operands are kept.
    """
    length_a = exact(length_a)
    if length_a <= a.span:
        raise DomainError(f"window length {length_a} does not exceed the span {a.span} of a")
    lead = length_a - a.span
    entries = list(a.entries)
    rest = list(b.entries)
    if b.initial_event != 0:
        entries.append((lead, b.initial_event))
    elif rest:
        rest[0] = (rest[0][0] + lead, rest[0][1])
    entries.extend(rest)
    return EventList(a.initial_event, tuple(entries))
