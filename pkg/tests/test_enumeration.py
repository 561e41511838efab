import itertools
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simcamp import (
    CustomPredicate,
    DomainError,
    EmptyEnumerationWarning,
    EnumerationSpec,
    MaxEventsInWindow,
    MaxTotalEvents,
    MinGap,
    count_admissible,
    enumerate_admissible,
)
from simcamp.enumeration import enumerate_vectors, shards, vector_of


def admissible(vector, constraints):
    """Independent predicate check over one slot vector (window and gap in slots)."""
    hits = [i for i, v in enumerate(vector) if v != 0]
    for c in constraints:
        if isinstance(c, MaxTotalEvents) and len(hits) > c.k:
            return False
        if isinstance(c, MinGap) and any(b - a < c.gap for a, b in zip(hits, hits[1:])):
            return False
        if isinstance(c, MaxEventsInWindow):
            w = int(c.window)
            if any(sum(1 for h in hits if i <= h < i + w) > c.k for i in range(len(vector))):
                return False
    return True


def brute(alphabet, n, constraints):
    return [v for v in itertools.product(sorted(alphabet), repeat=n) if admissible(v, constraints)]


def test_unconstrained_binary():
    spec = EnumerationSpec({0, 1}, 3, 1)
    scenarios = list(enumerate_admissible(spec))
    assert len(scenarios) == 8 == count_admissible(spec)
    assert all(s.tail == 1 and len(s.runs()) == 4 for s in scenarios)
    assert [vector_of(s) for s in scenarios] == list(itertools.product((0, 1), repeat=3))


def test_min_gap_two_slots():
    spec = EnumerationSpec({0, 1, 2}, 2, 1, (MinGap(2),))
    assert [vector_of(s) for s in enumerate_admissible(spec)] == [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0)]
    assert count_admissible(spec) == 5


def test_max_total_zero_is_quiet_only():
    spec = EnumerationSpec({0, 1, 2}, 4, 1, (MaxTotalEvents(0),))
    assert [vector_of(s) for s in enumerate_admissible(spec)] == [(0, 0, 0, 0)]


def test_binomial_count():
    spec = EnumerationSpec({0, 1}, 10, 1, (MaxTotalEvents(2),))
    assert count_admissible(spec) == 56 == sum(1 for _ in enumerate_admissible(spec))


def test_unconstrained_product_count():
    spec = EnumerationSpec({0, 1, 2, 3}, Fraction(6, 5), Fraction(1, 5))
    assert count_admissible(spec) == 4 ** 6


def test_quantum_as_decimal():
    spec = EnumerationSpec({0, 1}, "0.2", "0.04")
    assert spec.slots == 5
    s = next(enumerate_admissible(spec))
    assert s.runs()[0] == (0, Fraction(1, 25))


def test_empty_result_warns():
    spec = EnumerationSpec({0, 1}, 3, 1, (CustomPredicate(lambda e: False),))
    with pytest.warns(EmptyEnumerationWarning):
        assert list(enumerate_admissible(spec)) == []
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert count_admissible(spec) == 0


def test_custom_predicate():
    spec = EnumerationSpec({0, 1}, 3, 1, (CustomPredicate(lambda e: e.entries[0][1] == 1, "first"),))
    assert [vector_of(s) for s in enumerate_admissible(spec)] == [(1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)]
    assert count_admissible(spec) == 4


@pytest.mark.parametrize(
    "args",
    [
        ({1, 2}, 3, 1, ()),
        ({0, 1}, 3, 2, ()),
        ({0, 1}, 0, 1, ()),
        ({0, 1}, 3, 1, (MinGap(Fraction(1, 2)),)),
        ({0, 1}, 3, 1, (MaxTotalEvents(-1),)),
    ],
)
def test_invalid_specs(args):
    with pytest.raises(DomainError):
        EnumerationSpec(*args)


def test_shards_partition_the_stream_in_order():
    spec = EnumerationSpec({0, 1, 2}, 4, 1, (MaxEventsInWindow(2, 1),))
    whole = list(enumerate_vectors(spec))
    parts = [v for lead in shards(spec) for v in enumerate_vectors(spec, lead)]
    assert parts == whole
    assert sum(count_admissible(spec, lead) for lead in shards(spec)) == len(whole)


constraint_st = st.one_of(
    st.builds(MaxEventsInWindow, st.integers(1, 4).map(Fraction), st.integers(0, 3)),
    st.builds(MinGap, st.integers(1, 4).map(Fraction)),
    st.builds(MaxTotalEvents, st.integers(0, 4)),
)


@settings(max_examples=100, deadline=None)
@given(
    st.sets(st.integers(1, 3), max_size=3).map(lambda s: frozenset(s | {0})),
    st.integers(1, 6),
    st.lists(constraint_st, max_size=3),
)
def test_matches_brute_force(alphabet, n, constraints):
    spec = EnumerationSpec(alphabet, n, 1, tuple(constraints))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyEnumerationWarning)
        got = list(enumerate_vectors(spec))
    assert got == brute(alphabet, n, constraints)
    assert count_admissible(spec) == len(got)
    assert len(set(got)) == len(got)
    # extensions of each prefix are contiguous
    for k in range(1, n):
        seen, last = set(), None
        for v in got:
            if v[:k] != last:
                assert v[:k] not in seen
                seen.add(v[:k])
                last = v[:k]
