"""Shared oracles and random generators.

The counter oracle evaluates the modular formula directly on integers and
never calls into the library's transition code, so agreement with the engine
is independent evidence.
"""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from simcamp import Campaign, EventList, Free, Load, Run, Scenario, Store, trace
from simcamp.models import counter

TAU = Fraction(1)


def counter_phi(n: int, k: int, p: int, duration: Fraction, step: Fraction = TAU) -> int:
    ticks = duration / step
    assert ticks.denominator == 1
    return (k + p + int(ticks)) % n


def oracle_trace(n: int, x0: int, runs, step: Fraction = TAU):
    """Integer transitions (source, event, duration, target) for a run sequence."""
    out, k = [], x0
    for p, d in runs:
        nxt = counter_phi(n, k, int(p), Fraction(d), step)
        out.append((k, Fraction(p), Fraction(d), nxt))
        k = nxt
    return out


def oracle_campaign(n: int, x0: int, commands):
    """Execute a campaign over integer states; returns the transition set."""
    cur, mem, seen = x0, {"init": x0}, set()
    for cmd in commands:
        if isinstance(cmd, Run):
            nxt = counter_phi(n, cur, int(cmd.event), cmd.duration)
            seen.add((cur, cmd.event, cmd.duration, nxt))
            cur = nxt
        elif isinstance(cmd, Load):
            cur = mem[cmd.label]
        elif isinstance(cmd, Store):
            mem[cmd.label] = cur
        elif isinstance(cmd, Free):
            del mem[cmd.label]
    return seen


def as_ints(model, transitions):
    return {(model.decode(t.source), t.event, t.duration, model.decode(t.target)) for t in transitions}


def random_campaign(rng: random.Random, n: int, max_len: int = 30, alphabet=(0, 1, 2)) -> Campaign:
    """A valid campaign: LOAD/FREE only bound labels, STORE only fresh states."""
    x0 = rng.randrange(n)
    cur, mem = x0, {"init": x0}
    cmds, fresh = [], 0
    for _ in range(rng.randint(0, max_len)):
        r = rng.random()
        if r < 0.55:
            p, d = rng.choice(alphabet), rng.randint(1, 3)
            cmds.append(Run(p, d))
            cur = counter_phi(n, cur, p, Fraction(d))
        elif r < 0.75:
            label = rng.choice(sorted(mem))
            cmds.append(Load(label))
            cur = mem[label]
        elif r < 0.9:
            if cur in mem.values():
                continue
            fresh += 1
            label = f"s{fresh}"
            cmds.append(Store(label))
            mem[label] = cur
        else:
            label = rng.choice(sorted(mem))
            cmds.append(Free(label))
            del mem[label]
            if not mem:
                break
    model = counter(n)
    return Campaign(model.encode(x0), {"init": model.encode(x0)}, tuple(cmds))


def random_scenarios(rng: random.Random, n: int, max_count: int = 8, max_len: int = 6, roots=None):
    """Scenario sets built to share prefixes often."""
    model = counter(n)
    roots = roots or [rng.randrange(n) for _ in range(rng.randint(1, 2))]
    out = []
    for _ in range(rng.randint(1, max_count)):
        if out and rng.random() < 0.5:
            base = rng.choice(out)
            keep = rng.randint(0, len(base.runs()) - 1)
            runs = base.runs()[:keep]
            x0 = base.initial_state
        else:
            runs, x0 = [], model.encode(rng.choice(roots))
        for _ in range(rng.randint(1, max_len - len(runs)) if len(runs) < max_len else 0):
            runs.append((Fraction(rng.choice((0, 1, 2))), Fraction(rng.randint(1, 2))))
        out.append(Scenario.from_runs(x0, runs))
    return model, out


@pytest.fixture
def c7():
    return counter(7)


@pytest.fixture
def spread():
    return EventList(0, ((3, 2), (2, 3), (5, 1), (3, 2)))


# the four-scenario campaign used throughout the worked example -------------

CHECKPOINT_RUNS = {
    "trunk": [0, 1, 1],
    "left": [1, 1, 1],
    "right": [0, 0, 1],
    "other": [1, 0, 2, 1, 0, 2],
}


def checkpoint_campaign(model, x0: bytes, d) -> Campaign:
    """The hand-written 19-command campaign with one stored checkpoint."""
    d = Fraction(d)

    def runs(name):
        return [Run(p, d) for p in CHECKPOINT_RUNS[name]]

    cmds = (
        runs("trunk") + [Store("mid")] + runs("left") + [Load("mid")] + runs("right")
        + [Free("mid"), Load("init")] + runs("other")
    )
    return Campaign(x0, {"init": x0}, tuple(cmds))


def checkpoint_scenarios(model, x0: bytes, d):
    """The four scenarios; the middle two start from the checkpointed state."""
    d = Fraction(d)
    first = Scenario.from_runs(x0, [(p, d) for p in CHECKPOINT_RUNS["trunk"]])
    xm = trace(model, first)[-1].target
    return [
        first,
        Scenario.from_runs(xm, [(p, d) for p in CHECKPOINT_RUNS["left"]]),
        Scenario.from_runs(xm, [(p, d) for p in CHECKPOINT_RUNS["right"]]),
        Scenario.from_runs(x0, [(p, d) for p in CHECKPOINT_RUNS["other"]]),
    ]


# acceptance reporting: one line per criterion in the terminal summary -------

_REPORT: list[str] = []


@pytest.fixture
def report():
    def emit(criterion, ok: bool, detail: str):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        _REPORT.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)
