"""Simulator states, the four simulator commands and campaign execution."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .des import DesModel, StateKey, Transition, TransitionSet
from .errors import LabelError, SimcampError, SimulatorMemoryError, StepError
from .exact import Number, exact, fmt

INIT_LABEL = "init"


@dataclass(frozen=True)
class Load:
    label: str

    def __str__(self):
        return f"LOAD {self.label}"


@dataclass(frozen=True)
class Store:
    label: str

    def __str__(self):
        return f"STORE {self.label}"


@dataclass(frozen=True)
class Free:
    label: str

    def __str__(self):
        return f"FREE {self.label}"


@dataclass(frozen=True)
class Run:
    event: Fraction
    duration: Fraction

    def __post_init__(self):
        object.__setattr__(self, "event", exact(self.event))
        object.__setattr__(self, "duration", exact(self.duration))

    def __str__(self):
        return f"RUN {fmt(self.event)} {fmt(self.duration)}"


Command = Union[Load, Store, Free, Run]


@dataclass(frozen=True)
class SimulatorState:
    """The pair (current state, memory). Memory maps labels to stored states."""

    current: StateKey
    memory: Mapping[str, StateKey] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, SimulatorState):
            return NotImplemented
        return self.current == other.current and dict(self.memory) == dict(other.memory)

    def __hash__(self):
        return hash((self.current, frozenset(self.memory.items())))


@dataclass(frozen=True)
class Campaign:
    init_state: StateKey
    init_memory: Mapping[str, StateKey]
    commands: tuple[Command, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "init_memory", dict(self.init_memory))
        object.__setattr__(self, "commands", tuple(self.commands))

    @classmethod
    def from_state(cls, x0: StateKey, commands: Sequence[Command] = ()) -> Campaign:
        """Campaign whose memory initially holds just ``x0`` under ``init``."""
        return cls(x0, {INIT_LABEL: x0}, tuple(commands))

    def __len__(self):
        return len(self.commands)


@dataclass
class ExecutionRecord:
    states: list[SimulatorState] = field(default_factory=list)
    transitions: TransitionSet = field(default_factory=TransitionSet)
    outputs: list[tuple[float, ...]] = field(default_factory=list)
    run_count: int = 0
    #: RUN transitions in execution order, repeats included
    runs: list[Transition] = field(default_factory=list)

    def dump(self) -> str:
        return self.transitions.dump()


def new_simulator(model: DesModel, x0: StateKey) -> SimulatorState:
    model.decode(x0)
    return SimulatorState(x0, {INIT_LABEL: x0})


def step(
    model: DesModel, sim: SimulatorState, cmd: Command
) -> tuple[SimulatorState, Transition | None]:
    """Apply one command to ``sim``; RUN commands also return their transition."""
    match cmd:
        case Load(label):
            if label not in sim.memory:
                raise SimulatorMemoryError(f"LOAD of unbound label {label!r}")
            return SimulatorState(sim.memory[label], sim.memory), None
        case Free(label):
            if label not in sim.memory:
                raise SimulatorMemoryError(f"FREE of unbound label {label!r}")
            memory = {k: v for k, v in sim.memory.items() if k != label}
            return SimulatorState(sim.current, memory), None
        case Store(label):
            bound = sim.memory.get(label)
            if bound is not None and bound != sim.current:
                raise LabelError(f"label {label!r} is already bound to a different state")
            for other, key in sim.memory.items():
                if other != label and key == sim.current:
                    raise LabelError(
                        f"current state is already stored as {other!r}; reuse that label"
                    )
            return SimulatorState(sim.current, {**sim.memory, label: sim.current}), None
        case Run(event, duration):
            if duration <= 0:
                raise StepError("RUN duration must be positive")
            target = model.phi(duration, sim.current, event)
            t = Transition(sim.current, event, duration, target)
            return SimulatorState(target, sim.memory), t
    raise TypeError(f"not a simulator command: {cmd!r}")


def execute(model: DesModel, c: Campaign) -> ExecutionRecord:
    """Fold :func:`step` over the campaign, recording every simulator state.

    The first failing command aborts execution; the raised error carries the
    command ``index`` and the partial ``record``.
    """
    sim = SimulatorState(c.init_state, dict(c.init_memory))
    rec = ExecutionRecord(states=[sim], outputs=[model.output(sim.current)])
    for j, cmd in enumerate(c.commands):
        try:
            sim, t = step(model, sim, cmd)
        except SimcampError as exc:
            exc.index = j
            exc.record = rec
            exc.args = (f"command {j} ({cmd}): {exc.args[0] if exc.args else exc}",)
            raise
        if t is not None:
            rec.run_count += 1
            rec.runs.append(t)
            rec.transitions.add(t)
        rec.states.append(sim)
        rec.outputs.append(model.output(sim.current))
    return rec


def run_count(c: Campaign) -> int:
    return sum(isinstance(cmd, Run) for cmd in c.commands)


