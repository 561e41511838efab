"""Line-oriented text formats for scenarios, campaigns, enumeration specs and properties.

Blank lines and lines starting with ``#`` are ignored everywhere.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .des import DesModel, Scenario
from .engine import INIT_LABEL, Campaign, Free, Load, Run, Store
from .enumeration import EnumerationSpec, MaxEventsInWindow, MaxTotalEvents, MinGap
from .errors import FormatError, SimcampError
from .events import EventList
from .exact import exact, fmt
from .models.registry import model_from_id
from .verify import Clause, SafetyProperty, Verdict


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def _num(token: str, lineno: int) -> Fraction:
    try:
        return exact(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {lineno}: bad number {token!r}") from None


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {lineno}: bad integer {token!r}") from None


def _state(model: DesModel | None, literal: str, lineno: int) -> bytes:
    if model is None:
        raise FormatError(f"line {lineno}: state given before the model line")
    try:
        return model.parse_state(literal)
    except SimcampError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def _model(tokens, lineno) -> DesModel:
    if len(tokens) != 2:
        raise FormatError(f"line {lineno}: expected 'model <id>'")
    return model_from_id(tokens[1])


# scenarios -----------------------------------------------------------------


def parse_scenarios(text: str, model: DesModel | None = None) -> tuple[DesModel, list[Scenario], list[str]]:
    scenarios, names = [], []
    current = None

    def close():
        if current is None:
            return
        name, init, tail, initial, entries, lineno = current
        if init is None or tail is None:
            raise FormatError(f"scenario {name!r} (line {lineno}) needs init and tail lines")
        try:
            scenarios.append(Scenario(init, EventList(initial, tuple(entries)), tail))
        except SimcampError as exc:
            raise FormatError(f"scenario {name!r}: {exc}") from None
        names.append(name)

    for lineno, tok in _lines(text):
        key = tok[0]
        if key == "model" and current is None and not scenarios:
            model = _model(tok, lineno)
        elif key == "scenario":
            close()
            current = [tok[1] if len(tok) > 1 else f"s{len(scenarios)}", None, None, Fraction(0), [], lineno]
        elif current is None:
            raise FormatError(f"line {lineno}: {key!r} outside a scenario block")
        elif key == "init" and len(tok) == 2:
            current[1] = _state(model, tok[1], lineno)
        elif key == "tail" and len(tok) == 2:
            current[2] = _num(tok[1], lineno)
        elif key == "event" and len(tok) == 3:
            gap, value = _num(tok[1], lineno), _num(tok[2], lineno)
            if gap == 0:
                if current[4] or current[3] != 0:
                    raise FormatError(f"line {lineno}: only the first event may have gap 0")
                current[3] = value
            else:
                current[4].append((gap, value))
        else:
            raise FormatError(f"line {lineno}: unrecognised line {' '.join(tok)!r}")
    close()
    if model is None:
        raise FormatError("no model line")
    return model, scenarios, names


def format_scenario(model: DesModel, s: Scenario, name: str) -> str:
    lines = [f"scenario {name}", f"init {model.format_state(s.initial_state)}", f"tail {fmt(s.tail)}"]
    if s.events.initial_event != 0:
        lines.append(f"event 0 {fmt(s.events.initial_event)}")
    lines.extend(f"event {fmt(g)} {fmt(e)}" for g, e in s.events.entries)
    return "\n".join(lines) + "\n"


def format_scenarios(model: DesModel, scenarios: Iterable[Scenario], names=None) -> str:
    out = [f"model {model.model_id}\n"]
    for i, s in enumerate(scenarios):
        out.append(format_scenario(model, s, names[i] if names else f"s{i}"))
    return "".join(out)


# campaigns -----------------------------------------------------------------


def parse_campaign(text: str) -> tuple[DesModel, Campaign, str]:
    name, model, init = "campaign", None, None
    memory: dict[str, bytes] = {}
    commands = []
    for lineno, tok in _lines(text):
        key = tok[0]
        try:
            if key == "campaign":
                name = tok[1] if len(tok) > 1 else name
            elif key == "model":
                model = _model(tok, lineno)
            elif key == "init" and len(tok) == 2:
                init = _state(model, tok[1], lineno)
                memory[INIT_LABEL] = init
            elif key == "memory" and len(tok) == 3:
                memory[tok[1]] = _state(model, tok[2], lineno)
            elif key == "RUN" and len(tok) == 3:
                commands.append(Run(_num(tok[1], lineno), _num(tok[2], lineno)))
            elif key in ("LOAD", "STORE", "FREE") and len(tok) == 2:
                commands.append({"LOAD": Load, "STORE": Store, "FREE": Free}[key](tok[1]))
            else:
                raise FormatError(f"line {lineno}: unrecognised line {' '.join(tok)!r}")
        except IndexError:
            raise FormatError(f"line {lineno}: missing argument") from None
    if model is None or init is None:
        raise FormatError("a campaign needs model and init lines")
    return model, Campaign(init, memory, tuple(commands)), name


def format_campaign(model: DesModel, c: Campaign, name: str = "campaign") -> str:
    lines = [f"campaign {name}", f"model {model.model_id}"]
    if c.init_memory.get(INIT_LABEL, c.init_state) != c.init_state:
        raise FormatError("the 'init' label must hold the campaign's initial state")
    lines.append(f"init {model.format_state(c.init_state)}")
    for label, key in c.init_memory.items():
        if label != INIT_LABEL:
            lines.append(f"memory {label} {model.format_state(key)}")
    lines.extend(str(cmd) for cmd in c.commands)
    return "\n".join(lines) + "\n"


# enumeration specs ----------------------------------------------------------


def parse_spec(text: str) -> tuple[DesModel, EnumerationSpec]:
    model = init = alphabet = horizon = quantum = None
    constraints = []
    for lineno, tok in _lines(text):
        key = tok[0]
        if key == "model":
            model = _model(tok, lineno)
        elif key == "init" and len(tok) == 2:
            init = _state(model, tok[1], lineno)
        elif key == "alphabet" and len(tok) > 1:
            alphabet = [_num(t, lineno) for t in tok[1:]]
        elif key == "horizon" and len(tok) == 2:
            horizon = _num(tok[1], lineno)
        elif key == "quantum" and len(tok) == 2:
            quantum = _num(tok[1], lineno)
        elif key == "constraint" and len(tok) >= 3:
            kind, args = tok[1], tok[2:]
            if kind == "max_in_window" and len(args) == 2:
                constraints.append(MaxEventsInWindow(_num(args[0], lineno), _int(args[1], lineno)))
            elif kind == "min_gap" and len(args) == 1:
                constraints.append(MinGap(_num(args[0], lineno)))
            elif kind == "max_total" and len(args) == 1:
                constraints.append(MaxTotalEvents(_int(args[0], lineno)))
            else:
                raise FormatError(f"line {lineno}: bad constraint {' '.join(tok)!r}")
        else:
            raise FormatError(f"line {lineno}: unrecognised line {' '.join(tok)!r}")
    missing = [n for n, v in (("model", model), ("init", init), ("alphabet", alphabet),
                              ("horizon", horizon), ("quantum", quantum)) if v is None]
    if missing:
        raise FormatError(f"spec is missing: {', '.join(missing)}")
    try:
        spec = EnumerationSpec(frozenset(alphabet), horizon, quantum, tuple(constraints), init, model.model_id)
    except SimcampError as exc:
        raise FormatError(str(exc)) from None
    if not spec.alphabet <= model.alphabet:
        raise FormatError("spec alphabet is not a subset of the model's alphabet")
    return model, spec


# properties ----------------------------------------------------------------


def parse_property(text: str) -> SafetyProperty:
    name, combine, clauses = "property", "all", []
    for lineno, tok in _lines(text):
        key = tok[0]
        if key == "name" and len(tok) == 2:
            name = tok[1]
        elif key == "combine" and len(tok) == 2 and tok[1] in ("all", "any"):
            combine = tok[1]
        elif key == "clause" and len(tok) == 4 and tok[2] == "abs_le":
            clauses.append(Clause(_int(tok[1], lineno), "abs_le", _num(tok[3], lineno)))
        elif key == "clause" and len(tok) == 5 and tok[2] == "in":
            clauses.append(Clause(_int(tok[1], lineno), "in", _num(tok[3], lineno), _num(tok[4], lineno)))
        else:
            raise FormatError(f"line {lineno}: unrecognised line {' '.join(tok)!r}")
    if not clauses:
        raise FormatError("a property needs at least one clause")
    return SafetyProperty(tuple(clauses), combine, name)


# verdicts ------------------------------------------------------------------


def format_verdict(model: DesModel, v: Verdict) -> str:
    """Deterministic report; identical for any number of worker processes."""
    lines = [f"property {v.prop.name}", f"mode {v.mode}"]
    if v.passed:
        lines.append("verdict PASS")
        lines.append(f"scenarios {v.scenarios}")
        lines.append(f"transitions checked {v.checked}")
    else:
        cx = v.counterexample
        t = cx.transition
        lines.append("verdict FAIL")
        lines.append(f"counterexample index {cx.index}")
        lines.append(format_scenario(model, cx.scenario, f"cx{cx.index}").rstrip("\n"))
        lines.append(f"step {cx.step}")
        lines.append(
            f"transition {model.format_state(t.source)} {fmt(t.event)} {fmt(t.duration)} "
            f"{model.format_state(t.target)}"
        )
        lines.append("output " + " ".join(repr(float(y)) for y in cx.output))
        lines.append(f"violates {cx.clause}")
        lines.append(f"position run {cx.position}")
    if v.violations:
        lines.append(f"violations {len(v.violations)}")
        lines.extend(f"violation {x.index} {x.step} {x.clause}" for x in v.violations)
    if v.stats:
        lines.append(f"naive run_count {v.stats['naive_runs']}")
        lines.append(f"optimized run_count {v.stats['optimized_runs']}")
    return "\n".join(lines) + "\n"
