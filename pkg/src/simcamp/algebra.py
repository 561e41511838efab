"""Campaign transition sets, equivalence, normal form, extraction and synthesis."""
from __future__ import annotations

from typing import Iterable, Mapping

from .des import DesModel, Scenario, StateKey, TransitionSet, trace
from .engine import Campaign, Free, Load, Run, Store, execute, run_count
from .errors import NormalizeError, SynthesisError
from .prefix import PrefixTree, _resolve_memory, optimize_campaign, root_labels

__all__ = [
    "campaign_transitions",
    "equivalent",
    "expand_scenarios",
    "extract_scenarios",
    "is_normal",
    "normalize",
    "optimize_campaign",
    "run_count",
    "synthesize_campaign",
]


def campaign_transitions(model: DesModel, c: Campaign) -> TransitionSet:
    return execute(model, c).transitions


def equivalent(model: DesModel, c1: Campaign, c2: Campaign) -> bool:
    return campaign_transitions(model, c1) == campaign_transitions(model, c2)


def is_normal(c: Campaign) -> bool:
    return all(isinstance(cmd, (Load, Run)) for cmd in c.commands)


def normalize(model: DesModel, c: Campaign) -> Campaign:
    """Equivalent campaign made of LOAD and RUN only.

    Each stored label is tracked symbolically as (initial-memory label, run
    path). A LOAD of a stored label becomes a LOAD of that initial label
    followed by a replay of the path; STORE and FREE are dropped.
    """
    execute(model, c)  # surfaces memory/label/step errors with their index
    init_label = next((k for k, v in c.init_memory.items() if v == c.init_state), None)
    paths: dict[str, tuple[str | None, tuple]] = {k: (k, ()) for k in c.init_memory}
    cur: tuple[str | None, tuple] = (init_label, ())
    out = []
    for j, cmd in enumerate(c.commands):
        match cmd:
            case Run():
                cur = (cur[0], cur[1] + (cmd,))
                out.append(cmd)
            case Store(label):
                paths[label] = cur
            case Free(label):
                del paths[label]
            case Load(label):
                root, path = paths[label]
                if root is None:
                    raise NormalizeError(
                        f"command {j}: {label!r} was not reached from an initial-memory state"
                    )
                out.append(Load(root))
                out.extend(path)
                cur = (root, path)
    return Campaign(c.init_state, c.init_memory, tuple(out))


def extract_scenarios(model: DesModel, c: Campaign, normalize_first: bool = True) -> list[Scenario]:
    """Scenarios whose transition sets union to the campaign's.

    The (normalized) command stream is cut at every LOAD and STORE; each
    maximal block of RUNs becomes one scenario starting from the state
    current at the start of the block.
    """
    if normalize_first:
        c = normalize(model, c)
    rec = execute(model, c)
    out: dict[Scenario, None] = {}
    root = c.init_state
    block: list[tuple] = []

    def close():
        if block:
            out.setdefault(Scenario.from_runs(root, block), None)

    for j, cmd in enumerate(c.commands):
        if isinstance(cmd, (Load, Store)):
            close()
            block = []
            root = rec.states[j + 1].current
        elif isinstance(cmd, Run):
            block.append((cmd.event, cmd.duration))
    close()
    return list(out)


def synthesize_campaign(
    model: DesModel,
    scenarios: Iterable[Scenario],
    init_memory: Mapping[str, StateKey] | None = None,
    init_state: StateKey | None = None,
) -> Campaign:
    """Normal-form campaign: one LOAD of the initial state per scenario, then its runs.

    Repeated scenarios and scenarios whose runs are a proper prefix of
    another scenario from the same state add no transitions and are dropped.
    Without ``init_memory`` every distinct initial state is registered
    (``init``, ``root1``, ...).
    """
    tree = PrefixTree.build(dict.fromkeys(scenarios))
    if not tree.scenarios:
        raise SynthesisError("cannot build a campaign from an empty scenario set")
    init_memory, init_state = _resolve_memory(tree.scenarios, init_memory, init_state)
    labels = root_labels(tree.roots, init_memory)
    skip = tree.subsumed()
    cmds = []
    for i, s in enumerate(tree.scenarios):
        if i in skip:
            continue
        cmds.append(Load(labels[s.initial_state]))
        cmds.extend(Run(p, d) for p, d in s.runs())
    return Campaign(init_state, init_memory, tuple(cmds))


def expand_scenarios(
    model: DesModel, scenarios: Iterable[Scenario], roots: Iterable[StateKey]
) -> list[Scenario]:
    """Re-root scenarios onto ``roots`` by prepending a run path that reaches them.

    A scenario starting at a state visited by the trace of an already rooted
    scenario gets that trace's prefix prepended. Raises SynthesisError when
    some initial state cannot be reached this way.
    """
    roots = set(roots)
    scenarios = list(scenarios)
    result: list[Scenario | None] = [s if s.initial_state in roots else None for s in scenarios]
    reach: dict[StateKey, tuple[StateKey, list]] = {}

    def learn(s: Scenario):
        runs = []
        for t in trace(model, s):
            runs.append((t.event, t.duration))
            reach.setdefault(t.target, (s.initial_state, list(runs)))

    for s in result:
        if s is not None:
            learn(s)
    progress = True
    while progress:
        progress = False
        for i, s in enumerate(scenarios):
            if result[i] is None and s.initial_state in reach:
                root, prefix = reach[s.initial_state]
                result[i] = Scenario.from_runs(root, prefix + s.runs())
                learn(result[i])
                progress = True
    if any(s is None for s in result):
        raise SynthesisError("some scenario initial states are unreachable from the given roots")
    return result
