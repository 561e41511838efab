"""Prefix tree of scenario run sequences and the checkpointing optimizer.

Scenarios that share a prefix of runs from the same initial state share a
path in the tree. Walking the tree depth-first and checkpointing every node
with two or more children simulates each edge exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .des import DesModel, Scenario, StateKey, Transition
from .engine import Campaign, Command, Free, Load, Run, SimulatorState, Store, step
from .errors import SynthesisError

Edge = tuple[Fraction, Fraction]


class Node:
    __slots__ = ("children", "terminals", "first", "depth", "ident", "ordinal", "parent", "edge")

    def __init__(self, first: int, depth: int, parent: Node | None = None, edge: Edge | None = None):
        self.children: dict[Edge, Node] = {}
        self.terminals: list[int] = []
        self.first = first  # smallest scenario index through this node
        self.depth = depth
        self.parent = parent
        self.edge = edge
        self.ident = -1  # preorder id over all nodes, roots included
        self.ordinal = 0  # 1-based position of this node's edge among RUNs

    def path(self) -> list[Edge]:
        out = []
        node = self
        while node.edge is not None:
            out.append(node.edge)
            node = node.parent
        return out[::-1]

    def subtree(self) -> Iterator[Node]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children.values()))


class PrefixTree:
    def __init__(self):
        self.roots: dict[StateKey, Node] = {}
        self.scenarios: list[Scenario] = []
        self.edge_count = 0

    @classmethod
    def build(cls, scenarios: Iterable[Scenario]) -> PrefixTree:
        tree = cls()
        for s in scenarios:
            tree.add(s)
        tree.number()
        return tree

    def add(self, s: Scenario) -> int:
        index = len(self.scenarios)
        self.scenarios.append(s)
        node = self.roots.get(s.initial_state)
        if node is None:
            node = self.roots[s.initial_state] = Node(index, 0)
        for edge in s.runs():
            child = node.children.get(edge)
            if child is None:
                child = node.children[edge] = Node(index, node.depth + 1, node, edge)
                self.edge_count += 1
            node = child
        node.terminals.append(index)
        return index

    def nodes(self) -> Iterator[Node]:
        for root in self.roots.values():
            yield from root.subtree()

    def number(self) -> None:
        ordinal = 0
        for ident, node in enumerate(self.nodes()):
            node.ident = ident
            if node.edge is not None:
                ordinal += 1
                node.ordinal = ordinal

    @property
    def depth(self) -> int:
        return max((n.depth for n in self.nodes()), default=0)

    def naive_run_count(self) -> int:
        return sum(len(s.runs()) for s in self.scenarios)

    def subsumed(self) -> set[int]:
        """Indices of scenarios whose runs are a proper prefix of another's, or repeats."""
        out = set()
        for node in self.nodes():
            if node.children:
                out.update(node.terminals)
            else:
                out.update(node.terminals[1:])
        return out


def default_memory(scenarios: Iterable[Scenario]) -> dict[str, StateKey]:
    """``init`` for the first initial state, ``root1``, ``root2``... for the rest."""
    memory: dict[str, StateKey] = {}
    for s in scenarios:
        if s.initial_state not in memory.values():
            label = "init" if not memory else f"root{len(memory)}"
            memory[label] = s.initial_state
    return memory


def root_labels(tree_roots: Iterable[StateKey], memory: Mapping[str, StateKey]) -> dict[StateKey, str]:
    by_state: dict[StateKey, str] = {}
    for label, key in memory.items():
        by_state.setdefault(key, label)
    missing = [r for r in tree_roots if r not in by_state]
    if missing:
        raise SynthesisError(
            f"{len(missing)} scenario initial state(s) are not in the initial memory"
        )
    return by_state


@dataclass
class WalkStats:
    runs: int = 0
    stores: int = 0
    loads: int = 0
    frees: int = 0
    peak_memory: int = 0


def walk(
    model: DesModel,
    roots: Iterable[tuple[StateKey, Node]],
    init_state: StateKey,
    init_memory: Mapping[str, StateKey],
    stats: WalkStats | None = None,
) -> Iterator[tuple[Command, Transition | None, Node | None]]:
    """Drive a simulator through the tree, yielding each command as it executes.

    RUN commands come with their transition and the tree node they reach.
    The simulator is stepped for real so that a branching node whose state
    is already in memory reuses that label instead of storing a duplicate.
    """
    roots = list(roots)
    labels = root_labels((r for r, _ in roots), init_memory)
    stats = stats if stats is not None else WalkStats()
    sim = SimulatorState(init_state, dict(init_memory))
    stats.peak_memory = max(stats.peak_memory, len(sim.memory))

    def apply(cmd):
        nonlocal sim
        sim, t = step(model, sim, cmd)
        stats.peak_memory = max(stats.peak_memory, len(sim.memory))
        return t

    for root_state, root in roots:
        label = labels[root_state]
        stack: list[tuple] = []
        for j, (edge, child) in enumerate(reversed(root.children.items())):
            stack.append(("visit", child, edge))
            if j < len(root.children) - 1:
                stack.append(("load", label))
        if root.children and sim.current != root_state:
            stack.append(("load", label))
        while stack:
            action = stack.pop()
            if action[0] == "load":
                cmd = Load(action[1])
                apply(cmd)
                stats.loads += 1
                yield cmd, None, None
            elif action[0] == "free":
                cmd = Free(action[1])
                apply(cmd)
                stats.frees += 1
                yield cmd, None, None
            else:
                _, node, (event, duration) = action
                cmd = Run(event, duration)
                t = apply(cmd)
                stats.runs += 1
                yield cmd, t, node
                kids = list(node.children.items())
                if len(kids) == 1:
                    stack.append(("visit", kids[0][1], kids[0][0]))
                elif kids:
                    owned = None
                    reuse = next((k for k, v in sim.memory.items() if v == sim.current), None)
                    if reuse is None:
                        owned = f"n{node.ident}"
                        cmd = Store(owned)
                        apply(cmd)
                        stats.stores += 1
                        yield cmd, None, None
                    slot = owned or reuse
                    actions = []
                    for i, (e, ch) in enumerate(kids):
                        if i:
                            actions.append(("load", slot))
                        actions.append(("visit", ch, e))
                    if owned:
                        actions.append(("free", owned))
                    stack.extend(reversed(actions))


def optimize_campaign(
    model: DesModel,
    scenarios: Iterable[Scenario],
    init_memory: Mapping[str, StateKey] | None = None,
    init_state: StateKey | None = None,
) -> Campaign:
    """Campaign simulating every prefix-tree edge exactly once."""
    campaign, _ = optimize_with_stats(model, scenarios, init_memory, init_state)
    return campaign


def optimize_with_stats(model, scenarios, init_memory=None, init_state=None):
    tree = PrefixTree.build(dict.fromkeys(scenarios))
    if not tree.scenarios:
        raise SynthesisError("cannot build a campaign from an empty scenario set")
    init_memory, init_state = _resolve_memory(tree.scenarios, init_memory, init_state)
    stats = WalkStats()
    cmds = [cmd for cmd, _, _ in walk(model, tree.roots.items(), init_state, init_memory, stats)]
    info = {
        "scenarios": len(tree.scenarios),
        "run_count": stats.runs,
        "store_count": stats.stores,
        "load_count": stats.loads,
        "free_count": stats.frees,
        "peak_memory": stats.peak_memory,
        "edges": tree.edge_count,
        "depth": tree.depth,
        "naive_run_count": tree.naive_run_count(),
        "saved_runs": tree.naive_run_count() - stats.runs,
    }
    return Campaign(init_state, init_memory, tuple(cmds)), info


def _resolve_memory(scenarios, init_memory, init_state):
    if init_memory is None:
        init_memory = default_memory(scenarios)
    init_memory = dict(init_memory)
    if init_state is None:
        init_state = init_memory.get("init", next(iter(init_memory.values()), None))
    if init_state is None:
        raise SynthesisError("no initial state")
    return init_memory, init_state
