import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simcamp import (
    Campaign,
    CartPoleDes,
    Free,
    Load,
    NormalizeError,
    Run,
    Scenario,
    Store,
    SynthesisError,
    campaign_transitions,
    equivalent,
    execute,
    expand_scenarios,
    extract_scenarios,
    is_normal,
    normalize,
    optimize_campaign,
    optimize_with_stats,
    run_count,
    scenario_transitions,
    synthesize_campaign,
    trace,
)
from simcamp.models import counter

from conftest import (
    as_ints,
    checkpoint_campaign,
    checkpoint_scenarios,
    oracle_campaign,
    oracle_trace,
    random_campaign,
    random_scenarios,
)

D = Fraction(1, 25)


def brute_union(model, scenarios):
    """Per-scenario oracle simulation, unioned."""
    out = set()
    for s in scenarios:
        out |= set(oracle_trace(model.modulus, model.decode(s.initial_state), s.runs(), model.base_step))
    return out


def edge_oracle(scenarios):
    return len({(s.initial_state, tuple(s.runs()[:k])) for s in scenarios for k in range(1, len(s.runs()) + 1)})


@pytest.fixture
def cart():
    m = CartPoleDes()
    return m, m.parse_state("0,0,0.05,0,0")


# worked example ----------------------------------------------------------------


def test_transition_sets_of_small_campaigns(c7):
    c = Campaign.from_state(c7.encode(0), (Run(1, 1),))
    assert as_ints(c7, campaign_transitions(c7, c)) == {(0, 1, 1, 2)}
    assert len(campaign_transitions(c7, Campaign.from_state(c7.encode(0), ()))) == 0


def test_normal_form_of_worked_example(cart):
    m, x0 = cart
    hand = checkpoint_campaign(m, x0, D)
    norm = normalize(m, hand)
    assert is_normal(norm) and not is_normal(hand)
    assert run_count(norm) == 18
    assert sum(isinstance(c, Load) for c in norm.commands) == 2
    assert equivalent(m, hand, norm)
    assert len(campaign_transitions(m, norm)) == 15
    assert normalize(m, norm) == norm


def test_equivalence_is_sensitive_to_events():
    c7 = counter(100)
    hand = checkpoint_campaign(c7, c7.encode(0), 1)
    changed = list(hand.commands)
    changed[0] = Run(2, 1)
    other = Campaign(hand.init_state, hand.init_memory, tuple(changed))
    assert not equivalent(c7, hand, other)
    padded = hand.commands[:2] + (Store("pad"), Free("pad")) + hand.commands[2:]
    assert equivalent(c7, hand, Campaign(hand.init_state, hand.init_memory, padded))


def test_extraction_of_worked_example(cart):
    m, x0 = cart
    hand = checkpoint_campaign(m, x0, D)
    scenarios = extract_scenarios(m, hand)
    assert len(scenarios) == 3  # normal form re-roots the checkpointed runs at the initial state
    assert scenario_transitions(m, scenarios) == campaign_transitions(m, hand)
    raw = extract_scenarios(m, hand, normalize_first=False)
    assert raw == checkpoint_scenarios(m, x0, D)


def test_single_run_extracts_single_scenario(c7):
    c = Campaign.from_state(c7.encode(0), (Run(2, 1),))
    assert extract_scenarios(c7, c) == [Scenario.from_runs(c7.encode(0), [(2, 1)])]


def test_synthesis_and_optimization_of_worked_example(cart):
    m, x0 = cart
    scenarios = expand_scenarios(m, checkpoint_scenarios(m, x0, D), [x0])
    hand = checkpoint_campaign(m, x0, D)
    synth = synthesize_campaign(m, scenarios, {"init": x0})
    opt = optimize_campaign(m, scenarios, {"init": x0})
    assert run_count(synth) == 18 and sum(isinstance(c, Load) for c in synth.commands) >= 2
    assert run_count(opt) == 15
    assert equivalent(m, synth, hand) and equivalent(m, opt, hand)
    expected = [str(c) for c in hand.commands]
    assert [str(c).replace("n3", "mid") for c in opt.commands] == expected


def test_synthesis_from_several_roots(c7):
    scenarios = checkpoint_scenarios(c7, c7.encode(0), 1)
    xm = scenarios[1].initial_state
    c = synthesize_campaign(c7, scenarios, {"init": c7.encode(0), "mid": xm})
    assert scenario_transitions(c7, scenarios) == campaign_transitions(c7, c)
    with pytest.raises(SynthesisError):
        synthesize_campaign(c7, scenarios, {"init": c7.encode(0)})


def test_singleton_synthesis(c7):
    s = Scenario.from_runs(c7.encode(2), [(1, 1), (0, 2)])
    c = synthesize_campaign(c7, [s])
    assert c.commands == (Load("init"), Run(1, 1), Run(0, 2))
    with pytest.raises(SynthesisError):
        synthesize_campaign(c7, [])


def test_disjoint_scenarios_gain_nothing(c7):
    x = c7.encode(0)
    scenarios = [Scenario.from_runs(x, [(p, 1), (0, 1)]) for p in (0, 1, 2)]
    assert run_count(optimize_campaign(c7, scenarios)) == run_count(synthesize_campaign(c7, scenarios)) == 6


def test_unreachable_root_cannot_be_expanded(c7):
    a = Scenario.from_runs(c7.encode(0), [(0, 1)])
    b = Scenario.from_runs(c7.encode(5), [(0, 1)])
    with pytest.raises(SynthesisError):
        expand_scenarios(c7, [a, b], [c7.encode(0)])


def test_normalize_needs_an_initial_memory_root(c7):
    c = Campaign(c7.encode(0), {"other": c7.encode(3)}, (Store("a"), Run(0, 1), Load("a")))
    with pytest.raises(NormalizeError):
        normalize(c7, c)


def test_optimizer_reuses_a_label_already_holding_the_branch_state(c7):
    # both branches start at the initial state itself, which is already stored as init
    x = c7.encode(0)
    scenarios = [Scenario.from_runs(x, [(0, 1), (p, 1)]) for p in (0, 1)]
    scenarios.append(Scenario.from_runs(x, [(0, 7), (2, 1)]))  # returns to 0 after a full cycle
    scenarios.append(Scenario.from_runs(x, [(0, 7), (1, 1)]))
    c = optimize_campaign(c7, scenarios)
    execute(c7, c)
    assert scenario_transitions(c7, scenarios) == campaign_transitions(c7, c)
    assert not any(isinstance(cmd, Store) for cmd in c.commands[c.commands.index(Run(0, 7)):][:2])


# properties ---------------------------------------------------------------------


@settings(max_examples=500, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 16))
def test_normalization_preserves_transitions(rng, n):
    m = counter(n)
    c = random_campaign(rng, n)
    norm = normalize(m, c)
    assert is_normal(norm)
    got = as_ints(m, campaign_transitions(m, norm))
    assert got == oracle_campaign(n, m.decode(c.init_state), c.commands)
    assert normalize(m, norm) == norm


@settings(max_examples=500, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 16))
def test_extraction_is_sound(rng, n):
    m = counter(n)
    c = random_campaign(rng, n)
    scenarios = extract_scenarios(m, c)
    assert brute_union(m, scenarios) == oracle_campaign(n, m.decode(c.init_state), c.commands)


@settings(max_examples=500, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 16))
def test_synthesis_and_optimization_are_complete(rng, n):
    m, scenarios = random_scenarios(rng, n)
    expected = brute_union(m, scenarios)
    synth = synthesize_campaign(m, scenarios)
    opt, info = optimize_with_stats(m, scenarios)
    assert as_ints(m, campaign_transitions(m, synth)) == expected
    assert as_ints(m, campaign_transitions(m, opt)) == expected
    assert equivalent(m, synth, opt)
    # each prefix-tree edge is simulated exactly once
    assert run_count(opt) == info["edges"] == edge_oracle(scenarios)
    kept = [s for s in dict.fromkeys(scenarios)
            if not any(o != s and o.initial_state == s.initial_state and o.runs()[: len(s.runs())] == s.runs()
                       for o in scenarios)]
    shared = any(a.initial_state == b.initial_state and a.runs()[0] == b.runs()[0]
                 for i, a in enumerate(kept) for b in kept[i + 1:])
    assert run_count(opt) <= run_count(synth)
    assert (run_count(opt) < run_count(synth)) == shared
    assert info["peak_memory"] - len(opt.init_memory) <= info["depth"]
    # round trip through extraction keeps the union
    assert brute_union(m, extract_scenarios(m, synth)) == expected


def test_random_multi_root_sets_with_expansion():
    rng = random.Random(3)
    for _ in range(100):
        m, scenarios = random_scenarios(rng, 9, roots=[0])
        first = scenarios[0]
        tr = trace(m, first)
        extra = Scenario.from_runs(tr[len(tr) // 2].target, [(2, 1), (1, 2)])
        expanded = expand_scenarios(m, scenarios + [extra], [first.initial_state])
        assert {s.initial_state for s in expanded} == {first.initial_state}
        assert scenario_transitions(m, scenarios + [extra]) <= scenario_transitions(m, expanded)
