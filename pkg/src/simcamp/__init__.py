"""Simulation campaigns over discrete event systems.

A campaign is a program of LOAD/STORE/FREE/RUN commands for a simulator with
state memory. This package executes campaigns exactly, compares them by the
transitions they explore, rewrites them (normal form, scenario extraction,
synthesis, prefix-sharing optimization) and uses them to check safety
properties over every admissible disturbance sequence of a bounded horizon.
"""
from .algebra import (
    campaign_transitions,
    equivalent,
    expand_scenarios,
    extract_scenarios,
    is_normal,
    normalize,
    synthesize_campaign,
)
from .des import DesModel, Scenario, Transition, TransitionSet, scenario_transitions, trace, transition_set
from .engine import Campaign, ExecutionRecord, Free, Load, Run, SimulatorState, Store, execute, run_count, step
from .enumeration import (
    CustomPredicate,
    EmptyEnumerationWarning,
    EnumerationSpec,
    MaxEventsInWindow,
    MaxTotalEvents,
    MinGap,
    count_admissible,
    enumerate_admissible,
)
from .errors import *  # noqa: F401,F403
from .events import EventList, concat, event_list_from_impulses, horizon, impulses_from_event_list, restrict
from .models import CartPoleDes, CounterDes, PendulumDes, model_from_id
from .prefix import PrefixTree, optimize_campaign, optimize_with_stats
from .verify import Clause, SafetyProperty, Verdict, replay_counterexample, verify

__version__ = "0.1.0"
