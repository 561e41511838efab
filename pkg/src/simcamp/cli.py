"""Command-line front end: ``simcamp <verb> ...``.

Exit codes: 0 success or PASS, 1 FAIL (or campaigns not equivalent),
2 usage or input-format error, 3 numeric or model error.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import algebra
from .engine import execute
from .enumeration import EmptyEnumerationWarning, count_admissible, enumerate_admissible
from .errors import FormatError, NumericsError, PropertyError, SimcampError
from .formats import (
    format_campaign,
    format_scenarios,
    format_verdict,
    parse_campaign,
    parse_property,
    parse_scenarios,
    parse_spec,
)
from .prefix import optimize_with_stats
from .verify import verify

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_MODEL = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def cmd_run(args) -> int:
    model, c, _ = parse_campaign(_read(args.campaign))
    rec = execute(model, c)
    sys.stdout.write(rec.transitions.dump())
    if args.states:
        for j, sim in enumerate(rec.states):
            print(f"STATE {j} {model.format_state(sim.current)}")
    return EXIT_PASS


def cmd_normalize(args) -> int:
    model, c, name = parse_campaign(_read(args.campaign))
    sys.stdout.write(format_campaign(model, algebra.normalize(model, c), name))
    return EXIT_PASS


def cmd_equiv(args) -> int:
    m1, c1, _ = parse_campaign(_read(args.first))
    m2, c2, _ = parse_campaign(_read(args.second))
    if m1.model_id != m2.model_id:
        raise FormatError("the campaigns use different models")
    t1, t2 = algebra.campaign_transitions(m1, c1), algebra.campaign_transitions(m2, c2)
    same = t1 == t2
    print("equivalent" if same else "not equivalent")
    print(f"transitions {len(t1)} {len(t2)}")
    if not same:
        a, b = set(t1), set(t2)
        print(f"only in first {len(a - b)}")
        print(f"only in second {len(b - a)}")
    return EXIT_PASS if same else EXIT_FAIL


def cmd_extract(args) -> int:
    model, c, _ = parse_campaign(_read(args.campaign))
    sys.stdout.write(format_scenarios(model, algebra.extract_scenarios(model, c)))
    return EXIT_PASS


def _scenario_input(path: str):
    model, scenarios, _ = parse_scenarios(_read(path))
    if not scenarios:
        raise FormatError("the scenario file is empty")
    return model, scenarios


def cmd_synthesize(args) -> int:
    model, scenarios = _scenario_input(args.scenarios)
    memory = None
    if args.expand:
        root = scenarios[0].initial_state
        scenarios = algebra.expand_scenarios(model, scenarios, [root])
        memory = {"init": root}
    c = algebra.synthesize_campaign(model, scenarios, memory)
    sys.stdout.write(format_campaign(model, c, "synthesized"))
    return EXIT_PASS


def cmd_optimize(args) -> int:
    model, scenarios = _scenario_input(args.scenarios)
    memory = None
    if args.expand:
        root = scenarios[0].initial_state
        scenarios = algebra.expand_scenarios(model, scenarios, [root])
        memory = {"init": root}
    c, info = optimize_with_stats(model, scenarios, memory)
    sys.stdout.write(format_campaign(model, c, "optimized"))
    if args.stats:
        for key in ("scenarios", "naive_run_count", "run_count", "saved_runs", "store_count",
                    "load_count", "free_count", "peak_memory", "depth"):
            print(f"# {key} {info[key]}")
    return EXIT_PASS


def cmd_enumerate(args) -> int:
    model, spec = parse_spec(_read(args.spec))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EmptyEnumerationWarning)
        if args.count:
            n = count_admissible(spec)
            print(n)
            if n == 0:
                print("warning: no admissible disturbance sequence", file=sys.stderr)
            return EXIT_PASS
        sys.stdout.write(format_scenarios(model, enumerate_admissible(spec)))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_PASS


def cmd_verify(args) -> int:
    model, spec = parse_spec(_read(args.spec))
    prop = parse_property(_read(args.prop))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyEnumerationWarning)
        v = verify(model, spec, prop, args.mode, args.exhaustive, args.jobs, args.stats)
    sys.stdout.write(format_verdict(model, v))
    return EXIT_PASS if v.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simcamp", description="Simulation campaigns over discrete event systems.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("run", help="execute a campaign and print its transition set")
    s.add_argument("campaign")
    s.add_argument("--states", action="store_true", help="also print the current state after every command")
    s.set_defaults(fn=cmd_run)

    s = sub.add_parser("normalize", help="rewrite a campaign with LOAD and RUN only")
    s.add_argument("campaign")
    s.set_defaults(fn=cmd_normalize)

    s = sub.add_parser("equiv", help="compare the transition sets of two campaigns")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(fn=cmd_equiv)

    s = sub.add_parser("extract", help="scenarios covering a campaign's transitions")
    s.add_argument("campaign")
    s.set_defaults(fn=cmd_extract)

    for verb, fn, text in (("synthesize", cmd_synthesize, "normal-form campaign for a scenario file"),
                           ("optimize", cmd_optimize, "prefix-sharing campaign for a scenario file")):
        s = sub.add_parser(verb, help=text)
        s.add_argument("scenarios")
        s.add_argument("--expand", action="store_true",
                       help="re-root every scenario onto the first scenario's initial state")
        if verb == "optimize":
            s.add_argument("--stats", action="store_true", help="append run/memory statistics")
        s.set_defaults(fn=fn)

    s = sub.add_parser("enumerate", help="list admissible disturbance scenarios")
    s.add_argument("spec")
    s.add_argument("--count", action="store_true", help="print only the number of scenarios")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("verify", help="check a safety property over all admissible scenarios")
    s.add_argument("spec")
    s.add_argument("--prop", required=True)
    s.add_argument("--mode", choices=("naive", "optimized"), default="optimized")
    s.add_argument("--exhaustive", action="store_true", help="collect every violation")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--stats", action="store_true", help="report run counts for both modes")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except (FormatError, PropertyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except SimcampError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
