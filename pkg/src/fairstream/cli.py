"""Command-line driver.

Subcommands: `run` an algorithm over an instance (file or generator) and emit
trace + per-step fairness report CSVs, `generate` seeded instances,
`adversary` runs an adaptive lower-bound stream against an algorithm,
`reduce` rounds an interval instance to its 2-value proxy, `verify` runs the
acceptance test suite.

Exit codes: 0 success, 1 bad input or configuration (malformed instance files
report the offending line), 2 guarantee-check failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .adversaries import ef1_adversary, mms_adversary
from .baselines import GreedyWelfare, RoundRobin
from .deferred_priority import DeferredPriority, DeferredPriorityAuditor
from .driver import run_online, trace_csv_rows
from .generators import (DEFAULT_PROFILE_POOL, interval_random, lows_then_highs,
                         random_two_value, staircase)
from .jsonl import InstanceFormatError, read_instance, write_instance
from .matching import (NaiveMatching, NaiveMatchingAuditor, PriorityMatching,
                       PriorityMatchingAuditor)
from .metrics import ReportBuilder, report_csv_rows
from .model import Instance

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_GUARANTEE = 2

ALGORITHMS = {
    "deferred-priority": DeferredPriority,
    "naive-matching": NaiveMatching,
    "priority-matching": PriorityMatching,
    "round-robin": RoundRobin,
    "greedy-welfare": GreedyWelfare,
}

AUDITORS = {
    "deferred-priority": lambda inst: DeferredPriorityAuditor(inst, share_bounds=True),
    "naive-matching": NaiveMatchingAuditor,
    "priority-matching": PriorityMatchingAuditor,
}


@dataclasses.dataclass
class RunConfig:
    algorithm: str
    instance: Instance
    granularity: str = "step"  # step | round | final
    assert_guarantees: bool = False
    trace_out: str | None = None
    report_out: str | None = None


def make_algorithm(name: str):
    try:
        return ALGORITHMS[name]()
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}")


def _parse_profiles(text: str):
    pairs = []
    for part in text.split(","):
        a, _, b = part.partition(":")
        pairs.append((float(a) if "." in a else int(a), float(b) if "." in b else int(b)))
    return pairs


def _load_or_generate(args) -> Instance:
    if getattr(args, "instance", None):
        inst = read_instance(args.instance)
    else:
        inst = _generate_from_args(args)
    if getattr(args, "foresight", None) is not None:
        inst = inst.with_foresight(args.foresight)
    return inst


def _generate_from_args(args) -> Instance:
    kind = args.gen
    if kind is None:
        raise ValueError("provide --instance FILE or --gen KIND")
    if kind == "random-2value":
        profiles = _parse_profiles(args.profiles) if args.profiles else None
        return random_two_value(args.n, args.m, args.seed, bias=args.bias,
                                profiles=profiles, foresight=args.foresight or 0)
    if kind == "staircase":
        return staircase(args.n, alpha=int(args.alpha) if args.alpha else None)
    if kind == "lows-then-highs":
        return lows_then_highs(args.n, alpha=int(args.alpha) if args.alpha else args.n)
    if kind == "interval-random":
        alphas = [float(a) for a in args.alpha.split(",")] if args.alpha else None
        if alphas is not None and len(alphas) == 1:
            alphas = alphas * args.n
        return interval_random(args.n, args.m, args.seed, alphas=alphas,
                               foresight=args.foresight or 0)
    raise ValueError(f"unknown generator {kind!r}")


def cmd_run(args) -> int:
    inst = _load_or_generate(args)
    alg = make_algorithm(args.alg)
    auditors = []
    if args.assert_guarantees:
        factory = AUDITORS.get(args.alg)
        if factory is not None:
            auditors.append(factory(inst))

    builder = ReportBuilder(inst)
    reports = []
    n = inst.n

    class _Reporter:
        def observe(self, state, good, agent, extras):
            builder.observe(good, agent)
            t = state.t
            if args.granularity == "step" or \
               (args.granularity == "round" and t % n == 0) or \
               (args.granularity == "final" and t == inst.m):
                reports.append(builder.report())

    trace = run_online(alg, inst, auditors=auditors + [_Reporter()])

    if args.trace_out:
        Path(args.trace_out).write_text(
            "\n".join(trace_csv_rows(trace, alg.trace_columns)) + "\n")
    rows = report_csv_rows(reports)
    if args.report_out:
        Path(args.report_out).write_text("\n".join(rows) + "\n")
    else:
        for row in rows:
            print(row)

    violations = []
    for aud in auditors:
        violations.extend(aud.finish())
    if violations:
        for v in violations[:20]:
            print(f"guarantee violated: {v}", file=sys.stderr)
        print(f"{len(violations)} violation(s) total", file=sys.stderr)
        return EXIT_GUARANTEE
    return EXIT_OK


def cmd_generate(args) -> int:
    inst = _generate_from_args(args)
    if args.out:
        write_instance(inst, args.out)
    else:
        from .jsonl import dumps_instance
        sys.stdout.write(dumps_instance(inst))
    return EXIT_OK


def _fraction_json(fr):
    if isinstance(fr, Fraction):
        return {"num": fr.numerator, "den": fr.denominator, "float": float(fr)}
    return fr


def cmd_adversary(args) -> int:
    alg = make_algorithm(args.alg)
    if args.kind == "ef1-2":
        trace = ef1_adversary(alg)
    elif args.kind == "mms":
        trace = mms_adversary(alg, args.n)
    elif args.kind == "known":
        inst = lows_then_highs(args.n, alpha=int(args.alpha) if args.alpha else args.n)
        if args.out_instance:
            write_instance(inst, args.out_instance)
        from .adversaries import worst_step_share_ratio
        ratio = worst_step_share_ratio(make_algorithm(args.alg), inst)
        print(json.dumps({"kind": "known", "alg": args.alg, "n": args.n,
                          "min_step_mms_ratio": _fraction_json(ratio)}))
        return EXIT_OK
    else:
        raise ValueError(f"unknown adversary kind {args.kind!r}")
    w = trace.witness
    payload = {
        "kind": trace.kind,
        "alg": args.alg,
        "n": trace.instance.n,
        "witness": {"step": w.step, "agent": w.agent, "metric": w.metric,
                    "ratio": _fraction_json(w.ratio), "bound": _fraction_json(w.bound)},
        "choices": trace.choices,
        "notes": {k: str(v) for k, v in trace.notes.items()},
    }
    print(json.dumps(payload))
    if args.out_instance:
        write_instance(trace.instance, args.out_instance)
    return EXIT_OK


def cmd_reduce(args) -> int:
    from .reduction import sidecar, threshold_round

    inst = read_instance(args.infile)
    pair = threshold_round(inst)
    write_instance(pair.proxy, args.out)
    meta = Path(args.out).with_suffix(".meta.json")
    meta.write_text(json.dumps(sidecar(pair), indent=2) + "\n")
    print(f"wrote {args.out} and {meta}")
    return EXIT_OK


def cmd_verify(args) -> int:
    tests = Path(args.tests) if args.tests else _find_acceptance()
    if tests is None or not tests.exists():
        print("acceptance suite not found; pass --tests PATH", file=sys.stderr)
        return EXIT_INPUT
    proc = subprocess.run([sys.executable, "-m", "pytest", str(tests), "-v", "-s"])
    return EXIT_OK if proc.returncode == 0 else EXIT_GUARANTEE


def _find_acceptance():
    here = Path(__file__).resolve()
    for parent in here.parents:
        cand = parent / "tests" / "test_acceptance.py"
        if cand.exists():
            return cand
    return None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fairstream",
                                description="online fair division testbed")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_gen_opts(sp):
        sp.add_argument("--gen", choices=["random-2value", "staircase",
                                          "lows-then-highs", "interval-random"])
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--m", type=int, default=20)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bias", type=float, default=0.3)
        sp.add_argument("--alpha", help="alpha (or comma list) for generators")
        sp.add_argument("--profiles",
                        help="comma list alpha:beta, e.g. '5:1,2:1,1:1,1:0'")

    run = sub.add_parser("run", help="stream an instance through an algorithm")
    run.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    run.add_argument("--instance", help="instance JSONL file")
    add_gen_opts(run)
    run.add_argument("--foresight", type=int, default=None,
                     help="override the instance's lookahead length")
    run.add_argument("--granularity", choices=["step", "round", "final"], default="step")
    run.add_argument("--assert-guarantees", action="store_true")
    run.add_argument("--trace-out")
    run.add_argument("--report-out")
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("generate", help="write a seeded instance file")
    add_gen_opts(gen)
    gen.add_argument("--foresight", type=int, default=None)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_generate)

    adv = sub.add_parser("adversary", help="run a lower-bound adversary")
    adv.add_argument("--kind", required=True, choices=["ef1-2", "mms", "known"])
    adv.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    adv.add_argument("--n", type=int, default=2)
    adv.add_argument("--alpha")
    adv.add_argument("--out-instance", help="write the emitted stream as JSONL")
    adv.set_defaults(func=cmd_adversary)

    red = sub.add_parser("reduce", help="round an interval instance to 2-value")
    red.add_argument("--in", dest="infile", required=True)
    red.add_argument("--out", required=True)
    red.set_defaults(func=cmd_reduce)

    ver = sub.add_parser("verify", help="run the acceptance suite")
    ver.add_argument("--tests")
    ver.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as e:
        print(f"malformed instance: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
