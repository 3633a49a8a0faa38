"""Command-line front end.

    mapda construct mn-pda --users 4 --t 2
    mapda validate ex1.pda --antennas 3
    mapda plan ex1.pda --demands 1,2,3,4 --files 4
    mapda simulate ex1.pda --antennas 3 --demands 1,2,3,4 --channel cauchy
    mapda audit lift.p --antennas 3 --trace lift
    mapda compare --users 100 --antennas 7 --t 5 --m 5
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings

from . import __version__
from .array import ArrayError, AuditError, read_array, validate_mapda, validate_pda, write_array, star_audit
from .compare import compare_subpacketization, sweep_csv
from .constructions import (
    ConstructionError,
    LiftAuditError,
    LiftParams,
    LiftTrace,
    audit_lift,
    latin_mapda,
    latin_square,
    lift_regular_pda,
    mn_mapda,
    mn_pda,
)
from .miso import KINDS, MODES, ChannelError, DecodeError, PrecoderError, simulate
from .scheme import PlanError, place, plan_delivery, verify_plan

TRACE_SUFFIXES = ("q0", "p1", "u", "u0", "p2", "p")


def _demands(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad demand list {text!r}; expected d1,d2,...")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mapda", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an array and print it in PDA text format")
    c.add_argument("kind", choices=["mn-pda", "latin", "latin-mapda", "lift", "mn-mapda"])
    c.add_argument("--users", type=int, help="K (mn-pda, latin-mapda) or K1 (mn-mapda)")
    c.add_argument("--t", type=int, help="t (mn-pda) or t1 (mn-mapda)")
    c.add_argument("--order", type=int, help="Latin square order")
    c.add_argument("--antennas", type=int, help="L")
    c.add_argument("--m", type=int, help="horizontal replicas for lift / mn-mapda")
    c.add_argument("--input", help="regular PDA file to lift")
    c.add_argument("--trace", metavar="PREFIX",
                   help="also write lift stages to PREFIX.q0, .p1, .u, .u0, .p2, .p")
    c.add_argument("--output", help="write to this file instead of stdout")

    v = sub.add_parser("validate", help="check a PDA, or an MAPDA when --antennas is given")
    v.add_argument("file")
    v.add_argument("--antennas", type=int)

    p = sub.add_parser("plan", help="print the delivery plan for a demand vector")
    p.add_argument("file")
    p.add_argument("--demands", type=_demands, required=True)
    p.add_argument("--files", type=int, help="library size N (default: max demand)")
    p.add_argument("--antennas", type=int, help="also check interference sets against L")

    s = sub.add_parser("simulate", help="simulate zero-forcing delivery and check decoding")
    s.add_argument("file")
    s.add_argument("--antennas", type=int, required=True)
    s.add_argument("--demands", type=_demands, required=True)
    s.add_argument("--files", type=int)
    s.add_argument("--channel", choices=KINDS, default="cauchy")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=MODES, default="exact")

    a = sub.add_parser("audit", help="star-counting bound audit (+ lift audit with --trace)")
    a.add_argument("file")
    a.add_argument("--antennas", type=int, required=True)
    a.add_argument("--trace", metavar="PREFIX", help="read lift stages PREFIX.p1/.p2/.q0")

    m = sub.add_parser("compare", help="subpacketization of schemes reaching sum-DoF t+L")
    m.add_argument("--users", type=int, required=True)
    m.add_argument("--antennas", type=int, required=True)
    m.add_argument("--t", type=int)
    m.add_argument("--m", type=int)
    m.add_argument("--sweep-t", action="store_true", help="CSV over t = 1..K")
    return ap


def _need(args, parser, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        parser.error(f"{args.kind} needs " + ", ".join("--" + n for n in missing))


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args, parser):
    trace = None
    if args.kind == "mn-pda":
        _need(args, parser, "users", "t")
        a = mn_pda(args.users, args.t)
    elif args.kind == "latin":
        _need(args, parser, "order")
        a = latin_square(args.order)
    elif args.kind == "latin-mapda":
        _need(args, parser, "users", "antennas")
        a = latin_mapda(args.users, args.antennas)
    elif args.kind == "lift":
        _need(args, parser, "input", "m", "antennas")
        trace = lift_regular_pda(read_array(args.input), args.m, args.antennas)
        a = trace.p
    else:
        _need(args, parser, "users", "t", "m", "antennas")
        trace = mn_mapda(args.users, args.t, args.m, args.antennas)
        a = trace.p
    if args.trace:
        if trace is None:
            parser.error("--trace only applies to lift and mn-mapda")
        for suffix, stage in trace.stages().items():
            write_array(stage, f"{args.trace}.{suffix}")
    _emit(a.to_text(), args.output)
    return 0


def cmd_validate(args, parser):
    a = read_array(args.file)
    p = validate_pda(a) if args.antennas is None else validate_mapda(a, args.antennas)
    print(p)
    return 0


def cmd_plan(args, parser):
    a = read_array(args.file)
    if args.antennas is not None:
        validate_mapda(a, args.antennas)
    N = args.files or max(args.demands)
    plan = plan_delivery(a, args.demands, N)
    verify_plan(plan, place(a, N), args.antennas)
    sys.stdout.write(plan.to_text())
    return 0


def cmd_simulate(args, parser):
    a = read_array(args.file)
    report = simulate(a, args.antennas, args.demands, kind=args.channel, seed=args.seed,
                      N=args.files, mode=args.mode)
    sys.stdout.write(report.to_text())
    return 0


def _load_trace(prefix, L):
    stages = {}
    for suffix in TRACE_SUFFIXES:
        path = f"{prefix}.{suffix}"
        if os.path.exists(path):
            stages[suffix] = read_array(path)
    if "p" not in stages:
        raise FileNotFoundError(f"{prefix}.p not found")
    p1, p2, q0 = stages.get("p1"), stages.get("p2"), stages.get("q0")
    if p1 is not None and p2 is not None:
        g1 = validate_mapda(p1, L).g
        g2 = validate_mapda(p2, L).g
        if g1 is None or g2 is None:
            raise ArrayError("trace stages are not regular")
        m = L - g2
        g = g1 // m
    elif q0 is not None:
        m = L
        g = validate_mapda(q0, L).g // m
    else:
        raise FileNotFoundError(f"need {prefix}.p1 and {prefix}.p2, or {prefix}.q0")
    base = q0 if q0 is not None else stages["p"]
    K1 = base.K // m
    params = LiftParams(m=m, L=L, g=g, K1=K1, F1=base.F, Z1=int(base.star_counts()[0]),
                        S1=base.max_value)
    return LiftTrace(params=params, q=base, q0=base, p=stages["p"], p1=p1,
                     u=stages.get("u"), u0=stages.get("u0"), p2=p2)


def cmd_audit(args, parser):
    a = read_array(args.file)
    au = star_audit(a, args.antennas)
    print(f"n {au.n}")
    print(f"stars_used {au.stars_used} <= capacity {au.star_capacity}")
    print(f"S {au.S} >= lower_bound {au.s_lower_bound}")
    print(f"sum_dof {au.achieved_dof} <= bound {au.dof_bound}"
          f" ({'equality' if au.meets_bound else 'strict'})")
    status = 0
    if args.trace:
        report = audit_lift(_load_trace(args.trace, args.antennas), raise_on_failure=False)
        print(report.summary())
        status = 0 if report.passed else 1
    return status


def cmd_compare(args, parser):
    if args.sweep_t:
        sys.stdout.write(sweep_csv(args.users, args.antennas, args.m))
        return 0
    if args.t is None:
        parser.error("compare needs --t (or --sweep-t)")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = compare_subpacketization(args.users, args.antennas, args.t, args.m)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    for row in rows:
        print(row)
    return 0


COMMANDS = {
    "construct": cmd_construct,
    "validate": cmd_validate,
    "plan": cmd_plan,
    "simulate": cmd_simulate,
    "audit": cmd_audit,
    "compare": cmd_compare,
}

ERRORS = (ArrayError, AuditError, ConstructionError, LiftAuditError, PlanError,
          ChannelError, PrecoderError, DecodeError, FileNotFoundError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, parser)
    except ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
