"""Command line front end.

Usage::

    dofnet region   SPEC
    dofnet vertices SPEC
    dofnet maxsum   SPEC
    dofnet primes   SPEC
    dofnet check    SPEC --point 1/3,1/3,1/3,1/3
    dofnet plan     SPEC --point ... [--l 1] [--full] [--multi | --single]
    dofnet verify   SPEC --point ... [--l 1] [--seed 42] [--tolerance 1e-6] [--lo 0.5 --hi 2]

``--format machine`` prints a JSON document; every failure prints a
structured error naming the failing check.
"""

import argparse
import json
import sys

from . import demand, plan as planmod, region as regionmod, verify as verifymod
from .channels import HI, LO
from .errors import (DofError, EnumerationLimitError, OutOfRegionError, SpecError,
                     TauCapError)
from .rational import fmt_point, parse_point

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_OUT_OF_REGION = 3
EXIT_CAP = 4
EXIT_VERIFY_FAILED = 5

COMMANDS = ("region", "vertices", "maxsum", "primes", "check", "plan", "verify")
NEEDS_POINT = {"check", "plan", "verify"}


def build_parser():
    p = argparse.ArgumentParser(
        prog="dofnet",
        description="DoF region and interference alignment verification for "
                    "interference networks with general message demands.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", help="demand-spec JSON file ('-' for stdin)")
    p.add_argument("--point", help="comma separated rationals, e.g. 1/3,1/3,1/3,1/3")
    p.add_argument("--l", type=int, default=1, help="exponent range parameter (default 1)")
    p.add_argument("--seed", type=int, default=42)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--grouped", dest="grouped", action="store_true", default=True,
                       help="group-based alignment (default)")
    group.add_argument("--full", dest="grouped", action="store_false",
                       help="align at every receiver independently")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--multi", dest="multi", action="store_const", const=True, default=None,
                      help="multi-antenna scheme (default when M > 1)")
    mode.add_argument("--single", dest="multi", action="store_const", const=False,
                      help="single-antenna scheme (requires M = 1)")
    p.add_argument("--tolerance", type=float, default=verifymod.RANK_TOL,
                   help="rank margin tolerance (default 1e-6)")
    p.add_argument("--lo", type=float, default=LO, help="smallest entry magnitude (default 0.5)")
    p.add_argument("--hi", type=float, default=HI, help="largest entry magnitude (default 2)")
    p.add_argument("--tau-cap", type=int, default=planmod.DEFAULT_TAU_CAP)
    p.add_argument("--limit", type=int, default=regionmod.DEFAULT_ENUMERATION_LIMIT,
                   help="largest K for vertex enumeration")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    return p


def _validate(args):
    if args.command in NEEDS_POINT and args.point is None:
        raise SpecError(f"'{args.command}' requires --point")
    if args.command not in NEEDS_POINT and args.point is not None:
        raise SpecError(f"'{args.command}' does not take --point")
    if args.l < 1:
        raise SpecError(f"--l must be >= 1, got {args.l}")
    if not args.tolerance > 0:
        raise SpecError(f"--tolerance must be positive, got {args.tolerance}")


def _read_spec(path):
    if path == "-":
        return demand.parse_spec(sys.stdin.read())
    try:
        return demand.load_spec(path)
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc}") from None


def _point(args, spec):
    point = parse_point(args.point)
    if len(point) != spec.K:
        raise SpecError(f"point has {len(point)} components, expected K={spec.K}")
    return point


def _dispatch(args):
    spec = _read_spec(args.spec)
    reg = regionmod.expand_region(spec)
    cmd = args.command
    if cmd == "region":
        return EXIT_OK, reg.to_json()
    if cmd == "vertices":
        return EXIT_OK, regionmod.enumerate_vertices(reg, limit=args.limit).to_json()
    if cmd == "maxsum":
        return EXIT_OK, regionmod.max_sum_report(reg, limit=args.limit)
    if cmd == "primes":
        return EXIT_OK, demand.compute_grouping(spec).to_json()
    point = _point(args, spec)
    if cmd == "check":
        member = regionmod.contains(reg, point)
        doc = {"point": fmt_point(point), **member.to_json()}
        return (EXIT_OK if member.inside else EXIT_OUT_OF_REGION), doc
    if cmd == "plan":
        p = planmod.make_plan(spec, point, l=args.l, grouped=args.grouped, multi=args.multi,
                              tau_cap=args.tau_cap)
        return EXIT_OK, planmod.plan_report(p)
    report = verifymod.run_verification(
        spec, point, l=args.l, seed=args.seed, grouped=args.grouped, multi=args.multi,
        tol=args.tolerance, tau_cap=args.tau_cap, lo=args.lo, hi=args.hi)
    return (EXIT_OK if report.passed else EXIT_VERIFY_FAILED), report.to_json()


def _error_doc(exc):
    doc = {"check": exc.check, "message": str(exc)}
    if isinstance(exc, OutOfRegionError):
        doc["violated"] = [sorted(s) for s in exc.violations]
        doc["columnBudget"] = [{"receiver": j, "used": used, "available": avail}
                               for j, used, avail in exc.budget_violations]
    return {"error": doc}


def _exit_code(exc):
    if isinstance(exc, OutOfRegionError):
        return EXIT_OUT_OF_REGION
    if isinstance(exc, (TauCapError, EnumerationLimitError)):
        return EXIT_CAP
    if isinstance(exc, SpecError):
        return EXIT_VALIDATION
    return EXIT_VERIFY_FAILED


def _run(args):
    try:
        _validate(args)
        return _dispatch(args)
    except DofError as exc:
        return _exit_code(exc), _error_doc(exc)


def run_cli(argv):
    """Parse ``argv`` and run one command; returns ``(exit status, document)``."""
    return _run(build_parser().parse_args(argv))


def _human(cmd, doc):
    if "error" in doc:
        err = doc["error"]
        return f"error [{err['check']}]: {err['message']}"
    lines = []
    if cmd == "region":
        for q in doc["inequalities"]:
            terms = " + ".join(f"d{i}" for i in q["support"])
            lines.append(f"{terms} <= {q['bound']}    from {q['provenance']}")
    elif cmd == "vertices":
        lines += ["(" + ", ".join(v) + ")" for v in doc["vertices"]]
        lines.append(f"{doc['count']} vertices; {doc['candidates']} candidate bases, "
                     f"{doc['basicFeasible']} feasible; binomial bound {doc['candidateBound']}")
    elif cmd == "maxsum":
        lines.append(f"max sum DoF = {doc['total']} at ({', '.join(doc['argmax'])})")
    elif cmd == "primes":
        for g in range(1, doc["G"] + 1):
            members = [j for j, gg in doc["assignment"].items() if gg == g]
            lines.append(f"group {g}: set {doc['maximalSets'][g - 1]}, prime receiver "
                         f"{doc['primes'][str(g)]}, receivers {', '.join(members)}")
    elif cmd == "check":
        lines.append(("inside" if doc["inside"] else "outside") + " the DoF region")
        lines.append(f"tight: {doc['tight']}")
        lines.append(f"violated: {doc['violated']}")
    elif cmd == "plan":
        for key in ("mode", "kappa", "dbar", "tau", "Gamma", "GammaK", "GammaM", "GammaMq",
                    "GammaMkq", "columnCounts", "dofFractions", "constraints"):
            if key in doc:
                lines.append(f"{key}: {doc[key]}")
    else:
        v = doc["verdict"]
        lines.append(f"mode {doc['mode']}, l={doc['l']}, seed={doc['seed']}")
        for key in ("symbolic", "alignment", "txRank", "rxSeparation", "diagonal"):
            lines.append(f"  {key:13s} {'pass' if v[key] else 'FAIL'}")
        for pre in v["preconditions"]:
            lines.append(f"  precondition failed at receiver {pre['receiver']}: {pre['detail']}")
        lines.append(f"dof fractions: {', '.join(doc['dofFractions'])}")
        lines.append("overall: " + ("PASS" if v["overall"] else "FAIL"))
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    status, doc = _run(args)
    if args.format == "machine":
        print(json.dumps(doc, indent=2))
    else:
        out = sys.stderr if "error" in doc else sys.stdout
        print(_human(args.command, doc), file=out)
    return status


if __name__ == "__main__":
    sys.exit(main())
