"""Command-line interface: scenarios, construction runs, map and machine
queries, poset tools, and certificate verification.

All output is machine-readable (CSV or JSON Lines). Exit codes: 0 every
certificate passed, 1 some check failed, 2 some check is incomplete (and none
failed), 3 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .construction import RequirementSchedule, run_construction
from .machine import Halted, decode, program_text, run
from .maps import CodedFamily
from .numerics import rat_parse
from .posets import FinitePoset, PaddedFiniteOrder, UniversalPoset, embed_finite
from .profiles import combined_family, constant_family, oscillating_family, poset_family
from .scenarios import (
    ScenarioConfig,
    report_exit_code,
    run_scenario,
    verify_transcript,
    write_report,
)

USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise UsageError(message)


def _rat(text: str) -> Fraction:
    try:
        return rat_parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("bad rational %r: %s" % (text, exc))


def _family_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", default="constant",
                        choices=["constant", "oscillating", "combined", "poset"])
    parser.add_argument("--count", type=int, default=4)
    parser.add_argument("--alpha", default="5/4")
    parser.add_argument("--beta", default="7/4")
    parser.add_argument("--matrix", default="",
                        help="comma-separated 0/1 rows for the poset kind")


def _build_family(args):
    alpha, beta = _rat(args.alpha), _rat(args.beta)
    if args.kind == "constant":
        return constant_family(args.count)
    if args.kind == "oscillating":
        return oscillating_family(alpha, beta)
    if args.kind == "combined":
        return combined_family(args.count, alpha, beta)
    rows = [row for row in args.matrix.split(",") if row]
    if not rows:
        raise UsageError("the poset kind needs --matrix")
    return poset_family(PaddedFiniteOrder(FinitePoset.from_rows(rows)), alpha, beta)


def _out_stream(path: str | None):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _cmd_blocks(args) -> int:
    family, _ = _build_family(args)
    coded = CodedFamily(family)
    indices = [int(s) for s in args.i.split(",")] if args.i else list(range(args.count))
    out = _out_stream(args.out)
    header = ["k", "a_k", "k_factorial"]
    for i in indices:
        header += ["ell_%d" % i, "b_%d" % i]
    out.write(",".join(header) + "\n")
    for k in range(args.kmax + 1):
        row = [str(k), str(coded.targets.endpoint(k)), str(coded.targets.size(k))]
        for i in indices:
            row += [str(coded.source(i).length(k)), str(coded.source(i).endpoint(k))]
        out.write(",".join(row) + "\n")
    if out is not sys.stdout:
        out.close()
    return 0


def _cmd_map(args) -> int:
    family, _ = _build_family(args)
    coded = CodedFamily(family)
    if args.action == "apply":
        print(coded.h_apply(args.i, args.x))
    elif args.action == "fibers":
        print(",".join(str(v) for v in coded.h_fibers(args.i, args.y)))
    elif args.action == "preimage":
        print(coded.least_preimage(args.i, args.y))
    elif args.action == "reduce":
        print(coded.positive_reduction(args.i, args.j, args.x))
    else:
        print(coded.collapse(args.x))
    return 0


def _cmd_machine(args) -> int:
    if args.action == "decode":
        print(program_text(decode(args.e)))
        return 0
    outcome = run(args.e, args.x, args.budget)
    if isinstance(outcome, Halted):
        print("halted,%d,%d" % (outcome.value, outcome.steps))
    else:
        print("out_of_budget,%d" % outcome.budget)
    return 0


def _cmd_poset(args) -> int:
    if args.action == "validate":
        rows = [row for row in args.matrix.split(",") if row]
        try:
            FinitePoset.from_rows(rows)
        except ValueError as exc:
            print("invalid: %s" % exc)
            return 1
        print("valid")
        return 0
    if args.action == "embed":
        rows = [row for row in args.matrix.split(",") if row]
        poset = FinitePoset.from_rows(rows)
        images = embed_finite(poset)
        print(",".join(str(m) for m in images))
        return 0
    universe = UniversalPoset()
    matrix = universe.matrix(args.size)
    for row in matrix:
        print("".join("1" if v else "0" for v in row))
    return 0


def _load_config(path: str) -> ScenarioConfig:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("cannot read config %s: %s" % (path, exc))
    try:
        return ScenarioConfig.from_json(payload)
    except ValueError as exc:
        raise UsageError("bad config: %s" % exc)


def _cmd_construct(args) -> int:
    config = _load_config(args.config)
    if config.kind == "universal":
        raise UsageError("universal scenarios run no construction")
    from .scenarios import build_family, required_stages

    family, cert = build_family(config)
    coded = CodedFamily(family)
    schedule = RequirementSchedule(cert)
    stages = args.stages or required_stages(config, cert, schedule)
    transcript, _ = run_construction(
        coded, cert, stages, config.budget, scenario=config.to_json(), schedule=schedule
    )
    transcript.write_jsonl(args.out)
    print("stages,%d" % len(transcript.records))
    return 0


def _cmd_verify(args) -> int:
    config = _load_config(args.config)
    certs = verify_transcript(config, args.transcript)
    write_report(certs, args.report)
    code = report_exit_code(certs)
    for cert in certs:
        print("%s,%s" % (cert.kind, cert.verdict))
    return code


def _cmd_scenario(args) -> int:
    rows = [row for row in (args.matrix or "").split(",") if row]
    try:
        config = ScenarioConfig(
            kind=args.scenario_kind,
            count=args.n if args.scenario_kind == "antichain" else args.count,
            alpha=_rat(args.alpha),
            beta=_rat(args.beta),
            poset_rows=rows,
            stages=args.stages,
            budget=args.budget,
            e_bound=args.E,
            k_max=args.kmax,
        )
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc))
    outdir = args.outdir or ("out-%s" % args.scenario_kind)
    result = run_scenario(config, outdir)
    for cert in result.certificates:
        print("%s,%s" % (cert.kind, cert.verdict))
    print("report,%s" % (Path(outdir) / "report.jsonl"))
    return result.exit_code


def build_parser() -> _Parser:
    parser = _Parser(prog="blockdensity", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("blocks", help="dump endpoint tables as CSV")
    _family_flags(p)
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--i", default="", help="comma-separated profile indices")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_blocks)

    p = sub.add_parser("map", help="apply coded maps")
    p.add_argument("action", choices=["apply", "fibers", "preimage", "reduce", "collapse"])
    _family_flags(p)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--x", type=int, default=0)
    p.add_argument("--y", type=int, default=0)
    p.set_defaults(fn=_cmd_map)

    p = sub.add_parser("machine", help="decode or run enumerated programs")
    p.add_argument("action", choices=["decode", "run"])
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--x", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**5)
    p.set_defaults(fn=_cmd_machine)

    p = sub.add_parser("poset", help="validate, embed, or dump the generic order")
    p.add_argument("action", choices=["validate", "embed", "dump-universal"])
    p.add_argument("--matrix", default="")
    p.add_argument("--size", type=int, default=20)
    p.set_defaults(fn=_cmd_poset)

    p = sub.add_parser("construct", help="run the stage construction from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stages", type=int, default=None)
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("verify", help="replay a transcript and write certificates")
    p.add_argument("--config", required=True)
    p.add_argument("--transcript", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("scenario", help="full pipeline: construct, certify, report")
    p.add_argument("scenario_kind", choices=["rationals", "antichain", "combined", "poset", "universal"])
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--n", type=int, default=3, help="profile count for antichain")
    p.add_argument("--alpha", default="5/4")
    p.add_argument("--beta", default="7/4")
    p.add_argument("--matrix", default="")
    p.add_argument("--stages", type=int, default=None)
    p.add_argument("--budget", type=int, default=10**5)
    p.add_argument("--E", type=int, default=50)
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--outdir", default=None)
    p.set_defaults(fn=_cmd_scenario)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
