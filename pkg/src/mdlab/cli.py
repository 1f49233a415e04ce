"""Command-line front end: ``mdlab separation | verify | ratio``.

Exit codes: 0 success, 1 internal error or violated bound, 2 bad
configuration, 3 truthfulness violations found.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from itertools import islice
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from .harness import (
    RatioSummary,
    ValuationGrid,
    check_truthful,
    check_universally_truthful,
    query_growth_experiment,
    range_gap_demo,
    ratio_experiment,
    ratio_on_instance,
    write_records,
)
from .harness.experiments import ExperimentRecord, approximation_ratio, mechanism_bound
from .harness.truthfulness import MAX_TRIPLES
from .io import load_instance
from .mechanisms import (
    AffineMaximizerSpec,
    affine_maximizer,
    naive_vcg_mechanism,
    random_dictator_realizations,
    vcg,
)
from .valuations import enumerate_valuations

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_WITNESS = 0, 1, 2, 3
VERIFY_MECHANISMS = ("vcg", "affine", "random-dictator", "fptas-naive-vcg")

_POW = re.compile(r"^\s*2\^(\d+)\s*$")


def _count(text: str) -> int:
    match = _POW.match(text)
    value = 2 ** int(match.group(1)) if match else int(text)
    if value < 1:
        raise ValueError(f"item counts must be positive, got {value}")
    return value


def parse_m_list(text: str) -> list[int]:
    """Comma list of counts; ``a..b`` expands to the powers of two in ``[a, b]``."""
    out: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = (_count(x) for x in part.split("..", 1))
            p = 1
            while p <= hi:
                if p >= lo:
                    out.append(p)
                p *= 2
        else:
            out.append(_count(part))
    if not out:
        raise ValueError(f"empty m list: {text!r}")
    return out


def parse_eps(text: str) -> Fraction:
    num, _, den = text.partition("/")
    eps = Fraction(int(num), int(den) if den else 1)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return eps


def _arg(parser_fn):
    def convert(text):
        try:
            return parser_fn(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    convert.__name__ = parser_fn.__name__
    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sep = sub.add_parser("separation", help="query growth table and range-gap demo")
    sep.add_argument("--m", type=_arg(parse_m_list), required=True,
                     help="item counts, e.g. 2^10..2^20 or 4,8,16")
    sep.add_argument("--eps", type=_arg(parse_eps), default=Fraction(1))
    sep.add_argument("--seed", type=int)
    sep.add_argument("--vmax", type=int, default=10**6)
    sep.add_argument("--gap-range", help="comma list of allowed t for the range-gap block")
    sep.add_argument("--gap-m", type=int, help="m for the gap block when --m lists several")
    sep.add_argument("--H", type=int, default=10**6, help="spike height of the gap instance")
    sep.add_argument("--format", choices=("json", "csv"), default="json")
    sep.add_argument("--output")

    ver = sub.add_parser("verify", help="exhaustive or sampled truthfulness check")
    ver.add_argument("--mechanism", choices=VERIFY_MECHANISMS, required=True)
    ver.add_argument("--m", type=int, default=3)
    ver.add_argument("--vmax", type=int, default=2)
    ver.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--trials", type=int, default=1000)
    ver.add_argument("--eps", type=_arg(parse_eps), default=Fraction(1))
    ver.add_argument("--affine-spec", help="JSON affine spec; default is plain VCG")
    ver.add_argument("--max-witnesses", type=int, default=5,
                     help="witnesses printed in full (all are counted)")
    ver.add_argument("--output")

    rat = sub.add_parser("ratio", help="approximation ratios against brute force")
    rat.add_argument("--mechanism", choices=("random-dictator", "fptas"), required=True)
    rat.add_argument("--m", type=int, default=100)
    rat.add_argument("--eps", type=_arg(parse_eps), default=Fraction(1))
    rat.add_argument("--trials", type=int)
    rat.add_argument("--seed", type=int)
    rat.add_argument("--vmax", type=int, default=10**6)
    rat.add_argument("--instance", help="instance JSON file; overrides random trials")
    rat.add_argument("--format", choices=("json", "csv"), default="json")
    rat.add_argument("--records", action="store_true", help="also emit per-instance records")
    rat.add_argument("--output")
    return parser


@contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MDLAB_THREADS", "1")))
    except ValueError:
        return 1


def cmd_separation(args, parser) -> int:
    gap_range = None
    if args.gap_range is not None:
        try:
            gap_range = [int(x) for x in args.gap_range.split(",") if x.strip()]
        except ValueError:
            parser.error(f"bad --gap-range {args.gap_range!r}")
    if args.seed is None and gap_range is None:
        parser.error("--seed is required for the query-growth experiment")
    gap_m = args.gap_m
    if gap_range is not None and gap_m is None:
        if len(args.m) != 1:
            parser.error("--gap-m is required when --m lists several counts")
        gap_m = args.m[0]

    records = []
    if args.seed is not None:
        records = query_growth_experiment(args.m, args.eps, args.seed, args.vmax)
    gap = None
    if gap_range is not None:
        try:
            gap = range_gap_demo(AffineMaximizerSpec(tuple(gap_range)), gap_m, args.H)
        except ValueError as exc:
            parser.error(str(exc))

    with _open_out(args.output) as out:
        if records:
            write_records(records, args.format, out)
        if gap is not None:
            block = {"range": gap_range, "H": args.H, **gap.to_dict()}
            if args.format == "json":
                out.write(json.dumps({"gap": block}) + "\n")
            else:
                if records:
                    out.write("\n")
                out.write("range,m,missing_t,H,mir_welfare,opt_welfare\n")
                out.write(
                    f"{' '.join(map(str, gap_range))},{block['m']},{block['missing_t']},"
                    f"{args.H},{block['mir_welfare']},{block['opt_welfare']}\n"
                )
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    if args.mode == "sampled" and args.seed is None:
        parser.error("--seed is required in sampled mode")
    if args.m < 1 or args.vmax < 0:
        parser.error("--m must be positive and --vmax non-negative")
    grid = ValuationGrid(args.m, args.vmax)
    kwargs = {"seed": args.seed, "trials": args.trials} if args.mode == "sampled" else {}
    if args.mode == "exhaustive":
        # count lazily so an oversized grid is rejected without materialising it
        cap = round(MAX_TRIPLES ** (1 / 3)) + 1
        n = sum(1 for _ in islice(enumerate_valuations(args.m, args.vmax), cap + 1))
        if n**3 > MAX_TRIPLES:
            parser.error(f"grid m={args.m}, vmax={args.vmax} is too large for exhaustive mode; use --mode sampled")
    if args.mechanism == "random-dictator":
        witnesses = check_universally_truthful(
            random_dictator_realizations(), grid, args.mode, **kwargs
        )
    else:
        if args.mechanism == "vcg":
            mechanism = vcg
        elif args.mechanism == "affine":
            if args.affine_spec:
                try:
                    spec = AffineMaximizerSpec.from_dict(
                        json.loads(Path(args.affine_spec).read_text())
                    )
                except (OSError, ValueError, KeyError, TypeError) as exc:
                    parser.error(f"cannot load affine spec: {exc}")
                if spec.range[-1] > args.m:
                    parser.error(f"affine range entry {spec.range[-1]} exceeds m={args.m}")
            else:
                spec = AffineMaximizerSpec.full(args.m)

            def mechanism(v1, v2):
                return affine_maximizer(spec, v1, v2)
        else:
            mechanism = naive_vcg_mechanism(args.eps)
        witnesses = check_truthful(mechanism, grid, args.mode, **kwargs)

    report = {
        "mechanism": args.mechanism,
        "m": args.m,
        "vmax": args.vmax,
        "mode": args.mode,
        "eps": f"{args.eps.numerator}/{args.eps.denominator}",
        "truthful": not witnesses,
        "witness_count": len(witnesses),
        "witnesses": [w.to_dict() for w in witnesses[: args.max_witnesses]],
    }
    with _open_out(args.output) as out:
        out.write(json.dumps(report) + "\n")
    return EXIT_WITNESS if witnesses else EXIT_OK


def cmd_ratio(args, parser) -> int:
    bound = mechanism_bound(args.mechanism, args.eps)
    if args.instance:
        try:
            v1, v2 = load_instance(args.instance)
        except (OSError, ValueError, KeyError) as exc:
            parser.error(f"cannot load instance: {exc}")
        achieved, opt, queries = ratio_on_instance(args.mechanism, v1, v2, args.eps)
        record = ExperimentRecord(
            v1.m, args.eps, None, args.mechanism, queries, achieved, opt,
            approximation_ratio(opt, achieved),
        )
        records = [record]
        summary = RatioSummary.from_records(args.mechanism, records, bound)
    else:
        trials = 100 if args.trials is None else args.trials
        if trials < 0:
            parser.error("--trials must be non-negative")
        if trials > 0 and args.seed is None:
            parser.error("--seed is required for random trials")
        summary, records = ratio_experiment(
            args.mechanism, trials, args.m, args.vmax, args.seed, args.eps, n_jobs=_threads()
        )
    with _open_out(args.output) as out:
        if args.records:
            write_records(records, args.format, out)
        out.write(json.dumps(summary.to_dict()) + "\n")
    return EXIT_OK if summary.within_bound else EXIT_ERROR


COMMANDS = {"separation": cmd_separation, "verify": cmd_verify, "ratio": cmd_ratio}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, parser)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"mdlab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
