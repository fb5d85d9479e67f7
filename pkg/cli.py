#!/usr/bin/env python3
"""
Command-line front door.

    compute  one invariant of one knot, printed as JSON
    verify   run a verification suite, JSON-lines report
    table    invariants of every knot in a census file, JSON lines

stdout carries JSON only; logs go to stderr.
Exit codes: 0 success, 1 parse/usage errors, 2 identity violations or failed checks.
"""

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv

import colored
from braid import (DEFAULT_KNOT_TABLE, BraidWord, KnotRecord, format_braid, load_knot_table,
                   resolve_knot)
from cache_service import get_cache_service
from errors import (BraidSyntaxError, GeneratorOutOfRange, IdentityViolated, LinksGouldError,
                    NotAKnot, ParseError, ValidationError)
from laurent import LaurentPoly
from rmatrices import lg_to_v2_vars, lg_to_v_vars, v2_vars_from_lg, v_vars_from_lg
from verification_service import SUITES, get_verification_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2

INVARIANTS = ("lg1", "lg2", "lg3", "v1", "v2")
INPUT_ERRORS = (BraidSyntaxError, GeneratorOutOfRange, NotAKnot, ParseError, ValidationError)


def _native(invariant: str, method: str, b: BraidWord, jobs: Optional[int],
            progress: bool) -> LaurentPoly:
    """Value in its own variables: (s, q) for lg*, (t, h) for v*"""
    if invariant == "lg1":
        return colored.lg1(b, jobs, progress)
    if invariant == "v1":
        return colored.v1(b, jobs, progress)
    if invariant in ("lg2", "lg3"):
        n = int(invariant[-1])
        if method == "cable":
            return colored.lg_via_cable(b, n, jobs, progress)
        return colored.lg_direct(b, n, jobs, progress)
    if method == "cable":
        return colored.v2_via_cable(b, jobs, progress)
    return v2_vars_from_lg(colored.lg2_direct(b, jobs, progress))


def _convert(invariant: str, value: LaurentPoly, vars_: str) -> LaurentPoly:
    if invariant.startswith("v") and vars_ == "lg":
        return lg_to_v_vars(value) if invariant == "v1" else lg_to_v2_vars(value)
    if invariant.startswith("lg") and vars_ == "v":
        if invariant == "lg1":
            return v_vars_from_lg(value)
        if invariant == "lg2":
            return v2_vars_from_lg(value)
        raise ValueError("no V-variables for lg3")
    return value


def _methods(invariant: str, method: str) -> List[str]:
    if invariant in ("lg1", "v1"):
        if method == "cable":
            raise ValueError(f"{invariant} has no cable route")
        return ["direct"]
    return ["direct", "cable"] if method == "both" else [method]


def cmd_compute(args) -> int:
    label, b = resolve_knot(args.knot, _records(args.knots) if args.knots else None)
    methods = _methods(args.invariant, args.method)
    if args.invariant == "lg3" and args.vars == "v":
        raise ValueError("lg3 has no V-variable form")
    cache = None if args.no_cache else get_cache_service()
    text = format_braid(b)

    values: Dict[str, LaurentPoly] = {}
    for method in methods:
        def compute(method=method):
            return _native(args.invariant, method, b, args.jobs, args.progress)
        if cache is None:
            values[method] = compute()
        else:
            values[method] = cache.get_or_compute(text, args.invariant, method, compute, args.force)

    if len(set(values.values())) > 1:
        difference = values["direct"] - values["cable"]
        raise IdentityViolated(f"direct and cable routes disagree on {label}", difference)

    value = _convert(args.invariant, values[methods[0]], args.vars)
    names = ("t", "h") if args.vars == "v" else ("s", "q")
    out = {
        "knot": label,
        "braid": text,
        "invariant": args.invariant,
        "method": args.method,
        "vars": args.vars,
        "poly": value.to_json(),
        "text": value.format(names),
    }
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def _records(path: str, max_crossings: Optional[int] = None) -> List[KnotRecord]:
    records = load_knot_table(path)
    if max_crossings is not None:
        records = [r for r in records if r.crossings <= max_crossings]
    return records


@contextmanager
def _output(path: Optional[str]):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as handle:
            yield handle


def cmd_verify(args) -> int:
    records = None
    if args.suite in ("all", "cabling", "census"):
        records = _records(args.knots, args.max_crossings)
    service = get_verification_service(args.jobs, args.progress)
    with _output(args.out) as out:
        _, failed = service.write_report(service.run(args.suite, records), out)
    return EXIT_OK if not failed else EXIT_FAILED


def _span(p: LaurentPoly) -> int:
    return p.span_s()


def table_row(record: KnotRecord, jobs: Optional[int],
              cached: Callable[[str, str, Callable[[], LaurentPoly]], LaurentPoly]) -> Dict:
    b = record.braid
    lg1 = cached("lg1", "direct", lambda: colored.lg1(b, jobs))
    lg2 = cached("lg2", "direct", lambda: colored.lg2_direct(b, jobs))
    v2 = v2_vars_from_lg(lg2)
    row = {
        "name": record.name,
        "braid": format_braid(b),
        "lg1": lg1.to_json(),
        "lg2": lg2.to_json(),
        "v2": v2.to_json(),
        "spans": {"lg1_s": _span(lg1), "lg2_s": _span(lg2), "v2_t": _span(v2)},
    }
    if record.genus is not None:
        row["genus"] = record.genus
        row["sharp"] = _span(v2) == 4 * record.genus
    return row


def cmd_table(args) -> int:
    records = _records(args.knots, args.max_crossings)
    cache = get_cache_service()
    written = 0
    with _output(args.out) as out:
        try:
            for record in records:
                text = format_braid(record.braid)

                def cached(invariant, method, compute, text=text):
                    return cache.get_or_compute(text, invariant, method, compute, args.force)

                logger.info(f"🔄 {record.name}")
                row = table_row(record, args.jobs, cached)
                out.write(json.dumps(row, sort_keys=True) + "\n")
                out.flush()
                written += 1
        except KeyboardInterrupt:
            logger.warning(f"⚠️ Interrupted after {written} of {len(records)} knots; partial table kept")
            return EXIT_USAGE
    logger.info(f"✅ Wrote {written} rows (cache hits {cache.hits}, misses {cache.misses})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lg", description="Links-Gould and V_n invariants of knots")
    parser.add_argument("--log-level", default=None, help="overrides LG_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--jobs", type=int, default=None, help="worker processes (LG_JOBS)")
        p.add_argument("--progress", action="store_true", help="show progress bars")

    compute = sub.add_parser("compute", help="compute one invariant")
    compute.add_argument("--knot", required=True, help="census name, alias or 'n | g1 g2 ...'")
    compute.add_argument("--invariant", choices=INVARIANTS, default="lg1")
    compute.add_argument("--method", choices=("direct", "cable", "both"), default="direct")
    compute.add_argument("--vars", choices=("lg", "v"), default=None)
    compute.add_argument("--knots", default=None, help="census file for name lookup")
    compute.add_argument("--force", action="store_true", help="ignore cached values")
    compute.add_argument("--no-cache", action="store_true")
    common(compute)
    compute.set_defaults(func=cmd_compute)

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    verify.add_argument("--knots", default=DEFAULT_KNOT_TABLE)
    verify.add_argument("--max-crossings", type=int, default=None)
    verify.add_argument("--out", default=None, help="report path, stdout by default")
    common(verify)
    verify.set_defaults(func=cmd_verify)

    table = sub.add_parser("table", help="census table of invariants")
    table.add_argument("--knots", default=DEFAULT_KNOT_TABLE)
    table.add_argument("--out", default=None)
    table.add_argument("--max-crossings", type=int, default=None)
    table.add_argument("--force", action="store_true")
    common(table)
    table.set_defaults(func=cmd_table)
    return parser


def _configure_logging(level: Optional[str]) -> None:
    level = (level or os.getenv("LG_LOG_LEVEL", "INFO")).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    if getattr(args, "vars", "unset") is None:
        args.vars = "v" if args.invariant.startswith("v") else "lg"

    try:
        return args.func(args)
    except IdentityViolated as e:
        logger.error(f"❌ {e}")
        print(json.dumps({"error": str(e), "difference": e.difference.to_json()
                          if isinstance(e.difference, LaurentPoly) else None}, sort_keys=True))
        return EXIT_FAILED
    except INPUT_ERRORS as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_USAGE
    except LinksGouldError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILED
    except (ValueError, OSError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
