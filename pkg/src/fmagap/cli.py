"""Command-line interface: build, search, extract, stats, validate."""
from __future__ import annotations

import argparse
import sys
import time

from .errors import FMAError
from .fma import FMIndex
from .image import load_index, save_index, size_report
from .ingest import from_variants, parse_alignment, read_variant_set
from .oracle import validate

OK, NO_MATCH, USAGE, DATA = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--align", metavar="FILE", help="alignment text file")
    p.add_argument("--ref", metavar="FILE", help="reference sequence (FASTA or raw)")
    p.add_argument("--variants", metavar="DIR", help="directory with one variant file per sample")


def _read_source(args):
    if args.align and (args.ref or args.variants):
        raise UsageError("give either --align or --ref/--variants, not both")
    if args.align:
        return parse_alignment(args.align)
    if args.ref and args.variants:
        return from_variants(read_variant_set(args.ref, args.variants))
    raise UsageError("an input is required: --align FILE or --ref FILE --variants DIR")


def cmd_build(args) -> int:
    if args.rate < 1:
        raise UsageError("--rate must be a positive integer")
    strings, seg = _read_source(args)
    t0 = time.perf_counter()
    fm = FMIndex.build(strings, seg, d=args.rate)
    save_index(fm, args.out)
    print(f"built {fm.entries} entries over {fm.m} strings in {time.perf_counter() - t0:.2f}s -> {args.out}",
          file=sys.stderr)
    return OK


def cmd_search(args) -> int:
    if not args.pattern:
        raise UsageError("empty pattern")
    fm = load_index(args.index)
    try:
        fm._check_pattern(args.pattern)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.count_only:
        n = fm.count(args.pattern)
        print(n)
        return OK if n else NO_MATCH
    hits = fm.locate(args.pattern)
    for occ in hits:
        print(f"{occ.string_id}\t{occ.position}")
    return OK if hits else NO_MATCH


def cmd_extract(args) -> int:
    fm = load_index(args.index)
    try:
        print(fm.extract(args.string, args.start, args.end))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return OK


def cmd_stats(args) -> int:
    fm = load_index(args.index)
    sizes = size_report(fm)
    rows = [("entries", fm.entries), ("strings", fm.m), ("columns", fm.n), ("sampling_rate", fm.d),
            ("core_bytes", sizes.core), ("gap_bytes", sizes.gap), ("sampling_bytes", sizes.sampling),
            ("total_bytes", sizes.total)]
    for key, value in rows:
        print(f"{key}\t{value}")
    return OK


def cmd_validate(args) -> int:
    fm = load_index(args.index)
    strings, _ = _read_source(args)
    if strings.m != fm.m:
        print(f"FAIL\tinput\tindex holds {fm.m} strings, input has {strings.m}")
        return DATA
    report = validate(fm, strings)
    print(report)
    return OK if report.ok else DATA


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fmagap", description="compressed pattern search over similar strings")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index image")
    _add_source(p)
    p.add_argument("--rate", type=int, default=32, help="sampling rate d (default 32)")
    p.add_argument("--out", required=True, metavar="INDEX")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("search", help="locate or count a pattern")
    p.add_argument("--index", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("extract", help="print a substring of one string")
    p.add_argument("--index", required=True)
    p.add_argument("--string", type=int, required=True, metavar="J")
    p.add_argument("--from", dest="start", type=int, required=True, metavar="S")
    p.add_argument("--to", dest="end", type=int, required=True, metavar="E")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="entry count and section sizes")
    p.add_argument("--index", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check an index against its source strings")
    p.add_argument("--index", required=True)
    _add_source(p)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fmagap: error: {exc}", file=sys.stderr)
        return USAGE
    except (FMAError, OSError) as exc:
        print(f"fmagap: {exc}", file=sys.stderr)
        return DATA


if __name__ == "__main__":
    sys.exit(main())
