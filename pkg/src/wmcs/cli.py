"""Command line: ``wmcs run``, ``wmcs gallery`` and ``wmcs verify``."""
from __future__ import annotations

import argparse
import sys

from .errors import HypothesisError, SchemaError, SizeLimitError, UnknownGalleryName, WmcsError
from .report import Report

EXIT_FAIL = 1
EXIT_SCHEMA = 2
EXIT_SIZE = 3
EXIT_HYPOTHESIS = 4

_ERROR_CODES = (
    (SchemaError, EXIT_SCHEMA),
    (UnknownGalleryName, EXIT_SCHEMA),
    (SizeLimitError, EXIT_SIZE),
    (HypothesisError, EXIT_HYPOTHESIS),
)


def _emit(rep: Report, out: str | None) -> int:
    print(rep.text_table())
    if out:
        path = rep.write(out)
        print(f"wrote {path}")
    return 0 if rep.ok else EXIT_FAIL


def cmd_run(args) -> int:
    from .scenario import run_file

    return _emit(run_file(args.file, args.seed), args.out)


def gallery_report(names: list[str]) -> Report:
    from .fixedpoint import GALLERY_NAMES
    from .matching.instances import MATCHING_GALLERY_NAMES
    from .scenario import _gallery_into

    known = GALLERY_NAMES + MATCHING_GALLERY_NAMES
    for n in names:
        if n not in known:
            raise UnknownGalleryName(f"unknown gallery instance {n!r}; known: {', '.join(known)}")
    rep = Report("gallery", provenance={"instances": list(names)})
    for n in names:
        _gallery_into(rep, n)
    return rep


def cmd_gallery(args) -> int:
    from .fixedpoint import GALLERY_NAMES
    from .matching.instances import MATCHING_GALLERY_NAMES

    if args.all:
        names = list(GALLERY_NAMES + MATCHING_GALLERY_NAMES)
    elif args.name:
        names = [args.name]
    else:
        for n in GALLERY_NAMES + MATCHING_GALLERY_NAMES:
            print(n)
        return 0
    return _emit(gallery_report(names), args.out)


def cmd_verify(args) -> int:
    from .acceptance import run_suite

    rep = run_suite(args.suite, args.seed, echo=print)
    if args.out:
        print(f"wrote {rep.write(args.out)}")
    return 0 if rep.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wmcs", description="Weak monotone comparative statics toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate a JSON scenario")
    r.add_argument("file")
    r.add_argument("--out", help="directory for report.json and CSV tables")
    r.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    r.set_defaults(fn=cmd_run)

    g = sub.add_parser("gallery", help="re-derive the facts of named counterexamples")
    g.add_argument("name", nargs="?")
    g.add_argument("--all", action="store_true")
    g.add_argument("--out")
    g.set_defaults(fn=cmd_gallery)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--suite", choices=["acceptance", "quick"], default="quick")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except WmcsError as e:
        for cls, code in _ERROR_CODES:
            if isinstance(e, cls):
                print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
                return code
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
