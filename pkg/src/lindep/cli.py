"""Command line: ``lindep check|run|nf``."""

from __future__ import annotations

import argparse
import json
import sys

from .diagnostics import Diagnostic, LinDepError, ParseError
from .pretty import show
from .program import Session

EXIT_OK, EXIT_TYPE, EXIT_PARSE = 0, 1, 2


def _emit(diags: list[tuple[str, Diagnostic]], as_json: bool, color: bool) -> None:
    if as_json:
        payload = [dict(d.to_json(), file=path) for path, d in diags]
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return
    for path, d in diags:
        text = d.format(path)
        if color:
            text = text.replace(f"{d.severity}[", f"\x1b[31m{d.severity}\x1b[0m[", 1)
        print(text, file=sys.stderr)


def cmd_check(args) -> int:
    session = Session()
    diags: list[tuple[str, Diagnostic]] = []
    status = EXIT_OK
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                src = fh.read()
        except OSError as e:
            print(f"{path}: {e.strerror}", file=sys.stderr)
            return EXIT_TYPE
        try:
            found = session.load(src, path)
        except ParseError as e:
            diags.append((path, e.diagnostic))
            status = EXIT_PARSE
            continue
        diags.extend((path, d) for d in found)
        if found and status == EXIT_OK:
            status = EXIT_TYPE
    color = not args.no_color and sys.stderr.isatty()
    _emit(diags, args.json, color)
    if args.show_production:
        for w in session.witnesses(args.show_production):
            where = f"{w.span}: " if w.span else ""
            print(f"{where}{show(w.src, w.names)} ▷ {show(w.tgt, w.names)}")
            print(f"  {show(w.production, w.names)}")
    return status


def cmd_run(args) -> int:
    session = Session()
    try:
        with open(args.file, encoding="utf-8") as fh:
            found = session.load(fh.read(), args.file)
    except ParseError as e:
        _emit([(args.file, e.diagnostic)], False, False)
        return EXIT_PARSE
    if found:
        _emit([(args.file, d) for d in found], False, False)
        return EXIT_TYPE
    try:
        print(session.run(args.name, args.args))
    except ParseError as e:
        _emit([("<argument>", e.diagnostic)], False, False)
        return EXIT_PARSE
    except LinDepError as e:
        _emit([("<argument>", e.diagnostic)], False, False)
        return EXIT_TYPE
    return EXIT_OK


def cmd_nf(args) -> int:
    session = Session()
    try:
        if args.load:
            with open(args.load, encoding="utf-8") as fh:
                found = session.load(fh.read(), args.load)
            if found:
                _emit([(args.load, d) for d in found], False, False)
                return EXIT_TYPE
        print(session.supply_nf(args.expr, args.ctx or ""))
    except ParseError as e:
        _emit([("<expr>", e.diagnostic)], False, False)
        return EXIT_PARSE
    except LinDepError as e:
        _emit([("<expr>", e.diagnostic)], False, False)
        return EXIT_TYPE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lindep", description="Dependent linear type checker.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check .ld files")
    c.add_argument("files", nargs="*")
    c.add_argument("--json", action="store_true", help="machine-readable diagnostics on stdout")
    c.add_argument("--no-color", action="store_true")
    c.add_argument("--show-production", metavar="NAME", help="print solver productions of a definition")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("run", help="evaluate the intuitionistic part of a definition")
    r.add_argument("file")
    r.add_argument("name")
    r.add_argument("args", nargs="*")
    r.add_argument("--no-color", action="store_true")
    r.set_defaults(fn=cmd_run)

    n = sub.add_parser("nf", help="print the normal form of a supply")
    n.add_argument("expr")
    n.add_argument("--ctx", metavar="TELESCOPE", help='variables in scope, e.g. "x : A, y : B"')
    n.add_argument("--load", metavar="FILE", help="check a file first and use its definitions")
    n.add_argument("--no-color", action="store_true")
    n.set_defaults(fn=cmd_nf)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
