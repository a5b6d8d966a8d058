"""Command-line interface.

Exit status: 0 success, 1 semantic or validation failure, 2 parse failure,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .dsl import KBParseError, dumps_json, evaluate, export_json, parse_kb, parse_query, serialize_kb
from .dsl.serialize import representable_closure
from .errors import PossimError, SimilarityError
from .kb import diagnose
from .tnorm import EPS, TNORM_NAMES

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tnorm", choices=TNORM_NAMES, help="override the t-norm declared in the file")
    p.add_argument("--epsilon", type=float, default=EPS, help="comparison tolerance (default: %(default)g)")
    p.add_argument("--json", action="store_true", help="structured JSON output")
    p.add_argument("--explain", action="store_true", help="print witnesses")
    p.add_argument("--auto-close", action="store_true",
                   help="replace the similarity by its transitive closure before querying")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="possim", description="Similarity-based possibility and necessity reasoning.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", parents=[common], help="check similarity, partitions and tables")
    p.add_argument("file")
    p = sub.add_parser("closure", parents=[common], help="print the knowledge base with its closed similarity")
    p.add_argument("file")
    p.add_argument("--check-only", action="store_true", help="only report how many entries would be raised")
    p = sub.add_parser("query", parents=[common], help="evaluate one query")
    p.add_argument("file")
    p.add_argument("query")
    p = sub.add_parser("eval", parents=[common], help="evaluate a file of queries, one per line")
    p.add_argument("file")
    p.add_argument("queries")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (output order is unaffected)")
    p = sub.add_parser("export", parents=[common], help="emit the model and tight values as JSON")
    p.add_argument("file")
    return parser


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"possim: cannot read {path}: {exc.strerror or exc}") from None


def _load(args):
    kb = parse_kb(_read_text(args.file))
    if args.tnorm:
        kb = kb.with_norm(args.tnorm)
    return kb


def _prepare(kb, args, err):
    """Apply ``--auto-close`` and make sure the similarity is valid."""
    if args.auto_close:
        kb, raised = kb.closed(args.epsilon)
        print(f"possim: note: similarity replaced by its {kb.norm} transitive closure "
              f"({raised} entries raised)", file=err)
    kb.similarity(args.epsilon)
    return kb


def cmd_validate(args, out, err) -> int:
    kb = _load(args)
    checks = diagnose(kb, args.epsilon)
    failed = [c for c in checks if not c.ok]
    if args.json:
        doc = {"ok": not failed,
               "checks": [{"name": c.name, "ok": c.ok, "messages": list(c.messages)} for c in checks]}
        out.write(dumps_json(doc))
    else:
        for c in checks:
            out.write(f"{c.name}: {'ok' if c.ok else 'FAIL'}\n")
            for msg in c.messages:
                out.write(f"  {msg}\n")
        out.write("all checks passed\n" if not failed else f"{len(failed)} check(s) failed\n")
    return EXIT_OK if not failed else EXIT_INVALID


def cmd_closure(args, out, err) -> int:
    kb = _load(args)
    closed, raised = kb.closed(args.epsilon)
    if args.check_only:
        if args.json:
            out.write(dumps_json({"raised": raised}))
        else:
            out.write(f"{raised} entries raised\n")
    else:
        matrix = representable_closure(kb.matrix, kb.norm, args.epsilon)
        out.write(serialize_kb(replace(closed, matrix=matrix)))
    return EXIT_OK


def _render(result, args) -> str:
    if args.json:
        return json.dumps(result.record(), sort_keys=True)
    lines = [result.display]
    if args.explain:
        lines.extend(f"  {line}" for line in result.explain)
    return "\n".join(lines)


def cmd_query(args, out, err) -> int:
    kb = _prepare(_load(args), args, err)
    try:
        query = parse_query(args.query, kb)
    except KBParseError as exc:
        exc.source = "<query>"
        raise
    result = evaluate(query, kb, args.epsilon)
    out.write(_render(result, args) + "\n")
    return EXIT_OK


def cmd_eval(args, out, err) -> int:
    kb = _prepare(_load(args), args, err)
    lines = []
    for lineno, raw in enumerate(_read_text(args.queries).splitlines(), 1):
        text = raw.split("#", 1)[0].strip()
        if text:
            lines.append((lineno, text))

    def run(item):
        lineno, text = item
        try:
            result = evaluate(parse_query(text, kb), kb, args.epsilon)
        except KBParseError as exc:
            return False, _error_line(text, lineno, "parse", str(exc.diagnostics[0]), args)
        except PossimError as exc:
            return False, _error_line(text, lineno, "semantic", str(exc), args)
        if args.json:
            return True, json.dumps({"line": lineno, **result.record()}, sort_keys=True)
        body = _render(result, args)
        return True, f"{text} = {body}"

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(run, lines))
    for _, line in results:
        out.write(line + "\n")
    return EXIT_OK if all(ok for ok, _ in results) else EXIT_INVALID


def _error_line(text, lineno, kind, message, args) -> str:
    if args.json:
        return json.dumps({"line": lineno, "query": text, "error": kind, "message": message}, sort_keys=True)
    return f"{text} = error ({kind}, line {lineno}): {message}"


def cmd_export(args, out, err) -> int:
    kb = _prepare(_load(args), args, err)
    out.write(dumps_json(export_json(kb, args.epsilon)))
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "closure": cmd_closure, "query": cmd_query,
            "eval": cmd_eval, "export": cmd_export}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        print(str(exc), file=err)
        print(parser.format_usage().rstrip(), file=err)
        return EXIT_USAGE
    except KBParseError as exc:
        for d in exc.diagnostics:
            print(f"{getattr(exc, 'source', None) or args.file}:{d}", file=err)
        return EXIT_PARSE
    except SimilarityError as exc:
        print(f"possim: {exc}", file=err)
        print("possim: hint: run 'possim closure' or pass --auto-close", file=err)
        return EXIT_INVALID
    except PossimError as exc:
        print(f"possim: {exc}", file=err)
        return EXIT_INVALID
