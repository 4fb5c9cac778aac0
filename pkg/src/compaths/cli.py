"""Command-line interface.

Exit codes: 0 success (``equal``: equal), 1 ``equal`` false or a failed
check, 2 bad input (parse, arity, foreign atom, usage), 3 step limit.

``--format structured`` prints one JSON object per line with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable, Optional, Sequence

from .confluence import critical_pairs
from .ordering import DEFAULT_STATUS, MULTISET_STATUS, DEFAULT_PRECEDENCE, check_rule_orientation
from .pi1 import SurfaceError, canonicalize, surface
from .term import TermError, parse, to_text
from .trs import DEFAULT_STEP_LIMIT, STRATEGIES, StepLimitExceeded, normalize, rw_equal, select_rules

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_STEPS = 0, 1, 2, 3

FRAGMENTS = {"all": None, "core": "core", "mixed": "mixed"}


class _Out:
    def __init__(self, stream, structured: bool):
        self.stream = stream
        self.structured = structured

    def text(self, line: str) -> None:
        if not self.structured:
            print(line, file=self.stream)

    def record(self, **fields) -> None:
        if self.structured:
            print(json.dumps(fields, sort_keys=True), file=self.stream)


def _precedence_pair(text: str) -> tuple[str, str]:
    f, sep, g = text.partition(">")
    if not sep or not f or not g:
        raise argparse.ArgumentTypeError(f"expected OP>OP, got {text!r}")
    return f.strip(), g.strip()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="compaths", description="Rewriting on computational path terms.")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    rewriting = argparse.ArgumentParser(add_help=False)
    rewriting.add_argument("--strategy", choices=sorted(STRATEGIES), default="outermost")
    rewriting.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    rewriting.add_argument("--fragment", choices=sorted(FRAGMENTS), default="all",
                           help="rules to rewrite with (default: all 39)")

    n = sub.add_parser("normalize", parents=[common, rewriting], help="print the normal form")
    n.add_argument("terms", nargs="*")
    n.add_argument("--file", help="read one term per line")
    n.add_argument("--trace", action="store_true")

    t = sub.add_parser("trace", parents=[common, rewriting], help="normalize and print every step")
    t.add_argument("terms", nargs="*")
    t.add_argument("--file", help="read one term per line")

    e = sub.add_parser("equal", parents=[common, rewriting], help="decide rw-equality")
    e.add_argument("left")
    e.add_argument("right")
    e.add_argument("--trace", action="store_true")

    r = sub.add_parser("rpo-check", parents=[common], help="orient rules by the path ordering")
    r.add_argument("--fragment", choices=sorted(FRAGMENTS), default="core")
    r.add_argument("--status", choices=("lex", "multiset"), default="lex",
                   help="lex: tau compares arguments lexicographically")
    r.add_argument("--extra-precedence", type=_precedence_pair, action="append", default=[],
                   metavar="F>G", help="add a pair to the precedence")

    c = sub.add_parser("critical-pairs", parents=[common], help="superpose rules and check joinability")
    c.add_argument("--fragment", choices=sorted(FRAGMENTS), default="core")
    c.add_argument("--exclude", default="", help="comma-separated rule names or numbers")
    c.add_argument("--strategy", choices=sorted(STRATEGIES), default="outermost")

    q = sub.add_parser("pi1", parents=[common], help="canonical fundamental-group element")
    q.add_argument("surface", choices=("circle", "torus", "rp2"))
    q.add_argument("terms", nargs="*")
    q.add_argument("--file", help="read one term per line")
    q.add_argument("--trace", action="store_true")
    q.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    return p


def _inputs(args) -> list[str]:
    items = list(args.terms)
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            items.extend(line.strip() for line in fh if line.strip())
    if not items:
        raise _Usage("no term given")
    return items


class _Usage(Exception):
    pass


def _trace_out(out: _Out, trace, source: str) -> None:
    for k, step in enumerate(trace.steps, 1):
        out.text(step.line(k))
        out.record(kind="step", input=source, **step.record(k))


def _cmd_normalize(args, out: _Out, with_trace: bool) -> int:
    rules = select_rules(FRAGMENTS[args.fragment])
    for text in _inputs(args):
        term = parse(text)
        tr = normalize(term, args.strategy, args.step_limit, rules=rules)
        if with_trace:
            _trace_out(out, tr, text)
        out.text(to_text(tr.final))
        out.record(kind="result", input=text, normal_form=to_text(tr.final), steps=len(tr))
    return EXIT_OK


def _cmd_equal(args, out: _Out) -> int:
    rules = select_rules(FRAGMENTS[args.fragment])
    s, t = parse(args.left), parse(args.right)
    res = rw_equal(s, t, args.strategy, args.step_limit, rules=rules)
    if args.trace:
        _trace_out(out, res.left, args.left)
        _trace_out(out, res.right, args.right)
    out.text("true" if res.equal else "false")
    out.record(kind="result", left=to_text(s), right=to_text(t), equal=res.equal,
               left_nf=to_text(res.left.final), right_nf=to_text(res.right.final))
    return EXIT_OK if res.equal else EXIT_FALSE


def _cmd_rpo(args, out: _Out) -> int:
    prec = DEFAULT_PRECEDENCE.extended(args.extra_precedence) if args.extra_precedence else DEFAULT_PRECEDENCE
    status = DEFAULT_STATUS if args.status == "lex" else MULTISET_STATUS
    report = check_rule_orientation(select_rules(FRAGMENTS[args.fragment]), prec, status)
    for line, e in zip(report.lines(), report.entries):
        out.text(line)
        shown = e.failing or e.checks[0]
        out.record(kind="rule", index=e.rule.index, rule=e.rule.name, verdict=e.verdict,
                   instance=shown.label, reason=shown.reason)
    summary = report.summary()
    out.text(f"oriented {summary['oriented']}/{summary['total']}")
    out.record(kind="summary", oriented=summary["oriented"], total=summary["total"],
               precedence=summary["precedence"], status=summary["status"])
    return EXIT_OK if report.all_oriented else EXIT_FALSE


def _cmd_cp(args, out: _Out) -> int:
    exclude = [x.strip() for x in args.exclude.split(",") if x.strip()]
    exclude = [int(x) if x.isdigit() else x for x in exclude]
    pairs = critical_pairs(FRAGMENTS[args.fragment], exclude, args.strategy)
    for cp in pairs:
        out.text(cp.line())
        out.record(kind="pair", **cp.record())
    bad = sum(not cp.joinable for cp in pairs)
    out.text(f"pairs {len(pairs)}, not joinable {bad}")
    out.record(kind="summary", pairs=len(pairs), not_joinable=bad)
    return EXIT_OK if bad == 0 else EXIT_FALSE


def _cmd_pi1(args, out: _Out) -> int:
    s = surface(args.surface)
    for text in _inputs(args):
        c = canonicalize(s, parse(text), trace=True, step_limit=args.step_limit)
        if args.trace:
            _trace_out(out, c.trace, text)
        out.text(str(c.element))
        out.text(f"word: {c.word}")
        out.record(kind="result", surface=s.name, input=text, element=str(c.element),
                   word=str(c.word), canonical_word=str(c.canonical_word))
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # terms given after an option are left over by argparse
        if extra and hasattr(args, "terms") and not any(x.startswith("-") for x in extra):
            args.terms.extend(extra)
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    out = _Out(stdout, args.format == "structured")
    try:
        if getattr(args, "step_limit", 1) <= 0:
            raise _Usage("--step-limit must be positive")
        if args.command == "normalize":
            return _cmd_normalize(args, out, args.trace)
        if args.command == "trace":
            return _cmd_normalize(args, out, True)
        if args.command == "equal":
            return _cmd_equal(args, out)
        if args.command == "rpo-check":
            return _cmd_rpo(args, out)
        if args.command == "critical-pairs":
            return _cmd_cp(args, out)
        return _cmd_pi1(args, out)
    except (TermError, SurfaceError, _Usage, OSError) as exc:
        print(f"compaths: error: {exc}", file=stderr)
        return EXIT_INPUT
    except StepLimitExceeded as exc:
        print(f"compaths: error: {exc}", file=stderr)
        return EXIT_STEPS


def main(argv: Optional[Iterable[str]] = None) -> None:
    sys.exit(run(None if argv is None else list(argv)))


if __name__ == "__main__":
    main()
