"""Recursive path ordering and per-rule orientation checks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .term import ATOM, HOLE, PLUG, VAR, PathTerm, Atom, Xi1, replace_at, to_text
from .trs import RewriteRule, rule_table

__all__ = [
    "PrecedenceTable", "OperatorStatus", "DEFAULT_PRECEDENCE", "DEFAULT_STATUS",
    "MULTISET_STATUS", "rpo_greater", "rpo_explain", "multiset_greater",
    "RuleOrientation", "OrientationReport", "check_rule_orientation",
    "rule_instances",
]

DEFAULT_PAIRS = (
    ("sigma", "tau"), ("tau", "rho"),
    ("sigma", "xi"), ("sigma", "xiA"), ("sigma", "xi1"), ("sigma", "xi2"),
    ("sigma", "mu"), ("sigma", "mu1"), ("sigma", "mu2"),
    ("sigma", "subL"), ("sigma", "subR"), ("tau", "subL"),
)


class PrecedenceTable:
    """Strict partial order on operator names, closed transitively."""

    def __init__(self, pairs: Iterable[tuple[str, str]]):
        self.pairs = tuple(dict.fromkeys(pairs))
        above: dict[str, set[str]] = {}
        for f, g in self.pairs:
            above.setdefault(f, set()).add(g)
        changed = True
        while changed:
            changed = False
            for f, below in above.items():
                extra = set().union(*(above.get(g, set()) for g in below)) - below
                if extra:
                    below |= extra
                    changed = True
        for f, below in above.items():
            if f in below:
                raise ValueError(f"precedence is cyclic through {f!r}")
        self._closure = {f: frozenset(b) for f, b in above.items()}

    def greater(self, f: str, g: str) -> bool:
        if g == ATOM:
            return f != ATOM
        return g in self._closure.get(f, ())

    def extended(self, pairs: Iterable[tuple[str, str]]) -> "PrecedenceTable":
        return PrecedenceTable(self.pairs + tuple(pairs))

    def closure_pairs(self) -> list[tuple[str, str]]:
        return sorted((f, g) for f, below in self._closure.items() for g in below)

    def __repr__(self) -> str:
        return "PrecedenceTable(" + ", ".join(f"{f}>{g}" for f, g in self.pairs) + ")"


DEFAULT_PRECEDENCE = PrecedenceTable(DEFAULT_PAIRS)


@dataclass(frozen=True)
class OperatorStatus:
    """Per-operator argument comparison: ``multiset`` unless listed as ``lex``."""

    lex: frozenset = frozenset()

    def of(self, op: str) -> str:
        return "lex" if op in self.lex else "multiset"

    def describe(self) -> dict[str, str]:
        return {op: "lex" for op in sorted(self.lex)} or {"*": "multiset"}


DEFAULT_STATUS = OperatorStatus(frozenset({"tau"}))
MULTISET_STATUS = OperatorStatus()


def multiset_greater(A: Sequence, B: Sequence, gt: Callable[[object, object], bool]) -> bool:
    """Dershowitz-Manna extension of ``gt`` to finite multisets."""
    ca, cb = Counter(A), Counter(B)
    X = list((ca - cb).elements())
    Y = list((cb - ca).elements())
    if not X:
        return False
    return all(any(gt(x, y) for x in X) for y in Y)


def _head(t: PathTerm) -> str:
    return ATOM if t.op == ATOM else t.op


def rpo_greater(s: PathTerm, t: PathTerm, prec: PrecedenceTable = DEFAULT_PRECEDENCE,
                status: OperatorStatus = DEFAULT_STATUS) -> bool:
    """``s >* t`` in the recursive path ordering.

    Atoms are minimal, mutually incomparable constants below every operator.
    """
    return _Rpo(prec, status).gt(s, t)


class _Rpo:
    def __init__(self, prec: PrecedenceTable, status: OperatorStatus):
        self.prec = prec
        self.status = status
        self.cache: dict = {}

    def ge(self, s, t) -> bool:
        return s == t or self.gt(s, t)

    def gt(self, s: PathTerm, t: PathTerm) -> bool:
        key = (s, t)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._gt(s, t)
        return hit

    def _gt(self, s, t) -> bool:
        if s.op == ATOM or s == t:
            return False
        if any(self.ge(si, t) for si in s.args):
            return True
        f, g = _head(s), _head(t)
        if self.prec.greater(f, g):
            return g == ATOM or all(self.gt(s, tj) for tj in t.args)
        if f == g:
            if self.status.of(f) == "lex":
                return self._lex(s, t)
            return multiset_greater(s.args, t.args, self.gt)
        return False

    def _lex(self, s, t) -> bool:
        for si, ti in zip(s.args, t.args):
            if si != ti:
                return self.gt(si, ti) and all(self.gt(s, tj) for tj in t.args)
        return len(s.args) > len(t.args) and all(self.gt(s, tj) for tj in t.args)

    def explain(self, s: PathTerm, t: PathTerm) -> tuple[bool, str]:
        ts, tt = to_text(s), to_text(t)
        if s == t:
            return False, f"{ts} and {tt} are identical"
        if s.op == ATOM:
            return False, f"{ts} is an atom, minimal"
        for si in s.args:
            if si == t:
                return True, f"{tt} is an argument of {ts} (subterm)"
            if self.gt(si, t):
                return True, f"argument {to_text(si)} >* {tt}"
        f, g = _head(s), _head(t)
        if self.prec.greater(f, g):
            for tj in t.args:
                if not self.gt(s, tj):
                    return False, f"{f} > {g} (precedence) but not {ts} >* {to_text(tj)}"
            if g == ATOM:
                return True, f"{f} is above every atom"
            args = ", ".join(to_text(tj) for tj in t.args)
            return True, f"{f} > {g} (precedence) and {ts} >* each of {{{args}}}"
        if f == g:
            if self.status.of(f) == "lex":
                ok = self._lex(s, t)
                for si, ti in zip(s.args, t.args):
                    if si != ti:
                        if not self.gt(si, ti):
                            return False, (f"equal heads {f} (lex): first differing argument "
                                           f"{to_text(si)} is not >* {to_text(ti)}")
                        break
                if ok:
                    return True, f"equal heads {f} (lex): arguments decrease left to right"
                for tj in t.args:
                    if not self.gt(s, tj):
                        return False, f"equal heads {f} (lex) but not {ts} >* {to_text(tj)}"
                return False, f"equal heads {f} (lex): no decrease"
            if multiset_greater(s.args, t.args, self.gt):
                return True, f"equal heads {f} (multiset): argument multiset decreases"
            ca, cb = Counter(s.args), Counter(t.args)
            X = list((ca - cb).elements())
            for y in (cb - ca).elements():
                if not any(self.gt(x, y) for x in X):
                    return False, (f"equal heads {f} (multiset): {to_text(y)} is not dominated "
                                   f"by any removed argument of {ts}")
            return False, f"equal heads {f} (multiset): nothing removed"
        return False, (f"{f} and {g} are unrelated in the precedence and no argument "
                       f"of {ts} is >= {tt}")


def rpo_explain(s: PathTerm, t: PathTerm, prec: PrecedenceTable = DEFAULT_PRECEDENCE,
                status: OperatorStatus = DEFAULT_STATUS) -> tuple[bool, str]:
    """Verdict of ``s >* t`` with a one-line justification or failing subcomparison."""
    return _Rpo(prec, status).explain(s, t)


# -- rule orientation -------------------------------------------------------

def _ground(p: PathTerm, context: Optional[PathTerm]) -> PathTerm:
    if p.op == VAR:
        return Atom(p.name)
    if p.op == PLUG:
        inner = _ground(p.args[0], context)
        if context is None:
            return inner
        return replace_at(context, _hole_path(context), inner)
    if not p.args:
        return p
    return PathTerm(p.op, tuple(_ground(a, context) for a in p.args), p.name)


def _hole_path(c: PathTerm, path=()) -> tuple[int, ...]:
    if c == HOLE:
        return path
    for i, a in enumerate(c.args):
        if (found := _hole_path(a, path + (i,))) is not None:
            return found
    return None


PROPER_CONTEXT = Xi1(HOLE)


def rule_instances(r: RewriteRule) -> list[tuple[str, PathTerm, PathTerm]]:
    """Ground instances checked for a rule: variables become fresh atoms;
    context rules use the bare hole and ``xi1([])``."""
    out = [("bare" if r.has_context else "plain", _ground(r.lhs, None), _ground(r.rhs, None))]
    if r.has_context:
        out.append(("xi1([])", _ground(r.lhs, PROPER_CONTEXT), _ground(r.rhs, PROPER_CONTEXT)))
    return out


@dataclass(frozen=True)
class InstanceCheck:
    label: str
    lhs: PathTerm
    rhs: PathTerm
    oriented: bool
    reason: str


@dataclass(frozen=True)
class RuleOrientation:
    rule: RewriteRule
    checks: tuple[InstanceCheck, ...]

    @property
    def oriented(self) -> bool:
        return all(c.oriented for c in self.checks)

    @property
    def verdict(self) -> str:
        return "oriented" if self.oriented else "not-oriented"

    @property
    def failing(self) -> Optional[InstanceCheck]:
        return next((c for c in self.checks if not c.oriented), None)


@dataclass
class OrientationReport:
    precedence: PrecedenceTable
    status: OperatorStatus
    entries: list[RuleOrientation] = field(default_factory=list)

    @property
    def all_oriented(self) -> bool:
        return all(e.oriented for e in self.entries)

    def __getitem__(self, key) -> RuleOrientation:
        for e in self.entries:
            if e.rule.name == key or e.rule.index == key:
                return e
        raise KeyError(key)

    def not_oriented(self) -> list[str]:
        return [e.rule.name for e in self.entries if not e.oriented]

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            shown = e.failing or e.checks[0]
            out.append(f"{e.rule.index:>2} {e.rule.name:<6} {e.verdict:<12} "
                       f"[{shown.label}] {to_text(shown.lhs)} >* {to_text(shown.rhs)}: "
                       f"{shown.reason}")
        return out

    def summary(self) -> dict:
        return {
            "precedence": [f"{f}>{g}" for f, g in self.precedence.pairs],
            "status": self.status.describe(),
            "rules": {e.rule.name: e.verdict for e in self.entries},
            "oriented": sum(e.oriented for e in self.entries),
            "total": len(self.entries),
        }


def check_rule_orientation(rules: Optional[Iterable[RewriteRule]] = None,
                           prec: PrecedenceTable = DEFAULT_PRECEDENCE,
                           status: OperatorStatus = DEFAULT_STATUS) -> OrientationReport:
    """Check ``lhs >* rhs`` on every instance of every rule."""
    rpo = _Rpo(prec, status)
    report = OrientationReport(prec, status)
    for r in (rule_table() if rules is None else rules):
        checks = []
        for label, lhs, rhs in rule_instances(r):
            ok, reason = rpo.explain(lhs, rhs)
            checks.append(InstanceCheck(label, lhs, rhs, ok, reason))
        report.entries.append(RuleOrientation(r, tuple(checks)))
    return report
