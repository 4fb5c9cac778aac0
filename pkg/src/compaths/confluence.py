"""Critical pairs by superposition, with joinability checked by normalization."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Optional, Sequence

from .term import PLUG, VAR, PathTerm, Atom, Var, replace_at, subterm_at, to_text
from .trs import (
    DEFAULT_STEP_LIMIT, RewriteRule, apply_step, applicable_redexes, normalize,
    rule_table, select_rules,
)

__all__ = [
    "unify", "apply_subst", "bare_instance", "CriticalPair", "superpose",
    "check_joinable", "critical_pairs", "reachable_normal_forms",
]


def apply_subst(p: PathTerm, subst: dict) -> PathTerm:
    if p.op == VAR:
        bound = subst.get(p.name)
        return p if bound is None else apply_subst(bound, subst)
    if not p.args:
        return p
    return PathTerm(p.op, tuple(apply_subst(a, subst) for a in p.args), p.name)


def _occurs(name: str, t: PathTerm, subst: dict) -> bool:
    if t.op == VAR:
        if t.name == name:
            return True
        bound = subst.get(t.name)
        return bound is not None and _occurs(name, bound, subst)
    return any(_occurs(name, a, subst) for a in t.args)


def unify(s: PathTerm, t: PathTerm, subst: Optional[dict] = None) -> Optional[dict]:
    """Most general unifier of two first-order patterns, or None.

    The result is idempotent: bindings never mention bound variables.
    """
    subst = dict(subst or {})
    todo = [(s, t)]
    while todo:
        a, b = todo.pop()
        a, b = _walk(a, subst), _walk(b, subst)
        if a == b:
            continue
        if a.op == VAR or b.op == VAR:
            v, other = (a, b) if a.op == VAR else (b, a)
            if _occurs(v.name, other, subst):
                return None
            subst[v.name] = other
            continue
        if a.op != b.op or a.name != b.name or len(a.args) != len(b.args):
            return None
        todo.extend(zip(a.args, b.args))
    return {k: apply_subst(v, subst) for k, v in subst.items()}


def _walk(t: PathTerm, subst: dict) -> PathTerm:
    while t.op == VAR and t.name in subst:
        t = subst[t.name]
    return t


def bare_instance(p: PathTerm) -> PathTerm:
    """Drop every context: ``C[x]`` becomes ``x``."""
    if p.op == PLUG:
        return bare_instance(p.args[0])
    if not p.args:
        return p
    return PathTerm(p.op, tuple(bare_instance(a) for a in p.args), p.name)


def _rename(p: PathTerm, suffix: str) -> PathTerm:
    if p.op == VAR:
        return Var(p.name + suffix)
    if not p.args:
        return p
    return PathTerm(p.op, tuple(_rename(a, suffix) for a in p.args), p.name)


def _ground(p: PathTerm) -> PathTerm:
    if p.op == VAR:
        return Atom(p.name)
    if not p.args:
        return p
    return PathTerm(p.op, tuple(_ground(a) for a in p.args), p.name)


def _inner_positions(p: PathTerm, path=()) -> Iterator[tuple[int, ...]]:
    if p.op == VAR:
        return
    yield path
    for i, a in enumerate(p.args):
        yield from _inner_positions(a, path + (i,))


@dataclass(frozen=True)
class CriticalPair:
    """``inner`` overlaps ``outer`` at ``position`` of the outer left side.

    Terms are ground: the unifier's remaining variables become atoms.
    """

    outer: str
    inner: str
    position: tuple[int, ...]
    peak: PathTerm
    left: PathTerm    # inner rule applied
    right: PathTerm   # outer rule applied at the root
    joinable: Optional[bool] = None
    normal_form: Optional[PathTerm] = None
    left_nf: Optional[PathTerm] = None
    right_nf: Optional[PathTerm] = None

    @property
    def rules(self) -> tuple[str, str]:
        return (self.inner, self.outer)

    @property
    def trivial(self) -> bool:
        return self.left == self.right

    def line(self) -> str:
        pos = ".".join(map(str, self.position)) or "root"
        verdict = {None: "unchecked", True: "joinable", False: "NOT joinable"}[self.joinable]
        tail = ""
        if self.joinable:
            tail = f" -> {to_text(self.normal_form)}"
        elif self.joinable is False:
            tail = f" ({to_text(self.left_nf)} vs {to_text(self.right_nf)})"
        return (f"{self.inner} in {self.outer} @ {pos}: {to_text(self.peak)} => "
                f"{to_text(self.left)} | {to_text(self.right)} : {verdict}{tail}")

    def record(self) -> dict:
        out = {"inner": self.inner, "outer": self.outer,
               "position": ".".join(map(str, self.position)) or "root",
               "peak": to_text(self.peak), "left": to_text(self.left),
               "right": to_text(self.right), "joinable": self.joinable}
        if self.joinable:
            out["normal_form"] = to_text(self.normal_form)
        elif self.joinable is False:
            out["left_nf"] = to_text(self.left_nf)
            out["right_nf"] = to_text(self.right_nf)
        return out


def superpose(rules: Optional[Iterable[RewriteRule]] = None) -> list[CriticalPair]:
    """All critical pairs between bare-hole instances of ``rules``.

    Ordered by outer rule index, inner rule index, then position.
    """
    rules = sorted(rule_table() if rules is None else rules, key=lambda r: r.index)
    out = []
    for outer in rules:
        o_lhs, o_rhs = bare_instance(outer.lhs), bare_instance(outer.rhs)
        for inner in rules:
            i_lhs = _rename(bare_instance(inner.lhs), "1")
            i_rhs = _rename(bare_instance(inner.rhs), "1")
            for pos in _inner_positions(o_lhs):
                if not pos and inner is outer:
                    continue
                mgu = unify(i_lhs, subterm_at(o_lhs, pos))
                if mgu is None:
                    continue
                peak = apply_subst(o_lhs, mgu)
                left = apply_subst(replace_at(o_lhs, pos, i_rhs), mgu)
                right = apply_subst(o_rhs, mgu)
                out.append(CriticalPair(outer.name, inner.name, pos,
                                        _ground(peak), _ground(left), _ground(right)))
    return out


def check_joinable(cp: CriticalPair, rules: Optional[Sequence[RewriteRule]] = None,
                   strategy: str = "outermost",
                   step_limit: int = DEFAULT_STEP_LIMIT) -> CriticalPair:
    """Joinable iff both results reach the same normal form under ``rules``."""
    a = normalize(cp.left, strategy, step_limit, rules=rules).final
    b = normalize(cp.right, strategy, step_limit, rules=rules).final
    if a == b:
        return replace(cp, joinable=True, normal_form=a, left_nf=a, right_nf=b)
    return replace(cp, joinable=False, normal_form=None, left_nf=a, right_nf=b)


def critical_pairs(fragment: Optional[str] = "core", exclude: Iterable = (),
                   strategy: str = "outermost") -> list[CriticalPair]:
    """Superpose a fragment and check every pair against the same rule set."""
    rules = select_rules(fragment, exclude)
    return [check_joinable(cp, rules, strategy) for cp in superpose(rules)]


def reachable_normal_forms(t: PathTerm, rules: Optional[Sequence[RewriteRule]] = None,
                           limit: int = 20_000) -> Optional[set[PathTerm]]:
    """Every normal form reachable from ``t`` by any rewrite sequence.

    Returns None when more than ``limit`` terms are reachable.
    """
    seen = {t}
    todo = deque([t])
    found = set()
    while todo:
        cur = todo.popleft()
        redexes = applicable_redexes(cur, rules)
        if not redexes:
            found.add(cur)
        for r, pos in redexes:
            nxt = apply_step(cur, r, pos).after
            if nxt not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(nxt)
                todo.append(nxt)
    return found
