"""The 39-rule rewrite system on path terms, traces, normal forms, rw-equality."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .term import (
    CONGRUENCE_OPS, PLUG, VAR, ATOM, PathTerm, format_position,
    match_context_pair, parse_pattern, replace_at, substitute, subterm_at,
    to_text, variables,
)

__all__ = [
    "RewriteRule", "RewriteStep", "RewriteTrace", "RwEquality",
    "StepLimitExceeded", "NotApplicable", "RULE_SPECS", "CORE_RULES",
    "rule_table", "rule", "rules_by_name", "match_rule", "applicable_redexes",
    "apply_step", "normalize", "rw_equal", "STRATEGIES", "DEFAULT_STEP_LIMIT",
]

DEFAULT_STEP_LIMIT = 10_000

# index, name, lhs, rhs
RULE_SPECS: tuple[tuple[int, str, str, str], ...] = (
    (1, "sr", "sigma(rho)", "rho"),
    (2, "ss", "sigma(sigma(r))", "r"),
    (3, "tr", "tau(C[r],C[sigma(r)])", "C[rho]"),
    (4, "tsr", "tau(C[sigma(r)],C[r])", "C[rho]"),
    (5, "trr", "tau(C[r],C[rho])", "C[r]"),
    (6, "tlr", "tau(C[rho],C[r])", "C[r]"),
    (7, "slr", "subL(C[r],C[rho])", "C[r]"),
    (8, "srr", "subR(C[rho],C[r])", "C[r]"),
    (9, "sls", "subL(subL(s,C[r]),C[sigma(r)])", "s"),
    (10, "slss", "subL(subL(s,C[sigma(r)]),C[r])", "s"),
    (11, "srs", "subR(C[s],subR(C[sigma(s)],r))", "r"),
    (12, "srrr", "subR(C[sigma(s)],subR(C[s],r))", "r"),
    (13, "mx2l1", "mu1(xi1(r))", "r"),
    (14, "mx2l2", "mu1(xiA(r,s))", "r"),
    (15, "mx2r1", "mu2(xiA(r,s))", "s"),
    (16, "mx2r2", "mu2(xi2(s))", "s"),
    (17, "mx3l", "mu(xi1(r),s,u)", "s"),
    (18, "mx3r", "mu(xi2(r),s,u)", "u"),
    (19, "mxl", "nu(xi(r))", "r"),
    (20, "mxr", "mu(xi2(r),s)", "s"),
    (21, "mx", "xi(mu1(r),mu2(r))", "r"),
    (22, "mxx", "mu(t,xi1(r),xi2(s))", "t"),
    (23, "xmr", "xi(nu(r))", "r"),
    (24, "mx1r", "mu(s,xi2(r))", "s"),
    (25, "stss", "sigma(tau(r,s))", "tau(sigma(s),sigma(r))"),
    (26, "ssbl", "sigma(subL(r,s))", "subR(sigma(s),sigma(r))"),
    (27, "ssbr", "sigma(subR(r,s))", "subL(sigma(s),sigma(r))"),
    (28, "sx", "sigma(xi(r))", "xi(sigma(r))"),
    (29, "sxss", "sigma(xi(s,r))", "xi(sigma(s),sigma(r))"),
    (30, "sm", "sigma(mu(r))", "mu(sigma(r))"),
    (31, "smss", "sigma(mu(s,r))", "mu(sigma(s),sigma(r))"),
    (32, "smsss", "sigma(mu(r,u,v))", "mu(sigma(r),sigma(u),sigma(v))"),
    (33, "tsbll", "tau(r,subL(rho,s))", "subL(r,s)"),
    (34, "tsbrl", "tau(r,subR(s,rho))", "subL(r,s)"),
    (35, "tsblr", "tau(subL(r,s),t)", "tau(r,subR(s,t))"),
    (36, "tsbrr", "tau(subR(s,t),u)", "subR(s,tau(t,u))"),
    (37, "tt", "tau(tau(t,r),s)", "tau(t,tau(r,s))"),
    (38, "tts", "tau(C[u],tau(C[sigma(u)],v))", "v"),
    # printed with right side u; its derivation ends at v
    (39, "tst", "tau(C[sigma(u)],tau(C[u],v))", "v"),
)

CORE_RULES = frozenset(list(range(1, 13)) + [25, 26, 27] + list(range(33, 40)))


class StepLimitExceeded(RuntimeError):
    def __init__(self, limit: int, trace: "RewriteTrace"):
        super().__init__(f"normalization exceeded {limit} steps")
        self.limit = limit
        self.trace = trace


class NotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    index: int
    name: str
    lhs: PathTerm
    rhs: PathTerm
    fragment: str
    relation: Optional[str] = None
    hole_var: Optional[str] = None
    context_var: Optional[str] = None

    @property
    def has_context(self) -> bool:
        return self.relation is not None

    def __str__(self) -> str:
        return f"{self.index}. {self.name}: {to_text(self.lhs)} -> {to_text(self.rhs)}"


def _plugs(p: PathTerm) -> list[PathTerm]:
    if p.op == PLUG:
        return [p]
    return [q for a in p.args for q in _plugs(a)]


def _plug_relation(left: PathTerm, right: PathTerm) -> tuple[str, str]:
    if left.op == VAR and right.op == "sigma" and right.args[0] == left:
        return "r-vs-sigma", left.name
    if right.op == VAR and left.op == "sigma" and left.args[0] == right:
        return "sigma-vs-r", right.name
    if left.op == VAR and right.op == "rho":
        return "r-vs-rho", left.name
    if right.op == VAR and left.op == "rho":
        return "rho-vs-r", right.name
    raise ValueError(f"unsupported context pair {to_text(left)} / {to_text(right)}")


def _make_rule(index: int, name: str, lhs_text: str, rhs_text: str) -> RewriteRule:
    lhs, rhs = parse_pattern(lhs_text), parse_pattern(rhs_text)
    if not variables(rhs) <= variables(lhs):
        raise ValueError(f"rule {name}: right side has extra variables")
    relation = hole_var = ctx = None
    plugs = _plugs(lhs)
    if plugs:
        if len(plugs) != 2 or plugs[0].name != plugs[1].name:
            raise ValueError(f"rule {name}: expected one context used twice")
        relation, hole_var = _plug_relation(plugs[0].args[0], plugs[1].args[0])
        ctx = plugs[0].name
    fragment = "core" if index in CORE_RULES else "mixed"
    return RewriteRule(index, name, lhs, rhs, fragment, relation, hole_var, ctx)


@lru_cache(maxsize=None)
def _table() -> tuple[RewriteRule, ...]:
    return tuple(_make_rule(*spec) for spec in RULE_SPECS)


def rule_table() -> list[RewriteRule]:
    """All 39 rules, in their numbered order."""
    return list(_table())


def rules_by_name() -> dict[str, RewriteRule]:
    return {r.name: r for r in _table()}


def rule(key) -> RewriteRule:
    """Look a rule up by name (``"tt"``) or index (``37``)."""
    for r in _table():
        if r.name == key or r.index == key:
            return r
    raise KeyError(key)


def select_rules(fragment: Optional[str] = None, exclude: Iterable = ()) -> list[RewriteRule]:
    excluded = set(exclude)
    return [r for r in _table()
            if (fragment is None or r.fragment == fragment)
            and r.name not in excluded and r.index not in excluded]


# -- matching ---------------------------------------------------------------

def _match_skeleton(p: PathTerm, t: PathTerm, subst: dict, plugs: list) -> bool:
    op = p.op
    if op == VAR:
        bound = subst.get(p.name)
        if bound is None:
            subst[p.name] = t
            return True
        return bound == t
    if op == PLUG:
        plugs.append(t)
        return True
    if op != t.op or p.name != t.name or len(p.args) != len(t.args):
        return False
    for pa, ta in zip(p.args, t.args):
        if not _match_skeleton(pa, ta, subst, plugs):
            return False
    return True


def match_rule(r: RewriteRule, t: PathTerm, frames=CONGRUENCE_OPS) -> Optional[tuple[dict, dict]]:
    """Match a rule's left side at the root of ``t``.

    Returns ``(substitution, contexts)`` or None.
    """
    subst: dict = {}
    plugged: list = []
    if not _match_skeleton(r.lhs, t, subst, plugged):
        return None
    if not r.has_context:
        return subst, {}
    found = match_context_pair(plugged[0], plugged[1], r.relation, frames)
    if found is None:
        return None
    ctx, bound = found
    prior = subst.get(r.hole_var)
    if prior is not None and prior != bound:
        return None
    subst[r.hole_var] = bound
    return subst, {r.context_var: ctx}


@lru_cache(maxsize=None)
def _by_head(rules: tuple[RewriteRule, ...]) -> dict[str, tuple[RewriteRule, ...]]:
    heads: dict[str, list[RewriteRule]] = {}
    for r in sorted(rules, key=lambda r: r.index):
        heads.setdefault(r.lhs.op, []).append(r)
    return {k: tuple(v) for k, v in heads.items()}


def _rules_tuple(rules) -> tuple[RewriteRule, ...]:
    return _table() if rules is None else tuple(rules)


def _walk(t: PathTerm, order: str, path=()) -> Iterator[tuple[tuple[int, ...], PathTerm]]:
    if order == "pre":
        yield path, t
    if t.op != ATOM:
        for i, child in enumerate(t.args):
            yield from _walk(child, order, path + (i,))
    if order == "post":
        yield path, t


# -- steps ------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    rule: str
    position: tuple[int, ...]
    before: PathTerm
    after: PathTerm
    fragment: str = "core"

    def line(self, k: int) -> str:
        return (f"step {k}: {self.rule} @ {format_position(self.position)} : "
                f"{to_text(self.before)} => {to_text(self.after)}")

    def record(self, k: int) -> dict:
        return {"step": k, "rule": self.rule, "position": format_position(self.position),
                "before": to_text(self.before), "after": to_text(self.after),
                "fragment": self.fragment}


@dataclass(frozen=True)
class RewriteTrace:
    initial: PathTerm
    steps: tuple[RewriteStep, ...] = ()
    final: Optional[PathTerm] = None

    def __post_init__(self):
        if self.final is None:
            end = self.steps[-1].after if self.steps else self.initial
            object.__setattr__(self, "final", end)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def terms(self) -> list[PathTerm]:
        """The rewrite sequence R0, ..., Rn."""
        return [self.initial] + [s.after for s in self.steps]

    def lines(self) -> list[str]:
        return [s.line(k) for k, s in enumerate(self.steps, 1)]

    def records(self) -> list[dict]:
        return [s.record(k) for k, s in enumerate(self.steps, 1)]

    def to_text(self) -> str:
        return "\n".join(self.lines())

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r, sort_keys=True) for r in self.records())

    def is_chained(self) -> bool:
        cur = self.initial
        for s in self.steps:
            if s.before != cur:
                return False
            cur = s.after
        return cur == self.final


def applicable_redexes(t: PathTerm, rules: Optional[Sequence[RewriteRule]] = None,
                       order: str = "pre") -> list[tuple[RewriteRule, tuple[int, ...]]]:
    """Every (rule, position) with a redex, outermost-leftmost then by index."""
    heads = _by_head(_rules_tuple(rules))
    found = []
    for path, node in _walk(t, order):
        for r in heads.get(node.op, ()):
            if match_rule(r, node) is not None:
                found.append((r, path))
    return found


def apply_step(t: PathTerm, r: RewriteRule, p) -> RewriteStep:
    p = tuple(p)
    try:
        node = subterm_at(t, p)
    except ValueError as exc:
        raise NotApplicable(str(exc)) from None
    m = match_rule(r, node)
    if m is None:
        raise NotApplicable(f"rule {r.name} does not apply at {format_position(p)} of {to_text(t)}")
    subst, contexts = m
    after = replace_at(t, p, substitute(r.rhs, subst, contexts))
    return RewriteStep(r.name, p, t, after, r.fragment)


def _first_redex(t: PathTerm, heads: dict, order: str):
    for path, node in _walk(t, order):
        for r in heads.get(node.op, ()):
            m = match_rule(r, node)
            if m is not None:
                return r, path, node, m
    return None


STRATEGIES = {
    "outermost": "outermost", "outermost-leftmost": "outermost",
    "innermost": "innermost", "innermost-leftmost": "innermost",
    "random": "random", "seeded-random": "random",
}


def normalize(t: PathTerm, strategy: str = "outermost", step_limit: int = DEFAULT_STEP_LIMIT,
              seed: int = 0, rules: Optional[Sequence[RewriteRule]] = None) -> RewriteTrace:
    """Rewrite ``t`` until no redex remains, recording every step.

    ``strategy`` is ``outermost`` (leftmost, first rule by index),
    ``innermost`` (leftmost-innermost) or ``random`` (uniform over all
    redexes, seeded).
    """
    if step_limit <= 0:
        raise ValueError("step_limit must be positive")
    try:
        mode = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    rules_t = _rules_tuple(rules)
    heads = _by_head(rules_t)
    rng = random.Random(seed)
    steps: list[RewriteStep] = []
    current = t
    while True:
        if mode == "random":
            redexes = applicable_redexes(current, rules_t)
            if not redexes:
                break
            r, path = rng.choice(redexes)
            step = apply_step(current, r, path)
        else:
            hit = _first_redex(current, heads, "pre" if mode == "outermost" else "post")
            if hit is None:
                break
            r, path, node, (subst, contexts) = hit
            after = replace_at(current, path, substitute(r.rhs, subst, contexts))
            step = RewriteStep(r.name, path, current, after, r.fragment)
        if len(steps) >= step_limit:
            raise StepLimitExceeded(step_limit, RewriteTrace(t, tuple(steps), current))
        steps.append(step)
        current = step.after
    return RewriteTrace(t, tuple(steps), current)


@dataclass(frozen=True)
class RwEquality:
    equal: bool
    left: RewriteTrace
    right: RewriteTrace

    def __bool__(self) -> bool:
        return self.equal

    @property
    def normal_form(self) -> Optional[PathTerm]:
        return self.left.final if self.equal else None


def rw_equal(s: PathTerm, t: PathTerm, strategy: str = "outermost",
             step_limit: int = DEFAULT_STEP_LIMIT,
             rules: Optional[Sequence[RewriteRule]] = None) -> RwEquality:
    """Decide ``s =rw t`` by comparing normal forms; both traces witness it."""
    left = normalize(s, strategy, step_limit, rules=rules)
    right = normalize(t, strategy, step_limit, rules=rules)
    return RwEquality(left.final == right.final, left, right)
