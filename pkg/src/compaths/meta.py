"""Second-level rewriting: terms over rewrite sequences, and independence of choice.

A meta term is built from witnesses (first-level :class:`RewriteTrace`
objects, read as proofs that their endpoints are rw-equal) with ``rho2``,
``sigma2`` and ``tau2``. Every meta term has a source and a target.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Sequence, Union

from .term import PathTerm, Tau, Var, to_text
from .trs import RewriteRule, RewriteStep, RewriteTrace

__all__ = [
    "MetaTerm", "MetaAtom", "MetaRho", "MetaSigma", "MetaTau", "EndpointError",
    "EmptyTraceError", "MetaStep", "MetaTrace", "rw2_rule_table",
    "rw2_normalize", "rw2_equal", "cd2_interleavings", "cd2_equal",
    "cd2_count", "CD2_GUARD",
]

CD2_GUARD = 20


class EndpointError(ValueError):
    pass


class EmptyTraceError(ValueError):
    pass


@dataclass(frozen=True)
class MetaTerm:
    op: str                         # "atom", "rho2", "sigma2", "tau2"
    args: tuple = ()
    trace: Optional[RewriteTrace] = None
    point: Optional[PathTerm] = None
    source: Optional[PathTerm] = None
    target: Optional[PathTerm] = None

    def __str__(self) -> str:
        return meta_text(self)


def MetaAtom(trace: RewriteTrace) -> MetaTerm:
    return MetaTerm("atom", (), trace, None, trace.initial, trace.final)


def MetaRho(point: PathTerm) -> MetaTerm:
    return MetaTerm("rho2", (), None, point, point, point)


def MetaSigma(theta: MetaTerm) -> MetaTerm:
    return MetaTerm("sigma2", (theta,), source=theta.target, target=theta.source)


def MetaTau(theta: MetaTerm, phi: MetaTerm) -> MetaTerm:
    if theta.target != phi.source:
        raise EndpointError(f"tau2: {to_text(theta.target)} does not meet {to_text(phi.source)}")
    return MetaTerm("tau2", (theta, phi), source=theta.source, target=phi.target)


def meta_text(m: MetaTerm) -> str:
    if m.op == "atom":
        return f"<{to_text(m.source)} ~> {to_text(m.target)}>"
    if m.op == "rho2":
        return f"rho2[{to_text(m.point)}]"
    return f"{m.op}(" + ",".join(meta_text(a) for a in m.args) + ")"


def _check(m: MetaTerm) -> None:
    """Recompute endpoints bottom-up; raise on any mismatch."""
    if m.op == "atom":
        ok = m.trace is not None and (m.source, m.target) == (m.trace.initial, m.trace.final)
    elif m.op == "rho2":
        ok = m.source == m.point == m.target
    elif m.op == "sigma2":
        (a,) = m.args
        _check(a)
        ok = (m.source, m.target) == (a.target, a.source)
    elif m.op == "tau2":
        a, b = m.args
        _check(a)
        _check(b)
        ok = a.target == b.source and (m.source, m.target) == (a.source, b.target)
    else:
        raise EndpointError(f"unknown meta operator {m.op!r}")
    if not ok:
        raise EndpointError(f"endpoints do not compose in {meta_text(m)}")


# -- rules --------------------------------------------------------------------

_RW2 = (
    (1, "sr2", ("sigma2", ("rho2",)), ("rho2",)),
    (2, "ss2", ("sigma2", ("sigma2", "r")), "r"),
    (3, "tr2", ("tau2", "r", ("sigma2", "r")), ("rho2",)),
    (4, "tsr2", ("tau2", ("sigma2", "r"), "r"), ("rho2",)),
    (5, "trr2", ("tau2", "r", ("rho2",)), "r"),
    (6, "tlr2", ("tau2", ("rho2",), "r"), "r"),
    (37, "tt2", ("tau2", ("tau2", "t", "r"), "s"), ("tau2", "t", ("tau2", "r", "s"))),
)


def _pattern(spec) -> PathTerm:
    if isinstance(spec, str):
        return Var(spec)
    return PathTerm(spec[0], tuple(_pattern(a) for a in spec[1:]))


def rw2_rule_table() -> list[RewriteRule]:
    """The seven meta-level rules; ``index`` is that of the mirrored first-level rule."""
    return [RewriteRule(i, name, _pattern(l), _pattern(r), "meta") for i, name, l, r in _RW2]


def _root_step(m: MetaTerm) -> Optional[tuple[str, MetaTerm]]:
    if m.op == "sigma2":
        (a,) = m.args
        if a.op == "rho2":
            return "sr2", a
        if a.op == "sigma2":
            return "ss2", a.args[0]
        return None
    if m.op == "tau2":
        a, b = m.args
        if b.op == "sigma2" and b.args[0] == a:
            return "tr2", MetaRho(m.source)
        if a.op == "sigma2" and a.args[0] == b:
            return "tsr2", MetaRho(m.source)
        if b.op == "rho2":
            return "trr2", a
        if a.op == "rho2":
            return "tlr2", b
        if a.op == "tau2":
            return "tt2", MetaTau(a.args[0], MetaTau(a.args[1], b))
    return None


def _rebuild(m: MetaTerm, args: tuple) -> MetaTerm:
    if m.op == "sigma2":
        return MetaSigma(args[0])
    return MetaTau(*args)


def _replace(m: MetaTerm, path: tuple, new: MetaTerm) -> MetaTerm:
    if not path:
        return new
    args = list(m.args)
    args[path[0]] = _replace(args[path[0]], path[1:], new)
    return _rebuild(m, tuple(args))


def _innermost(m: MetaTerm, path=()):
    for i, a in enumerate(m.args):
        hit = _innermost(a, path + (i,))
        if hit is not None:
            return hit
    step = _root_step(m)
    if step is not None:
        return path, step[0], step[1]
    return None


@dataclass(frozen=True)
class MetaStep:
    rule: str
    position: tuple
    before: MetaTerm
    after: MetaTerm

    def line(self, k: int) -> str:
        pos = ".".join(map(str, self.position)) or "root"
        return f"step {k}: {self.rule} @ {pos} : {meta_text(self.before)} => {meta_text(self.after)}"


@dataclass(frozen=True)
class MetaTrace:
    initial: MetaTerm
    steps: tuple
    final: MetaTerm

    @property
    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def lines(self) -> list[str]:
        return [s.line(k) for k, s in enumerate(self.steps, 1)]


def rw2_normalize(m: MetaTerm, step_limit: int = 10_000) -> MetaTrace:
    """Innermost-leftmost rw2 normalization; endpoints are checked at every step."""
    _check(m)
    ends = (m.source, m.target)
    steps = []
    cur = m
    while (hit := _innermost(cur)) is not None:
        if len(steps) >= step_limit:
            from .trs import StepLimitExceeded
            raise StepLimitExceeded(step_limit, None)
        path, name, new = hit
        nxt = _replace(cur, path, new)
        if (nxt.source, nxt.target) != ends:
            raise EndpointError(f"{name} moved the endpoints of {meta_text(cur)}")
        steps.append(MetaStep(name, path, cur, nxt))
        cur = nxt
    return MetaTrace(m, tuple(steps), cur)


def rw2_equal(x: MetaTerm, y: MetaTerm) -> bool:
    """Same endpoints and the same rw2 normal form."""
    if (x.source, x.target) != (y.source, y.target):
        return False
    return rw2_normalize(x).final == rw2_normalize(y).final


# -- independence of choice -----------------------------------------------------

SequenceLike = Union[RewriteTrace, Sequence[PathTerm]]


def _terms_and_steps(x: SequenceLike) -> tuple[list[PathTerm], list[Optional[RewriteStep]]]:
    if isinstance(x, RewriteTrace):
        return x.terms(), list(x.steps)
    terms = list(x)
    return terms, [None] * max(len(terms) - 1, 0)


def cd2_count(n: int, m: int) -> int:
    return comb(n + m - 2, n - 1)


def cd2_interleavings(theta: SequenceLike, phi: SequenceLike) -> list[RewriteTrace]:
    """Every staircase from ``tau(s1,t1)`` to ``tau(sn,tm)``.

    ``theta`` and ``phi`` are rewrite sequences, as traces or as lists of
    terms; ``n`` and ``m`` count their terms. Each result advances exactly one
    side per step, so there are ``binomial(n+m-2, n-1)`` of them.
    """
    ls, lsteps = _terms_and_steps(theta)
    rs, rsteps = _terms_and_steps(phi)
    n, m = len(ls), len(rs)
    if n == 0 or m == 0:
        raise EmptyTraceError("independence of choice needs two non-empty sequences")
    if n + m > CD2_GUARD:
        raise ValueError(f"n+m = {n + m} exceeds the enumeration guard {CD2_GUARD}")
    moves = n + m - 2
    out = []
    for lefts in combinations(range(moves), n - 1):
        lefts = set(lefts)
        i = j = 0
        cur = Tau(ls[0], rs[0])
        steps = []
        for k in range(moves):
            if k in lefts:
                src, side, i = lsteps[i], 0, i + 1
            else:
                src, side, j = rsteps[j], 1, j + 1
            nxt = Tau(ls[i], rs[j])
            name = src.rule if src is not None else "rw"
            pos = (side,) + (src.position if src is not None else ())
            steps.append(RewriteStep(name, pos, cur, nxt, src.fragment if src else "core"))
            cur = nxt
        out.append(RewriteTrace(Tau(ls[0], rs[0]), tuple(steps), cur))
    return out


def _project(x: RewriteTrace) -> Optional[tuple[list[PathTerm], list[PathTerm]]]:
    lefts, rights = [], []
    for t in x.terms():
        if t.op != "tau":
            return None
        a, b = t.args
        if not lefts or lefts[-1] != a:
            lefts.append(a)
        if not rights or rights[-1] != b:
            rights.append(b)
    for s in x.steps:
        a0, b0 = s.before.args
        a1, b1 = s.after.args
        if (a0 != a1) == (b0 != b1):
            return None
    return lefts, rights


def cd2_equal(x: RewriteTrace, y: RewriteTrace) -> bool:
    """Whether ``x`` and ``y`` interleave the same pair of sequences."""
    px, py = _project(x), _project(y)
    return px is not None and px == py
