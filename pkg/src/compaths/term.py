"""Computational-path terms: syntax tree, text grammar, positions, matching.

A path term is built from atomic reasons (``r``, ``s``, ``beta(x,y)``) and
the path operators::

    rho  sigma(t)  tau(t,u)  subL(t,u)  subR(t,u)
    xi(t) xi(t,u)  xi1(t)  xi2(t)  xiA(t,u)
    mu(t) mu(t,u) mu(t,u,v)  mu1(t)  mu2(t)  nu(t)

Patterns reuse the same tree with two extra node kinds: variables and
context plugs ``C[t]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = [
    "PathTerm", "Atom", "Rho", "Sigma", "Tau", "SubL", "SubR", "Xi", "Xi1",
    "Xi2", "XiAnd", "Mu", "Mu1", "Mu2", "Nu", "Var", "Plug", "RHO", "HOLE",
    "OPERATOR_ARITIES", "CONGRUENCE_OPS", "RELATIONS", "Context",
    "TermError", "ParseError", "ArityError", "PositionError",
    "parse", "parse_pattern", "to_text", "subterm_at", "replace_at",
    "positions", "match_pattern", "substitute", "variables",
    "match_context_pair", "plug", "format_position",
]

#: operator name -> admissible arities
OPERATOR_ARITIES: dict[str, frozenset[int]] = {
    "rho": frozenset({0}),
    "sigma": frozenset({1}),
    "tau": frozenset({2}),
    "subL": frozenset({2}),
    "subR": frozenset({2}),
    "xi": frozenset({1, 2}),
    "xi1": frozenset({1}),
    "xi2": frozenset({1}),
    "xiA": frozenset({2}),
    "mu": frozenset({1, 2, 3}),
    "mu1": frozenset({1}),
    "mu2": frozenset({1}),
    "nu": frozenset({1}),
}

# Operators a rule context C[.] may pass through: the congruence
# constructors that lift a path through a term former.
CONGRUENCE_OPS = frozenset({"xi", "xi1", "xi2", "xiA", "mu", "mu1", "mu2", "nu"})

ATOM = "atom"
VAR = "var"
PLUG = "plug"
HOLE_OP = "hole"

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


class TermError(ValueError):
    pass


class ParseError(TermError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class ArityError(ParseError):
    pass


class PositionError(TermError):
    pass


class PathTerm:
    """Immutable path-term node.

    ``op`` is an operator name from :data:`OPERATOR_ARITIES`, or one of
    ``"atom"``, ``"var"``, ``"plug"``, ``"hole"``. ``name`` is set for atoms,
    variables and plugs (the context variable).
    """

    __slots__ = ("op", "args", "name", "_hash")

    def __init__(self, op: str, args: tuple = (), name: Optional[str] = None):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", tuple(args))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash((op, name, self.args)))

    def __setattr__(self, key, value):
        raise AttributeError("PathTerm is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, PathTerm) or self._hash != other._hash:
            return False
        return self.op == other.op and self.name == other.name and self.args == other.args

    def __ne__(self, other) -> bool:
        return not self == other

    def __reduce__(self):
        return (PathTerm, (self.op, self.args, self.name))

    def __repr__(self) -> str:
        return f"PathTerm({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_atom(self) -> bool:
        return self.op == ATOM

    def size(self) -> int:
        return 1 + sum(a.size() for a in self.args)

    def depth(self) -> int:
        return 1 + max((a.depth() for a in self.args), default=0)


# -- constructors -----------------------------------------------------------

def Atom(name: str, *args: PathTerm) -> PathTerm:
    if not _IDENT.match(name) or name in OPERATOR_ARITIES:
        raise TermError(f"invalid atom name {name!r}")
    return PathTerm(ATOM, args, name)


RHO = PathTerm("rho")
HOLE = PathTerm(HOLE_OP)


def Rho() -> PathTerm:
    return RHO


def Sigma(child: PathTerm) -> PathTerm:
    return PathTerm("sigma", (child,))


def Tau(first: PathTerm, second: PathTerm) -> PathTerm:
    return PathTerm("tau", (first, second))


def SubL(first: PathTerm, second: PathTerm) -> PathTerm:
    return PathTerm("subL", (first, second))


def SubR(first: PathTerm, second: PathTerm) -> PathTerm:
    return PathTerm("subR", (first, second))


def Xi(*children: PathTerm) -> PathTerm:
    if len(children) not in OPERATOR_ARITIES["xi"]:
        raise TermError(f"xi takes 1 or 2 arguments, got {len(children)}")
    return PathTerm("xi", children)


def Xi1(child: PathTerm) -> PathTerm:
    return PathTerm("xi1", (child,))


def Xi2(child: PathTerm) -> PathTerm:
    return PathTerm("xi2", (child,))


def XiAnd(first: PathTerm, second: PathTerm) -> PathTerm:
    return PathTerm("xiA", (first, second))


def Mu(*children: PathTerm) -> PathTerm:
    if len(children) not in OPERATOR_ARITIES["mu"]:
        raise TermError(f"mu takes 1 to 3 arguments, got {len(children)}")
    return PathTerm("mu", children)


def Mu1(child: PathTerm) -> PathTerm:
    return PathTerm("mu1", (child,))


def Mu2(child: PathTerm) -> PathTerm:
    return PathTerm("mu2", (child,))


def Nu(child: PathTerm) -> PathTerm:
    return PathTerm("nu", (child,))


def Var(name: str) -> PathTerm:
    return PathTerm(VAR, (), name)


def Plug(context: str, inner: PathTerm) -> PathTerm:
    """Pattern node ``C[inner]``: the context variable applied to a pattern."""
    return PathTerm(PLUG, (inner,), context)


# -- printing ---------------------------------------------------------------

def to_text(t: PathTerm) -> str:
    """Canonical text: no spaces, ``op(a,b)``."""
    op = t.op
    if op == "rho":
        return "rho"
    if op == VAR:
        return t.name
    if op == HOLE_OP:
        return "[]"
    if op == PLUG:
        return f"{t.name}[{to_text(t.args[0])}]"
    head = t.name if op == ATOM else op
    if not t.args:
        return head
    return head + "(" + ",".join(to_text(a) for a in t.args) + ")"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([a-zA-Z][a-zA-Z0-9_]*)|(\S))")


class _Parser:
    def __init__(self, text: str, pattern: bool):
        self.text = text
        self.pattern = pattern
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1) is not None:
                self.tokens.append(("ident", m.group(1), m.start(1)))
            else:
                self.tokens.append(("punct", m.group(2), m.start(2)))
            pos = m.end()
        self.i = 0

    def where(self, offset: Optional[int] = None) -> tuple[int, int]:
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        line = self.text.count("\n", 0, offset) + 1
        column = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, column

    def error(self, message: str, offset: Optional[int] = None, cls=ParseError):
        line, column = self.where(offset)
        return cls(message, line, column)

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def expect(self, punct: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != punct or tok[0] != "punct":
            found = "end of input" if tok is None else repr(tok[1])
            raise self.error(f"expected {punct!r}, found {found}")
        self.i += 1

    def parse(self) -> PathTerm:
        t = self.term()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()[1]!r} after term")
        return t

    def term(self) -> PathTerm:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        kind, value, offset = tok
        if kind != "ident":
            raise self.error(f"unexpected {value!r}")
        self.i += 1
        nxt = self.peek()
        args: list[PathTerm] = []
        if nxt is not None and nxt[1] == "[" and self.pattern:
            self.i += 1
            inner = self.term()
            self.expect("]")
            return Plug(value, inner)
        if nxt is not None and nxt[1] == "(":
            self.i += 1
            if self.peek() is not None and self.peek()[1] == ")":
                self.i += 1
            else:
                args.append(self.term())
                while self.peek() is not None and self.peek()[1] == ",":
                    self.i += 1
                    args.append(self.term())
                self.expect(")")
            has_parens = True
        else:
            has_parens = False
        if value in OPERATOR_ARITIES:
            allowed = OPERATOR_ARITIES[value]
            if len(args) not in allowed or (value == "rho" and has_parens):
                want = "/".join(str(n) for n in sorted(allowed))
                msg = f"operator {value!r} expects {want} argument(s), got {len(args)}"
                if value == "rho":
                    msg = "operator 'rho' takes no argument list"
                raise self.error(msg, offset, ArityError)
            return PathTerm(value, tuple(args))
        if self.pattern and not has_parens:
            return Var(value)
        return PathTerm(ATOM, tuple(args), value)


def parse(text: str) -> PathTerm:
    """Parse a ground path term.

    >>> to_text(parse("tau( tau(t, r), s )"))
    'tau(tau(t,r),s)'
    """
    return _Parser(text, pattern=False).parse()


def parse_pattern(text: str) -> PathTerm:
    """Parse a rule pattern: bare identifiers are variables, ``C[p]`` a plug."""
    return _Parser(text, pattern=True).parse()


# -- positions --------------------------------------------------------------

def format_position(p: tuple[int, ...]) -> str:
    return ".".join(str(i) for i in p) if p else "root"


def subterm_at(t: PathTerm, p) -> PathTerm:
    for depth, i in enumerate(p):
        if not 0 <= i < len(t.args):
            raise PositionError(f"position {format_position(tuple(p))} invalid at depth {depth}")
        t = t.args[i]
    return t


def replace_at(t: PathTerm, p, s: PathTerm) -> PathTerm:
    p = tuple(p)
    if not p:
        return s
    i = p[0]
    if not 0 <= i < len(t.args):
        raise PositionError(f"position {format_position(p)} invalid")
    args = list(t.args)
    args[i] = replace_at(args[i], p[1:], s)
    return PathTerm(t.op, tuple(args), t.name)


def positions(t: PathTerm, order: str = "pre") -> Iterator[tuple[int, ...]]:
    """Positions of ``t`` in pre-order (outermost-leftmost) or post-order.

    Atom arguments are opaque and not visited.
    """
    def walk(node, path):
        if order == "pre":
            yield path
        if node.op != ATOM:
            for i, child in enumerate(node.args):
                yield from walk(child, path + (i,))
        if order == "post":
            yield path
    return walk(t, ())


# -- matching ---------------------------------------------------------------

def variables(pattern: PathTerm) -> set[str]:
    if pattern.op == VAR:
        return {pattern.name}
    out: set[str] = set()
    for a in pattern.args:
        out |= variables(a)
    return out


def match_pattern(pattern: PathTerm, t: PathTerm, subst: Optional[dict] = None) -> Optional[dict]:
    """First-order matching; repeated variables must bind equal terms."""
    subst = {} if subst is None else dict(subst)
    return subst if _match(pattern, t, subst) else None


def _match(p: PathTerm, t: PathTerm, subst: dict) -> bool:
    if p.op == VAR:
        bound = subst.get(p.name)
        if bound is None:
            subst[p.name] = t
            return True
        return bound == t
    if p.op != t.op or p.name != t.name or len(p.args) != len(t.args):
        return False
    return all(_match(pa, ta, subst) for pa, ta in zip(p.args, t.args))


def substitute(pattern: PathTerm, subst: dict, contexts: Optional[dict] = None) -> PathTerm:
    """Instantiate a pattern; plugs ``C[p]`` are filled from ``contexts``."""
    op = pattern.op
    if op == VAR:
        return subst.get(pattern.name, pattern)
    if op == PLUG:
        inner = substitute(pattern.args[0], subst, contexts)
        if contexts is None or pattern.name not in contexts:
            return PathTerm(PLUG, (inner,), pattern.name)
        return plug(contexts[pattern.name], inner)
    if not pattern.args:
        return pattern
    return PathTerm(op, tuple(substitute(a, subst, contexts) for a in pattern.args), pattern.name)


# -- one-hole contexts ------------------------------------------------------

@dataclass(frozen=True)
class Context:
    """A term with a single hole at ``position``."""

    term: PathTerm
    position: tuple[int, ...]

    @property
    def is_bare(self) -> bool:
        return not self.position

    def __str__(self) -> str:
        return to_text(self.term)


BARE = Context(HOLE, ())


def plug(ctx: Context, t: PathTerm) -> PathTerm:
    return replace_at(ctx.term, ctx.position, t)


#: relation tag -> (left element, right element) given the bound term x
RELATIONS = {
    "r-vs-sigma": (lambda x: x, lambda x: Sigma(x)),
    "sigma-vs-r": (lambda x: Sigma(x), lambda x: x),
    "r-vs-rho": (lambda x: x, lambda x: RHO),
    "rho-vs-r": (lambda x: RHO, lambda x: x),
    "equal": (lambda x: x, lambda x: x),
}


def _relation_binding(relation: str, a: PathTerm, b: PathTerm) -> Optional[PathTerm]:
    if relation == "r-vs-sigma":
        return a if b.op == "sigma" and b.args[0] == a else None
    if relation == "sigma-vs-r":
        return b if a.op == "sigma" and a.args[0] == b else None
    if relation == "r-vs-rho":
        return a if b.op == "rho" else None
    if relation == "rho-vs-r":
        return b if a.op == "rho" else None
    if relation == "equal":
        return a if a == b else None
    raise ValueError(f"unknown relation {relation!r}")


def match_context_pair(a: PathTerm, b: PathTerm, relation: str,
                       frames=CONGRUENCE_OPS) -> Optional[tuple[Context, PathTerm]]:
    """Find ``C`` and ``x`` with ``a = C[left(x)]`` and ``b = C[right(x)]``.

    The search tries the bare hole first, then descends through nodes on
    which ``a`` and ``b`` agree except in at most one argument; the first
    (outermost-leftmost) hole satisfying ``relation`` wins. ``frames``
    restricts which operators the context may pass through; ``None``
    allows any non-atom operator.
    """
    found = _find_hole(a, b, relation, frames, ())
    if found is None:
        return None
    path, bound = found
    return Context(replace_at(a, path, HOLE), path), bound


def _find_hole(a, b, relation, frames, path):
    bound = _relation_binding(relation, a, b)
    if bound is not None:
        return path, bound
    if (a.op != b.op or a.name != b.name or len(a.args) != len(b.args)
            or a.op in (ATOM, VAR, PLUG) or not a.args
            or (frames is not None and a.op not in frames)):
        return None
    differing = [i for i, (x, y) in enumerate(zip(a.args, b.args)) if x != y]
    if len(differing) > 1:
        return None
    candidates = differing if differing else range(len(a.args))
    for i in candidates:
        found = _find_hole(a.args[i], b.args[i], relation, frames, path + (i,))
        if found is not None:
            return found
    return None
