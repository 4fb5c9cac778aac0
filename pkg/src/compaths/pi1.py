"""Fundamental groups of the circle, torus and projective plane as loop terms.

A loop term is built from ``tau``, ``sigma``, ``rho`` and the surface's
generator atoms. ``tau(a,b)`` traverses ``a`` first. Canonicalization runs
the core rules to a right-nested chain of letters and then applies the
surface relation (``co`` swaps on the torus, ``cicl`` on the projective
plane) until the chain is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .term import ATOM, RHO, Atom, PathTerm, Sigma, Tau, replace_at, to_text
from .trs import RewriteStep, RewriteTrace, normalize, select_rules
from . import kernel

__all__ = [
    "Surface", "Circle", "Torus", "ProjectivePlane", "CIRCLE", "TORUS", "RP2",
    "SURFACES", "surface", "SurfaceElement", "SurfaceError", "ForeignAtomError",
    "SurfaceMismatch", "LoopWord", "Canonical", "loop_power", "to_path",
    "canonicalize", "oracle_count", "flatten", "compose", "inverse", "identity",
]

_LOOP_OPS = {"tau", "sigma", "rho"}


class SurfaceError(ValueError):
    pass


class ForeignAtomError(SurfaceError):
    pass


class SurfaceMismatch(SurfaceError):
    pass


@dataclass(frozen=True)
class Surface:
    name: str
    generators: tuple[str, ...]
    relation: Optional[str] = None

    def __str__(self) -> str:
        return self.name


def Circle() -> Surface:
    return Surface("circle", ("loop",))


def Torus() -> Surface:
    return Surface("torus", ("alpha", "beta"), "co")


def ProjectivePlane() -> Surface:
    return Surface("rp2", ("alpha",), "cicl")


CIRCLE, TORUS, RP2 = Circle(), Torus(), ProjectivePlane()
SURFACES = {"circle": CIRCLE, "torus": TORUS, "rp2": RP2}


def surface(name: str) -> Surface:
    try:
        return SURFACES[name]
    except KeyError:
        raise SurfaceError(f"unknown surface {name!r}; expected one of {', '.join(SURFACES)}") from None


# -- elements ---------------------------------------------------------------

Value = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class SurfaceElement:
    """Circle: winding number. Torus: ``(m, n)`` = (beta, alpha) exponents.
    Projective plane: 0 or 1."""

    surface: Surface
    value: Value

    def __post_init__(self):
        s, v = self.surface, self.value
        if s == TORUS:
            if not (isinstance(v, tuple) and len(v) == 2):
                raise SurfaceError("torus elements are (m, n) pairs")
        elif s == RP2:
            if v not in (0, 1):
                raise SurfaceError("projective plane elements are 0 or 1")
        elif not isinstance(v, int):
            raise SurfaceError("circle elements are integers")

    def __str__(self) -> str:
        if isinstance(self.value, tuple):
            return "({},{})".format(*self.value)
        return str(self.value)

    def __add__(self, other: "SurfaceElement") -> "SurfaceElement":
        return compose(self, other)

    def __neg__(self) -> "SurfaceElement":
        return inverse(self)


def identity(s: Surface) -> SurfaceElement:
    return SurfaceElement(s, (0, 0) if s == TORUS else 0)


def compose(x: SurfaceElement, y: SurfaceElement) -> SurfaceElement:
    if x.surface != y.surface:
        raise SurfaceMismatch(f"cannot compose {x.surface} and {y.surface} elements")
    s = x.surface
    if s == TORUS:
        return SurfaceElement(s, (x.value[0] + y.value[0], x.value[1] + y.value[1]))
    if s == RP2:
        return SurfaceElement(s, (x.value + y.value) % 2)
    return SurfaceElement(s, x.value + y.value)


def inverse(x: SurfaceElement) -> SurfaceElement:
    s = x.surface
    if s == TORUS:
        return SurfaceElement(s, (-x.value[0], -x.value[1]))
    if s == RP2:
        return x
    return SurfaceElement(s, -x.value)


# -- paths ------------------------------------------------------------------

def loop_power(n: int, generator: str = "loop") -> PathTerm:
    """``rho`` for 0, a left-nested tau chain for n > 0, sigma of it for n < 0."""
    if n < 0:
        return Sigma(loop_power(-n, generator))
    if n == 0:
        return RHO
    g = Atom(generator)
    out = g
    for _ in range(n - 1):
        out = Tau(out, g)
    return out


def to_path(x: SurfaceElement) -> PathTerm:
    s = x.surface
    if s == TORUS:
        m, n = x.value
        a, b = loop_power(n, "alpha"), loop_power(m, "beta")
        if m and n:
            return Tau(a, b)
        return b if m else a
    if s == RP2:
        return Atom("alpha") if x.value else RHO
    return loop_power(x.value, "loop")


# -- words ------------------------------------------------------------------

@dataclass(frozen=True)
class LoopWord:
    """Letters as ``(generator, +1 | -1)`` in traversal order."""

    letters: tuple[tuple[str, int], ...]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e > 0 else f"{g}^-1" for g, e in self.letters)


def _check_atoms(s: Surface, t: PathTerm) -> None:
    if t.op == ATOM:
        if t.name not in s.generators or t.args:
            raise ForeignAtomError(f"{to_text(t)} is not a generator of the {s.name}")
        return
    if t.op not in _LOOP_OPS:
        raise SurfaceError(f"loop terms use tau, sigma and rho only; found {t.op}")
    for a in t.args:
        _check_atoms(s, a)


def flatten(s: Surface, t: PathTerm) -> LoopWord:
    """Structural flattening, no rewriting: tau concatenates, sigma reverses and inverts."""
    _check_atoms(s, t)
    out: list[tuple[str, int]] = []
    stack = [(t, 1)]
    while stack:
        node, sign = stack.pop()
        if node.op == ATOM:
            out.append((node.name, sign))
        elif node.op == "sigma":
            stack.append((node.args[0], -sign))
        elif node.op == "tau":
            a, b = node.args
            # the later-traversed part is pushed first
            stack.extend([(a, sign), (b, sign)] if sign < 0 else [(b, sign), (a, sign)])
    return LoopWord(tuple(out))


def oracle_count(s: Surface, t: PathTerm) -> SurfaceElement:
    """Signed letter counts of the flattened word, ignoring every rule."""
    word = flatten(s, t).letters
    count = {g: 0 for g in s.generators}
    for g, e in word:
        count[g] += e
    if s == TORUS:
        return SurfaceElement(s, (count["beta"], count["alpha"]))
    if s == RP2:
        return SurfaceElement(s, count["alpha"] % 2)
    return SurfaceElement(s, count["loop"])


# -- canonicalization -----------------------------------------------------------

def _letter(t: PathTerm) -> Optional[tuple[str, int]]:
    if t.op == ATOM:
        return t.name, 1
    if t.op == "sigma" and t.args[0].op == ATOM:
        return t.args[0].name, -1
    return None


def chain_letters(t: PathTerm) -> LoopWord:
    """Letters of a core normal form ``tau(l1, tau(l2, ... lk))``."""
    out = []
    while t.op == "tau":
        out.append(_letter(t.args[0]))
        t = t.args[1]
    if t != RHO:
        out.append(_letter(t))
    if None in out:
        raise SurfaceError(f"{to_text(t)} is not a letter chain")
    return LoopWord(tuple(out))


def _surface_step(s: Surface, t: PathTerm) -> Optional[tuple[str, tuple, PathTerm]]:
    """First applicable relation step on a chain: (name, position, replacement)."""
    if s == TORUS:
        path: tuple = ()
        node = t
        while node.op == "tau":
            head, rest = node.args
            nxt = rest.args[0] if rest.op == "tau" else rest
            if _letter(head)[0] == "beta" and _letter(nxt)[0] == "alpha":
                new = Tau(nxt, Tau(head, rest.args[1])) if rest.op == "tau" else Tau(nxt, head)
                return "co", path, new
            node, path = rest, path + (1,)
        return None
    if s == RP2:
        path = ()
        node = t
        while True:
            if node.op == "sigma":
                return "cicl", path, node.args[0]
            if node.op != "tau":
                break
            head, rest = node.args
            if head.op == "sigma":
                return "cicl", path + (0,), head.args[0]
            node, path = rest, path + (1,)
        if t.op == "tau":
            head, rest = t.args
            if rest.op == ATOM:
                return "cicl", (), RHO
            if rest.op == "tau" and rest.args[0].op == ATOM:
                return "cicl", (), rest.args[1]
        return None
    return None


def _read(s: Surface, final: PathTerm) -> SurfaceElement:
    word = chain_letters(final).letters
    if s == RP2:
        return SurfaceElement(s, len(word) % 2)
    count = {g: 0 for g in s.generators}
    for g, e in word:
        count[g] += e
    if s == TORUS:
        return SurfaceElement(s, (count["beta"], count["alpha"]))
    return SurfaceElement(s, count["loop"])


@dataclass(frozen=True)
class Canonical:
    element: SurfaceElement
    word: LoopWord            # letters after core flattening
    canonical_word: LoopWord  # letters after the surface relation
    trace: Optional[RewriteTrace]

    def __str__(self) -> str:
        return str(self.element)


def canonicalize(s: Surface, t: PathTerm, trace: bool = True,
                 strategy: str = "innermost", step_limit: int = 10_000) -> Canonical:
    """Reduce a loop term to its canonical element.

    With ``trace`` every core and relation step is recorded and the trace
    ends at the normal form of ``to_path(element)``; without it the compiled
    kernel does the core normalization.
    """
    _check_atoms(s, t)
    if trace:
        rules = select_rules("core")
        steps: list[RewriteStep] = []
        cur = t
        first = None
        while True:
            core = normalize(cur, strategy, step_limit, rules=rules)
            steps.extend(core.steps)
            cur = core.final
            if first is None:
                first = cur
            hit = _surface_step(s, cur)
            if hit is None:
                break
            name, pos, new = hit
            after = replace_at(cur, pos, new)
            steps.append(RewriteStep(name, pos, cur, after, "surface"))
            cur = after
        rec = RewriteTrace(t, tuple(steps), cur)
    else:
        cur = kernel.normal_form(t)
        first = cur
        while (hit := _surface_step(s, cur)) is not None:
            name, pos, new = hit
            cur = kernel.normal_form(replace_at(cur, pos, new))
        rec = None
    return Canonical(_read(s, cur), chain_letters(first), chain_letters(cur), rec)
