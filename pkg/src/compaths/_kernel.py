"""Innermost normal-form kernel over hash-consed nodes.

Compiled by Cython (pure-Python mode) when the extension is built; the same
source runs unmodified as the fallback. Rules are hand-coded here,
independently of the pattern table in :mod:`compaths.trs`, and the two are
cross-checked by the test suite.
"""

from __future__ import annotations

try:
    import cython
except ImportError:  # pragma: no cover - only without Cython installed
    from . import _cython_shim as cython

from .term import PathTerm

ATOM = 0
RHO = 1
SIGMA = 2
TAU = 3
SUBL = 4
SUBR = 5
XI = 6
XI1 = 7
XI2 = 8
XIA = 9
MU = 10
MU1 = 11
MU2 = 12
NU = 13

OPCODES = {"rho": RHO, "sigma": SIGMA, "tau": TAU, "subL": SUBL, "subR": SUBR,
           "xi": XI, "xi1": XI1, "xi2": XI2, "xiA": XIA, "mu": MU, "mu1": MU1,
           "mu2": MU2, "nu": NU}
OPNAMES = {v: k for k, v in OPCODES.items()}

# relation codes for context pairs
R_SIGMA = 0    # C[r] vs C[sigma(r)]
SIGMA_R = 1    # C[sigma(r)] vs C[r]
R_RHO = 2      # C[r] vs C[rho]
RHO_R = 3      # C[rho] vs C[r]


@cython.cclass
class Node:
    op: cython.int
    n: cython.int
    a: Node
    b: Node
    c: Node
    atom: object

    def __init__(self, op, n, a, b, c, atom):
        self.op = op
        self.n = n
        self.a = a
        self.b = b
        self.c = c
        self.atom = atom


@cython.cfunc
@cython.inline
def _congruence(op: cython.int) -> cython.bint:
    return op >= XI


@cython.cclass
class Normalizer:
    """Hash-consing store plus a memo of normal forms.

    Structurally equal nodes are the same object, so equality tests in
    the rules are identity tests.
    """

    table: dict
    memo: dict
    step_limit: cython.long
    steps: cython.long
    rho: object

    def __init__(self, step_limit=10_000):
        self.table = {}
        self.memo = {}
        self.step_limit = step_limit
        self.steps = 0
        self.rho = self.mk(RHO, 0, None, None, None, None)

    def clear(self):
        self.table.clear()
        self.memo.clear()
        self.rho = self.mk(RHO, 0, None, None, None, None)

    @cython.ccall
    def mk(self, op: cython.int, n: cython.int, a, b, c, atom) -> Node:
        key = (op, n, id(a), id(b), id(c), atom)
        node = self.table.get(key)
        if node is None:
            node = Node(op, n, a, b, c, atom)
            self.table[key] = node
        return node

    @cython.cfunc
    def mk1(self, op: cython.int, a) -> Node:
        return self.mk(op, 1, a, None, None, None)

    @cython.cfunc
    def mk2(self, op: cython.int, a, b) -> Node:
        return self.mk(op, 2, a, b, None, None)

    # -- conversion ---------------------------------------------------------

    def intern(self, t: PathTerm) -> Node:
        op = t.op
        if op == "atom":
            return self.mk(ATOM, 0, None, None, None, t)
        code = OPCODES.get(op)
        if code is None:
            raise ValueError(f"cannot normalize pattern node {op!r}")
        args = t.args
        n = len(args)
        a = self.intern(args[0]) if n > 0 else None
        b = self.intern(args[1]) if n > 1 else None
        c = self.intern(args[2]) if n > 2 else None
        return self.mk(code, n, a, b, c, None)

    def extern(self, node: Node) -> PathTerm:
        if node.op == ATOM:
            return node.atom
        args = []
        if node.n > 0:
            args.append(self.extern(node.a))
        if node.n > 1:
            args.append(self.extern(node.b))
        if node.n > 2:
            args.append(self.extern(node.c))
        return PathTerm(OPNAMES[node.op], tuple(args))

    def normal_form(self, t: PathTerm) -> PathTerm:
        self.steps = 0
        if len(self.table) > 2_000_000:
            self.clear()
        return self.extern(self.nf(self.intern(t)))

    # -- rewriting ----------------------------------------------------------

    @cython.ccall
    def nf(self, x: Node) -> Node:
        cached = self.memo.get(id(x))
        if cached is not None:
            return cached
        y: Node = x
        if x.n == 1:
            y = self.mk1(x.op, self.nf(x.a))
        elif x.n == 2:
            y = self.mk2(x.op, self.nf(x.a), self.nf(x.b))
        elif x.n == 3:
            y = self.mk(x.op, 3, self.nf(x.a), self.nf(x.b), self.nf(x.c), None)
        r = self.root_step(y)
        if r is None:
            result = y
        else:
            self.steps += 1
            if self.steps > self.step_limit:
                from .trs import StepLimitExceeded
                raise StepLimitExceeded(self.step_limit, None)
            result = self.nf(r)
        self.memo[id(x)] = result
        self.memo[id(y)] = result
        return result

    @cython.cfunc
    def bound(self, a: Node, b: Node, rel: cython.int):
        if rel == R_SIGMA:
            if b.op == SIGMA and b.a is a:
                return a
        elif rel == SIGMA_R:
            if a.op == SIGMA and a.a is b:
                return b
        elif rel == R_RHO:
            if b.op == RHO:
                return a
        else:
            if a.op == RHO:
                return b
        return None

    @cython.cfunc
    def hole(self, a: Node, b: Node, rel: cython.int):
        """Path (list of child indices) of the outermost-leftmost valid hole."""
        if self.bound(a, b, rel) is not None:
            return []
        if a.op != b.op or a.n != b.n or a.n == 0 or not _congruence(a.op):
            return None
        kids_a = (a.a, a.b, a.c)
        kids_b = (b.a, b.b, b.c)
        diff = -1
        i: cython.int
        for i in range(a.n):
            if kids_a[i] is not kids_b[i]:
                if diff >= 0:
                    return None
                diff = i
        if diff >= 0:
            sub = self.hole(kids_a[diff], kids_b[diff], rel)
            if sub is None:
                return None
            sub.insert(0, diff)
            return sub
        for i in range(a.n):
            sub = self.hole(kids_a[i], kids_b[i], rel)
            if sub is not None:
                sub.insert(0, i)
                return sub
        return None

    @cython.cfunc
    def replace(self, x: Node, path: list, k: cython.int, s) -> Node:
        if k == len(path):
            return s
        i: cython.int = path[k]
        a = x.a
        b = x.b
        c = x.c
        if i == 0:
            a = self.replace(a, path, k + 1, s)
        elif i == 1:
            b = self.replace(b, path, k + 1, s)
        else:
            c = self.replace(c, path, k + 1, s)
        return self.mk(x.op, x.n, a, b, c, None)

    @cython.ccall
    def root_step(self, x: Node):
        """Apply the lowest-numbered rule matching at the root, or None."""
        op: cython.int = x.op
        if op == SIGMA:
            return self.step_sigma(x.a)
        if op == TAU:
            return self.step_tau(x.a, x.b)
        if op == SUBL:
            return self.step_subl(x.a, x.b)
        if op == SUBR:
            return self.step_subr(x.a, x.b)
        if op == MU1:
            y: Node = x.a
            if y.op == XI1:                       # 13 mx2l1
                return y.a
            if y.op == XIA:                       # 14 mx2l2
                return y.a
            return None
        if op == MU2:
            y = x.a
            if y.op == XIA:                       # 15 mx2r1
                return y.b
            if y.op == XI2:                       # 16 mx2r2
                return y.a
            return None
        if op == MU:
            return self.step_mu(x)
        if op == NU:
            y = x.a
            if y.op == XI and y.n == 1:           # 19 mxl
                return y.a
            return None
        if op == XI:
            if x.n == 2:
                p: Node = x.a
                q: Node = x.b
                if p.op == MU1 and q.op == MU2 and p.a is q.a:   # 21 mx
                    return p.a
                return None
            y = x.a
            if y.op == NU:                        # 23 xmr
                return y.a
        return None

    @cython.cfunc
    def step_sigma(self, y: Node):
        op: cython.int = y.op
        if op == RHO:                             # 1 sr
            return self.rho
        if op == SIGMA:                           # 2 ss
            return y.a
        if op == TAU:                             # 25 stss
            return self.mk2(TAU, self.mk1(SIGMA, y.b), self.mk1(SIGMA, y.a))
        if op == SUBL:                            # 26 ssbl
            return self.mk2(SUBR, self.mk1(SIGMA, y.b), self.mk1(SIGMA, y.a))
        if op == SUBR:                            # 27 ssbr
            return self.mk2(SUBL, self.mk1(SIGMA, y.b), self.mk1(SIGMA, y.a))
        if op == XI:
            if y.n == 1:                          # 28 sx
                return self.mk1(XI, self.mk1(SIGMA, y.a))
            return self.mk2(XI, self.mk1(SIGMA, y.a), self.mk1(SIGMA, y.b))  # 29 sxss
        if op == MU:
            if y.n == 1:                          # 30 sm
                return self.mk1(MU, self.mk1(SIGMA, y.a))
            if y.n == 2:                          # 31 smss
                return self.mk2(MU, self.mk1(SIGMA, y.a), self.mk1(SIGMA, y.b))
            return self.mk(MU, 3, self.mk1(SIGMA, y.a), self.mk1(SIGMA, y.b),   # 32 smsss
                           self.mk1(SIGMA, y.c), None)
        return None

    @cython.cfunc
    def step_tau(self, a: Node, b: Node):
        path = self.hole(a, b, R_SIGMA)           # 3 tr
        if path is not None:
            return self.replace(a, path, 0, self.rho)
        path = self.hole(a, b, SIGMA_R)           # 4 tsr
        if path is not None:
            return self.replace(b, path, 0, self.rho)
        if self.hole(a, b, R_RHO) is not None:    # 5 trr
            return a
        if self.hole(a, b, RHO_R) is not None:    # 6 tlr
            return b
        if b.op == SUBL and b.a.op == RHO:        # 33 tsbll
            return self.mk2(SUBL, a, b.b)
        if b.op == SUBR and b.b.op == RHO:        # 34 tsbrl
            return self.mk2(SUBL, a, b.a)
        if a.op == SUBL:                          # 35 tsblr
            return self.mk2(TAU, a.a, self.mk2(SUBR, a.b, b))
        if a.op == SUBR:                          # 36 tsbrr
            return self.mk2(SUBR, a.a, self.mk2(TAU, a.b, b))
        if a.op == TAU:                           # 37 tt
            return self.mk2(TAU, a.a, self.mk2(TAU, a.b, b))
        if b.op == TAU:
            if self.hole(a, b.a, R_SIGMA) is not None:   # 38 tts
                return b.b
            if self.hole(a, b.a, SIGMA_R) is not None:   # 39 tst
                return b.b
        return None

    @cython.cfunc
    def step_subl(self, a: Node, b: Node):
        if self.hole(a, b, R_RHO) is not None:    # 7 slr
            return a
        if a.op == SUBL:
            if self.hole(a.b, b, R_SIGMA) is not None:   # 9 sls
                return a.a
            if self.hole(a.b, b, SIGMA_R) is not None:   # 10 slss
                return a.a
        return None

    @cython.cfunc
    def step_subr(self, a: Node, b: Node):
        if self.hole(a, b, RHO_R) is not None:    # 8 srr
            return b
        if b.op == SUBR:
            if self.hole(a, b.a, R_SIGMA) is not None:   # 11 srs
                return b.b
            if self.hole(a, b.a, SIGMA_R) is not None:   # 12 srrr
                return b.b
        return None

    @cython.cfunc
    def step_mu(self, x: Node):
        first: Node = x.a
        if x.n == 3:
            if first.op == XI1:                   # 17 mx3l
                return x.b
            if first.op == XI2:                   # 18 mx3r
                return x.c
            second: Node = x.b
            third: Node = x.c
            if second.op == XI1 and third.op == XI2:   # 22 mxx
                return first
            return None
        if x.n == 2:
            if first.op == XI2:                   # 20 mxr
                return x.b
            second = x.b
            if second.op == XI2:                  # 24 mx1r
                return first
        return None


def compiled() -> bool:
    return cython.compiled
