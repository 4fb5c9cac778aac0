"""Seeded random path terms for property tests and benchmarks."""

from __future__ import annotations

import random

from .term import RHO, Atom, PathTerm, Sigma, Tau

CORE_OPS = ("sigma", "tau", "tau", "subL", "subR")
MIXED_OPS = CORE_OPS + ("xi", "xi1", "xi2", "xiA", "mu", "mu1", "mu2", "nu")
_ARITY_CHOICES = {"sigma": (1,), "tau": (2,), "subL": (2,), "subR": (2,),
                  "xi": (1, 2), "xi1": (1,), "xi2": (1,), "xiA": (2,),
                  "mu": (1, 2, 3), "mu1": (1,), "mu2": (1,), "nu": (1,)}


def random_term(rng: random.Random, depth: int = 7, atoms=("a", "b", "c"),
                ops=CORE_OPS, leaf_p: float = 0.3, rho_p: float = 0.2) -> PathTerm:
    """A term of depth at most ``depth`` (a leaf has depth 1)."""
    if depth <= 1 or rng.random() < leaf_p:
        if rng.random() < rho_p:
            return RHO
        return Atom(rng.choice(atoms))
    op = rng.choice(ops)
    n = rng.choice(_ARITY_CHOICES[op])
    return PathTerm(op, tuple(random_term(rng, depth - 1, atoms, ops, leaf_p, rho_p)
                              for _ in range(n)))


def random_loop_term(rng: random.Random, generators, depth: int = 8,
                     leaf_p: float = 0.25, rho_p: float = 0.1) -> PathTerm:
    """A term over tau, sigma, rho and the given generator atoms."""
    if depth <= 1 or rng.random() < leaf_p:
        if rng.random() < rho_p:
            return RHO
        return Atom(rng.choice(generators))
    if rng.random() < 0.3:
        return Sigma(random_loop_term(rng, generators, depth - 1, leaf_p, rho_p))
    return Tau(random_loop_term(rng, generators, depth - 1, leaf_p, rho_p),
               random_loop_term(rng, generators, depth - 1, leaf_p, rho_p))
