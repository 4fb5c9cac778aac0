"""Rewriting, ordering and confluence tools for computational path terms."""

from .term import (
    PathTerm, Atom, Rho, Sigma, Tau, SubL, SubR, Xi, Xi1, Xi2, XiAnd, Mu, Mu1,
    Mu2, Nu, RHO, ParseError, ArityError, TermError, parse, to_text,
)
from .trs import (
    RewriteRule, RewriteStep, RewriteTrace, StepLimitExceeded, rule_table,
    rule, applicable_redexes, apply_step, normalize, rw_equal,
)
from .ordering import DEFAULT_PRECEDENCE, PrecedenceTable, OperatorStatus, rpo_greater, check_rule_orientation
from .confluence import CriticalPair, superpose, check_joinable, critical_pairs, unify
from .meta import MetaAtom, MetaRho, MetaSigma, MetaTau, rw2_rule_table, rw2_normalize, rw2_equal, cd2_interleavings, cd2_equal
from .pi1 import CIRCLE, TORUS, RP2, SurfaceElement, canonicalize, oracle_count, to_path, loop_power
from .kernel import BACKEND, normal_form

__version__ = "0.1.0"
