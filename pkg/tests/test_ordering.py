from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from compaths.ordering import (
    DEFAULT_STATUS, MULTISET_STATUS, DEFAULT_PRECEDENCE,
    PrecedenceTable, check_rule_orientation, multiset_greater, rpo_explain,
    rpo_greater,
)
from compaths.term import RHO, Atom, parse
from compaths.trs import select_rules

from strategies import core_terms


def test_precedence_closure():
    assert DEFAULT_PRECEDENCE.greater("sigma", "rho")
    assert DEFAULT_PRECEDENCE.greater("tau", "subL")
    assert not DEFAULT_PRECEDENCE.greater("tau", "subR")
    assert not DEFAULT_PRECEDENCE.greater("rho", "sigma")
    assert DEFAULT_PRECEDENCE.greater("rho", "atom")


def test_precedence_rejects_cycles():
    with pytest.raises(ValueError):
        PrecedenceTable([("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.raises(ValueError):
        DEFAULT_PRECEDENCE.extended([("rho", "sigma")])


def test_status_defaults():
    assert DEFAULT_STATUS.of("tau") == "lex"
    assert DEFAULT_STATUS.of("sigma") == "multiset"
    assert MULTISET_STATUS.of("tau") == "multiset"


def _submultisets(items):
    for mask in product((0, 1), repeat=len(items)):
        yield [x for x, m in zip(items, mask) if m]


def _dm_oracle(A, B, gt):
    """A >> B iff B = (A - X) + Y for some non-empty X within A with every y below some x."""
    for X in _submultisets(list(A)):
        if not X:
            continue
        rest = Counter(A) - Counter(X)
        if rest - Counter(B):
            continue
        Y = Counter(B) - rest
        if all(any(gt(x, y) for x in X) for y in Y.elements()):
            return True
    return False


@given(st.lists(st.integers(0, 4), max_size=5), st.lists(st.integers(0, 4), max_size=5))
def test_multiset_extension_matches_definition(A, B):
    gt = lambda x, y: x > y
    assert multiset_greater(A, B, gt) == _dm_oracle(A, B, gt)


def test_multiset_examples():
    gt = lambda s, t: rpo_greater(s, t)
    assert multiset_greater([parse("tau(a,b)")], [Atom("a"), Atom("b")], gt)
    assert not multiset_greater([Atom("a")], [Atom("a")], gt)


@given(core_terms)
def test_rpo_irreflexive_and_subterm(t):
    assert not rpo_greater(t, t)
    for a in t.args:
        assert rpo_greater(t, a)


@given(core_terms, core_terms, core_terms)
@settings(max_examples=200)
def test_rpo_transitive_and_asymmetric(a, b, c):
    ab, bc = rpo_greater(a, b), rpo_greater(b, c)
    if ab and bc:
        assert rpo_greater(a, c)
    if ab:
        assert not rpo_greater(b, a)


def test_atoms_are_minimal_and_incomparable():
    assert rpo_greater(RHO, Atom("a"))
    assert not rpo_greater(Atom("a"), Atom("b"))
    assert not rpo_greater(Atom("b"), Atom("a"))


def test_explanations():
    ok, why = rpo_explain(parse("sigma(subL(r,s))"), parse("subR(sigma(s),sigma(r))"))
    assert ok and "sigma > subR" in why
    ok, why = rpo_explain(parse("tau(subR(s,t),u)"), parse("subR(s,tau(t,u))"))
    assert not ok and "unrelated" in why


def test_core_orientation_with_default_precedence():
    report = check_rule_orientation(select_rules("core"))
    assert len(report.entries) == 22
    assert report.not_oriented() == ["tsblr", "tsbrr"]
    assert "sigma > subR" in report["ssbl"].checks[0].reason
    assert "sigma > subL" in report["ssbr"].checks[0].reason
    assert report["tt"].oriented


def test_tt_needs_lexicographic_status():
    report = check_rule_orientation(select_rules("core"), status=MULTISET_STATUS)
    assert not report["tt"].oriented
    assert "tt" in report.not_oriented()


def test_extended_precedence_orients_everything():
    prec = DEFAULT_PRECEDENCE.extended([("tau", "subR")])
    assert check_rule_orientation(prec=prec).all_oriented


def test_context_rules_checked_under_proper_context():
    e = check_rule_orientation([r for r in select_rules("core") if r.name == "tr"]).entries[0]
    assert [c.label for c in e.checks] == ["bare", "xi1([])"]
    assert e.checks[1].lhs == parse("tau(xi1(r),xi1(sigma(r)))")


def test_summary_is_machine_readable():
    s = check_rule_orientation(select_rules("core")).summary()
    assert s["oriented"] == 20 and s["total"] == 22
    assert s["rules"]["tsblr"] == "not-oriented"
    assert s["status"] == {"tau": "lex"}
