from hypothesis import given, strategies as st

from compaths.confluence import (
    CriticalPair, apply_subst, bare_instance, check_joinable, critical_pairs,
    reachable_normal_forms, superpose, unify,
)
from compaths.term import RHO, Atom, PathTerm, Var, parse, parse_pattern
from compaths.trs import apply_step, rule, select_rules


def test_unify_basic_and_occurs_check():
    s, t = parse_pattern("tau(r,sigma(s))"), parse_pattern("tau(sigma(u),v)")
    mgu = unify(s, t)
    assert apply_subst(s, mgu) == apply_subst(t, mgu)
    assert unify(Var("r"), parse_pattern("sigma(r)")) is None
    assert unify(parse_pattern("sigma(r)"), parse_pattern("tau(r,s)")) is None
    assert unify(Var("r"), Var("r")) == {}


_pat = st.recursive(
    st.one_of(st.sampled_from(["x", "y", "z"]).map(Var), st.just(RHO)),
    lambda c: st.one_of(st.builds(lambda a: PathTerm("sigma", (a,)), c),
                        st.builds(lambda a, b: PathTerm("tau", (a, b)), c, c)),
    max_leaves=6)


@given(_pat, _pat)
def test_unifier_unifies(s, t):
    mgu = unify(s, t)
    if mgu is not None:
        assert apply_subst(s, mgu) == apply_subst(t, mgu)


def test_bare_instance_drops_contexts():
    assert bare_instance(rule("tr").lhs) == parse_pattern("tau(r,sigma(r))")


def _find(pairs, inner, outer):
    return [cp for cp in pairs if cp.inner == inner and cp.outer == outer]


def test_sr_inside_ss():
    (cp,) = _find(superpose([rule("sr"), rule("ss")]), "sr", "ss")
    assert cp.peak == parse("sigma(sigma(rho))")
    assert (cp.left, cp.right) == (parse("sigma(rho)"), RHO)
    cp = check_joinable(cp)
    assert cp.joinable and cp.normal_form == RHO


def test_ss_inside_stss():
    pairs = _find(superpose([rule("ss"), rule("stss")]), "ss", "stss")
    assert pairs == []  # sigma(sigma(x)) never sits under sigma(tau(..))
    pairs = _find(superpose([rule("ss"), rule("stss")]), "stss", "ss")
    (cp,) = pairs
    assert cp.peak == parse("sigma(sigma(tau(r1,s1)))")
    assert check_joinable(cp).joinable


def test_no_overlap_no_pairs():
    assert superpose([rule("mx2l1"), rule("sr")]) == []


def test_root_self_overlap_excluded():
    assert all(not (cp.inner == cp.outer and cp.position == ()) for cp in superpose())


def test_rule_39_peak_joins_at_v():
    cp = CriticalPair("tst", "tt", (), parse("tau(sigma(a),tau(a,v))"), Atom("v"),
                      parse("tau(sigma(a),tau(a,v))"))
    cp = check_joinable(cp)
    assert cp.joinable and cp.normal_form == Atom("v")


def test_peaks_rewrite_to_both_results():
    rules = {r.name: r for r in select_rules("core")}
    for cp in superpose(rules.values()):
        assert apply_step(cp.peak, rules[cp.inner], cp.position).after == cp.left
        assert apply_step(cp.peak, rules[cp.outer], ()).after == cp.right


def test_groupoid_subsystem_is_locally_confluent():
    names = ["sr", "ss", "tr", "tsr", "trr", "tlr", "stss", "tt", "tts", "tst"]
    rules = [rule(n) for n in names]
    pairs = [check_joinable(cp, rules) for cp in superpose(rules)]
    assert pairs and all(cp.joinable for cp in pairs)
    without = [r for r in rules if r.name not in ("tts", "tst")]
    assert any(not check_joinable(cp, without).joinable for cp in superpose(without))


def test_deleting_38_39_breaks_joinability():
    pairs = critical_pairs("core", exclude=["tts", "tst"])
    bad = [cp for cp in pairs if not cp.joinable]
    assert bad
    assert any(cp.peak == parse("tau(tau(t,r1),sigma(r1))") or cp.inner == "tr" for cp in bad)


def test_substitution_overlap_is_genuinely_unjoinable():
    (cp,) = [c for c in _find(critical_pairs("core"), "tsbll", "tt") if c.position == ()]
    assert cp.joinable is False
    nfs = reachable_normal_forms(cp.peak, select_rules("core"))
    assert nfs == {parse("subL(tau(t,r),s1)"), parse("tau(t,subL(r,s1))")}


def test_records_are_stable():
    (cp,) = _find(critical_pairs("core"), "sr", "ss")
    assert cp.record() == {"inner": "sr", "outer": "ss", "position": "0",
                           "peak": "sigma(sigma(rho))", "left": "sigma(rho)",
                           "right": "rho", "joinable": True, "normal_form": "rho"}
