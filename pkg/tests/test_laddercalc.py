import json

import pytest
from hypothesis import given, settings, strategies as st

from ladderlab import laddercalc as lc
from ladderlab import recfun

SIX = ("q", "i", "p", "l", "e", "r")


def derive(name_or_fb, **kw):
    fb = lc.builtin_facts(name_or_fb) if isinstance(name_or_fb, str) else name_or_fb
    closure, deriv = lc.derive_closure(fb, **kw)
    return fb, closure, deriv, lc.ladder_height(closure, deriv)


def small_base():
    fb = lc.FactBase().declare_category("A").declare_category("B")
    return fb.declare_functor("T1", "A", "B").declare_functor("U1", "B", "A")


# -- fact bases ------------------------------------------------------------------


def test_add_adjoint_to_declared_symbols():
    fb = lc.add_fact(small_base(), "adjoint(T1,U1)")
    assert "adjoint(T1,U1)" in fb and len(fb) == 1


def test_undeclared_symbol_rejected():
    with pytest.raises(lc.FactError):
        lc.add_fact(small_base(), "adjoint(T1,G)")


def test_readding_is_idempotent():
    fb = lc.add_fact(small_base(), "adjoint(T1,U1)")
    assert lc.add_fact(fb, "adjoint(T1,U1)") is fb


def test_direction_and_shape_checked():
    with pytest.raises(lc.FactError):
        lc.add_fact(small_base(), "adjoint(T1,T1)")
    with pytest.raises(lc.FactError):
        lc.add_fact(small_base(), "recollement(U1,U1,T1;U1,T1,U1)")


def test_contradictory_flag_rejected():
    fb = small_base().add("preserves_compacts(T1)")
    with pytest.raises(lc.FactError):
        fb.add("not preserves_compacts(T1)")


def test_parse_roundtrip():
    for text in ("adjoint(F,G)", "not fully_faithful(i)", "recollement(q,i,p;l,e,r)",
                 "ladder_down(q,i,p;l,e,r => e,r,r^R;i,p,p^R)"):
        assert str(lc.parse_atom(text)) == text
    with pytest.raises(lc.FactError):
        lc.parse_atom("adjoint(F)")


def test_recollement_unpacks_without_new_atoms():
    fb = lc.builtin_facts("bare")
    assert fb.holds("adjoint(i,p)") and fb.holds("fully_faithful(r)")
    assert fb.holds("kernel_equals_image(i,e)")
    assert "adjoint(i,p)" not in fb


def test_fact_json_roundtrip():
    fb = lc.builtin_facts("preprojective")
    back = lc.FactBase.from_json(json.loads(json.dumps(fb.to_json())))
    assert back == fb


def test_malformed_json():
    with pytest.raises(lc.FactError):
        lc.FactBase.from_json({"functors": {"F": {"domain": "A"}}})


# -- closure ----------------------------------------------------------------------


def test_bare_recollement_adds_nothing():
    fb, closure, deriv, _ = derive("bare")
    assert deriv.steps == () and closure == fb


def test_compact_i_produces_right_adjoints():
    _, closure, deriv, _ = derive("compact-i")
    assert "adjoint(p,p^R)" in closure and "adjoint(r,r^R)" in closure
    assert closure.signature("p^R") == ("U", "T")
    assert closure.signature("r^R") == ("T", "V")


@pytest.mark.parametrize("flag", ["preserves_compacts(i)", "preserves_compacts(e)"])
def test_height_two_criteria_are_equivalent(flag):
    fb = lc.builtin_facts("bare").declare_category("U", "compactly_generated")
    for c in ("T", "V"):
        fb = fb.declare_category(c, "compactly_generated")
    _, closure, _, rep = derive(fb.add(flag))
    for a in ("preserves_compacts(i)", "preserves_compacts(e)", "adjoint(p,p^R)", "adjoint(r,r^R)"):
        assert closure.holds(a)
    assert rep.height_down.value == 2


def test_height_two_from_an_adjoint():
    fb = lc.builtin_facts("bare")
    for c in ("U", "T", "V"):
        fb = fb.declare_category(c, "compactly_generated")
    fb = fb.declare_functor("p1", "U", "T").add("adjoint(p,p1)")
    _, closure, _, rep = derive(fb)
    assert closure.holds("preserves_compacts(i)") and closure.holds("preserves_compacts(e)")
    assert rep.height_down.value == 2


def test_height_two_needs_compact_generation():
    _, closure, _, rep = derive(lc.builtin_facts("bare").add("preserves_compacts(i)"))
    assert rep.height_down.value == 1


def test_preprojective_chain():
    _, closure, _, rep = derive("preprojective")
    for f, g in (("T1", "U1"), ("U1", "T2"), ("T2", "U2"), ("U2", "T1")):
        assert f"adjoint({f},{g})" in closure
    assert str(rep.height_down) == str(rep.height_up) == "(infinite, period 4)"


def test_derived_adjoints_certify_at_module_level(k):
    _, closure, _, _ = derive("preprojective")
    named = {"T1", "U1", "T2", "U2"}
    pairs = [a.args for a in closure.of_kind("adjoint") if set(a.args) <= named]
    assert len(pairs) == 4
    for pair in pairs:
        assert recfun.verify_adjunction(pair, k, 3, samples=10).passed


def test_negated_flag_blocks_and_is_reported():
    fb = lc.builtin_facts("compact-i").add("not preserves_compacts(e)")
    _, closure, deriv, _ = derive(fb)
    assert "preserves_compacts(e)" not in closure
    assert lc.parse_atom("preserves_compacts(e)") in deriv.conflicts


# -- heights and TTF sequences -------------------------------------------------------


@pytest.mark.parametrize("name,down,up", [("bare", 1, 1), ("compact-i", 2, 1), ("compact-e", 2, 1)])
def test_finite_heights(name, down, up):
    rep = derive(name)[3]
    assert (rep.height_down.value, rep.height_up.value) == (down, up)
    assert not rep.height_down.infinite and not rep.height_down.at_least
    assert len(rep.ttf_down.terms) == down + 2 and len(rep.ttf_down.triples) == down


def test_height_one_triple():
    rep = derive("bare")[3]
    assert rep.ttf_down.terms == ("l(V)", "i(U)", "r(V)")


def test_height_three_down():
    rep = derive(lc.builtin_facts("compact-i").add("preserves_compacts(r)"))[3]
    assert rep.height_down.value == 3
    assert len(rep.ttf_down.terms) == 5 and len(rep.ttf_down.triples) == 3
    assert len(rep.witness_down) == 5


def test_periodic_ttf_sequence():
    rep = derive("preprojective")[3]
    seq = rep.ttf_down
    assert len(seq.terms) == 6 and seq.wraps
    assert seq.terms[:2] == seq.terms[4:]
    assert seq.terms[0] == "T1(DLam)" and seq.terms[2] == "T2(DLam)"


def test_budget_exhaustion_is_a_lower_bound():
    _, _, deriv, rep = derive("preprojective", budget=3)
    assert deriv.exhausted and deriv.blocked
    assert rep.height_down.at_least and str(rep.height_down).startswith(">= ")


def test_no_recollement():
    with pytest.raises(lc.FactError):
        lc.ladder_height(small_base())


# -- traces -----------------------------------------------------------------------------


def test_trace_for_p1_cites_height_two():
    _, _, deriv, _ = derive("compact-i")
    steps = lc.explain(deriv, "adjoint(p,p^R)")
    assert [s.rule for s in steps] == ["R-H2DOWN"]
    assert "p^R" in lc.format_trace(steps)


def test_trace_for_seed_is_empty():
    _, _, deriv, _ = derive("compact-i")
    assert lc.explain(deriv, "preserves_compacts(i)") == []
    with pytest.raises(KeyError):
        lc.explain(deriv, "adjoint(q,q^L)")


@pytest.mark.parametrize("name", sorted(lc.BUILTINS))
def test_every_derived_atom_replays_from_its_trace(name):
    fb, closure, deriv, _ = derive(name)
    for a in closure.atoms:
        if a in fb:
            continue
        assert a in lc.replay(fb, lc.explain(deriv, a))


@pytest.mark.parametrize("name", sorted(lc.BUILTINS))
def test_replay_reproduces_closure(name):
    fb, closure, deriv, _ = derive(name)
    assert lc.replay(fb, deriv.steps) == closure
    again = lc.Derivation.from_json(json.loads(json.dumps(deriv.to_json())))
    assert lc.replay(again.base, again.steps) == closure


def test_replay_rejects_missing_premise():
    fb, _, deriv, _ = derive("compact-i")
    with pytest.raises(lc.ReplayError):
        lc.replay(lc.builtin_facts("bare"), deriv.steps)


def test_derivation_is_deterministic():
    a = json.dumps(derive("preprojective")[2].to_json(), sort_keys=True)
    b = json.dumps(derive("preprojective")[2].to_json(), sort_keys=True)
    assert a == b


def test_citations_cover_rules():
    assert set(lc.CITATIONS) == set(lc.RULE_IDS)
    assert all(s.rule in lc.RULE_IDS for s in derive("preprojective")[2].steps)


# -- properties over random fact bases ----------------------------------------------------

FLAG_CHOICES = [f"preserves_compacts({f})" for f in SIX] + [f"preserves_coproducts({f})" for f in SIX]


@st.composite
def fact_bases(draw):
    cg = draw(st.sets(st.sampled_from(["U", "T", "V"])))
    fb = lc.FactBase()
    for c in ("U", "T", "V"):
        fb = fb.declare_category(c, *(["compactly_generated"] if c in cg else []))
    for name, d, c in (("q", "T", "U"), ("i", "U", "T"), ("p", "T", "U"),
                       ("l", "V", "T"), ("e", "T", "V"), ("r", "V", "T")):
        fb = fb.declare_functor(name, d, c)
    fb = fb.add("recollement(q,i,p;l,e,r)")
    for flag in draw(st.lists(st.sampled_from(FLAG_CHOICES), max_size=3, unique=True)):
        fb = fb.add(flag)
    return fb


def heights(rep):
    return tuple((h.value, h.infinite, h.period, h.at_least) for h in (rep.height_down, rep.height_up))


@settings(max_examples=40, deadline=None)
@given(fact_bases(), st.permutations(["alpha", "beta", "gamma", "delta", "eps", "zeta"]))
def test_heights_invariant_under_renaming(fb, names):
    mapping = dict(zip(SIX, names))
    assert heights(derive(fb)[3]) == heights(derive(lc.rename(fb, mapping))[3])


@settings(max_examples=40, deadline=None)
@given(fact_bases(), st.sampled_from(FLAG_CHOICES + ["compactly_generated(U)", "compactly_generated(V)"]))
def test_more_facts_never_lower_the_height(fb, extra):
    before = derive(fb)[3]
    after = derive(fb.add(extra))[3]
    assert after.height_down.value >= before.height_down.value or after.height_down.infinite
    assert after.height_up.value >= before.height_up.value or after.height_up.infinite


@settings(max_examples=40, deadline=None)
@given(fact_bases())
def test_closure_is_a_fixpoint_and_typechecks(fb):
    _, closure, deriv, _ = derive(fb)
    assert lc.derive_closure(closure)[1].steps == ()
    rebuilt = lc.FactBase.from_json(closure.to_json())
    assert rebuilt == closure
    for s in deriv.steps:
        assert s.rule in lc.RULE_IDS and s.produced
