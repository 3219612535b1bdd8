import pytest
from hypothesis import given, settings, strategies as st

from islogic.calculus import (
    DERIVABLE,
    UNDERIVABLE,
    BUILTIN_RULESETS,
    Rule,
    RuleSet,
    UnknownSymbolScope,
    analytic_universe,
    bounded_logic_equality,
    builtin_ruleset,
    calculus_oracle,
    combine,
    derives,
    derives_analytic,
    format_soundness,
    hilbert_universe,
    is_closed,
    is_sound,
    matrix_oracle,
    or_transform,
    parse_rule,
    parse_ruleset,
    resolve_calculus,
    rule_instances,
    single_conclusion_derives,
    unsound_rules,
)
from islogic.formula import And, FormulaSyntaxError, Nabla, formula_pool, parse_formula, parse_sequent
from islogic.matrix import LogicalMatrix, mc_semantic_consequence, parse_matrix_ref

F = parse_formula


def mats(*refs):
    return [parse_matrix_ref("builtin:" + r) for r in refs]


NABLA_MATRICES = mats("IS6:up_a", "IS6:up_1", "IS5:up_a", "IS5:up_1", "IS4:up_1", "IS3:top", "IS3:up_0")


def rule_body(rule):
    return rule.text().split(" : ", 1)[1]


# ---------------------------------------------------------------- rule sets

def test_parse_rule():
    r = parse_rule("r4 : #p , ~#p / .")
    assert r.name == "r4"
    assert r.plain() == ((F("#p"), F("~#p")), ())
    assert r.variables() == ("?p",)
    assert r.text() == "r4 : #p , ~#p / ."


@pytest.mark.parametrize("bad", ["r1 #p / .", "r1 : #p", ": p / p", "r1 : p / p /", "r 1 : p / p"])
def test_parse_rule_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse_rule(bad)


def test_builtin_contents():
    rn = builtin_ruleset("R_NABLA")
    assert len(rn) == 21
    assert rule_body(rn["r1"]) == ". / #p , ~#p"
    assert rule_body(rn["r4"]) == "#p , ~#p / ."
    s21 = builtin_ruleset("S21")
    assert len(s21) == 21
    assert rule_body(s21["s21"]) == ". / ~p , #p"
    assert rule_body(s21["s16"]) == "~p , #p / p"
    assert len(builtin_ruleset("S15")) == 15
    assert len(builtin_ruleset("R_B_MC")) == 18


def test_builtin_names_are_normalized():
    assert builtin_ruleset("rb_mc").name == "R_B_MC"
    assert resolve_calculus("RB_MC+RNABLA").name == "R_B_MC+R_NABLA"
    with pytest.raises(KeyError):
        builtin_ruleset("R_UNKNOWN")


@pytest.mark.parametrize("name", BUILTIN_RULESETS)
def test_builtins_respect_their_signature(name):
    rs = builtin_ruleset(name)
    for r in rs:
        assert r.connectives() <= rs.signature


def test_ruleset_rejects_duplicates_and_foreign_symbols():
    r = parse_rule("x : p / p")
    with pytest.raises(ValueError):
        RuleSet("dup", (r, r))
    with pytest.raises(ValueError):
        RuleSet("sig", (parse_rule("y : #p / p"),), frozenset({"neg", "and", "or"}))


def test_combine_renames_clashing_rules():
    a = parse_ruleset("x : p / p | q", "A")
    b = parse_ruleset("x : p & q / p", "B")
    c = combine([a, b])
    assert [r.name for r in c] == ["x", "B_x"]
    assert len(combine([a, a])) == 1


# ---------------------------------------------------------------- or-transform

def test_or_transform_examples():
    t = or_transform(builtin_ruleset("R_NABLA"))
    assert rule_body(t["r1v"]) == ". / #p | ~#p"
    assert rule_body(t["r4v"]) == "#p | r , ~#p | r / r"
    assert rule_body(t["d1"]) == "p / p | q"
    assert t.single_conclusion


def test_or_transform_picks_fresh_context_variable():
    rs = parse_ruleset("x : p , r / q , r", "X")
    t = or_transform(rs)
    assert rule_body(t["xv"]) == "p | p0 , r | p0 / q | r | p0"


@pytest.mark.parametrize("name, refs", [
    ("R_NABLA", ("IS6:up_a", "IS5:up_1", "IS3:top", "IS3:up_0")),
    ("R_B_MC", ("DM4:up_a",)),
    ("S15", ("K3:up_1", "K3:up_a")),
    ("S21", ("IS3:top", "IS3:up_0")),
])
def test_or_transform_preserves_soundness(name, refs):
    rs = builtin_ruleset(name)
    ms = mats(*refs)
    assert unsound_rules(rs, ms) == []
    assert unsound_rules(or_transform(rs), ms) == []


# ---------------------------------------------------------------- soundness

def test_soundness_examples():
    rn = builtin_ruleset("R_NABLA")
    assert is_sound(rn["r1"], mats("IS6:up_a"))
    v = is_sound(builtin_ruleset("DS").rules[0], mats("IS6:up_a"))
    assert not v and v.witness["assignment"] == {"p": "a", "q": "B"}
    assert is_sound(builtin_ruleset("EM").rules[0], mats("IS5:up_a"))


def test_nabla_rules_sound_on_all_lifted_matrices():
    assert unsound_rules(builtin_ruleset("R_NABLA"), NABLA_MATRICES) == []


def test_soundness_text():
    text = format_soundness(builtin_ruleset("DS"), mats("IS6:up_a"))
    assert text == "ds UNSOUND IS6:up_a p=a, q=B\n"
    assert format_soundness(builtin_ruleset("DS"), mats("IS6:up_1"), "records") == "CHECK ds PASS\n"


# ---------------------------------------------------------------- instances

def test_rule_instances_examples():
    rn = builtin_ruleset("R_NABLA")
    assert list(rule_instances(rn["r3"], [F("p"), F("#p"), F("##p")])) == [((F("##p"),), (F("#p"),))]
    universe = formula_pool(["p", "q"], 1, ["neg", "nabla"])[:50]
    assert len(list(rule_instances(rn["r3"], universe))) <= len(universe)
    no_and = [F("p"), F("q"), F("#p"), F("#q")]
    assert list(rule_instances(rn["r13"], no_and)) == []


def test_rule_instances_match_brute_force():
    universe = formula_pool(["p"], 2, ["neg", "nabla", "and"])
    rule = builtin_ruleset("R_NABLA")["r13"]
    got = set(rule_instances(rule, universe))
    uset = set(universe)
    expected = set()
    for a in universe:
        for b in universe:
            prem = (Nabla(a), Nabla(b))
            conc = (Nabla(And(a, b)),)
            if set(prem) <= uset and set(conc) <= uset:
                expected.add((prem, conc))
    assert got == expected


# ---------------------------------------------------------------- search

def test_derives_examples():
    rn = builtin_ruleset("R_NABLA")
    u = [F("#p"), F("~#p"), F("p")]
    assert derives(rn, [F("#p"), F("~#p")], [], u).verdict == DERIVABLE
    assert derives(rn, [], [F("#p"), F("~#p")], u).verdict == DERIVABLE
    rb = builtin_ruleset("R_B_MC")
    out = derives(rb, [F("p")], [F("q")], analytic_universe([F("p")], [F("q")], "S"))
    assert out.verdict == UNDERIVABLE
    assert F("p") in out.theory and F("q") not in out.theory
    assert is_closed(out.theory, rb, out.universe) is None
    # the separating theory is a semantic countermodel's truth set here
    assert not mc_semantic_consequence(mats("DM4:up_a"), [F("p")], [F("q")])


def test_derives_requires_query_in_universe():
    with pytest.raises(ValueError):
        derives(builtin_ruleset("R_B_MC"), [F("p")], [F("q")], [F("p")])


def test_derives_analytic_examples():
    rs = resolve_calculus("R_B_MC+R_NABLA")
    out = derives_analytic(rs, "SNABLA", [F("p & ~p")], [F("q")])
    assert not out
    assert not mc_semantic_consequence(mats("IS6:up_a"), [F("p & ~p")], [F("q")])
    assert derives_analytic(builtin_ruleset("S21"), "S", [F("~p"), F("#p")], [F("p")])
    assert derives_analytic(builtin_ruleset("R_B_MC"), "S", [F("p | q")], [F("p"), F("q")])


def test_search_text():
    out = derives_analytic(builtin_ruleset("R_B_MC"), "S", [F("p")], [F("q")])
    lines = out.text().splitlines()
    assert lines[0] == "UNDERIVABLE"
    assert lines[1].startswith("theory: {p")
    assert lines[2].startswith("universe: 4 formulas")


def test_signature_guard():
    with pytest.raises(UnknownSymbolScope):
        single_conclusion_derives(builtin_ruleset("R_B_HILBERT"), [F("p")], F("#p"))
    with pytest.raises(UnknownSymbolScope):
        derives_analytic(builtin_ruleset("R_B_MC"), "S", [F("#p")], [])


def test_single_conclusion_examples():
    hil = builtin_ruleset("R_B_HILBERT")
    out = single_conclusion_derives(hil, [F("p & q")], F("q & p"), engine="forward")
    assert out.derivable and out.trace[-1].endswith("/ q & p")
    both = resolve_calculus("R_B_HILBERT+R_NABLA_OR")
    assert single_conclusion_derives(both, [], F("#p | ~#p"), engine="forward")
    assert not single_conclusion_derives(hil, [F("p")], F("q"), engine="forward")


def test_forward_engine_needs_single_conclusion_rules():
    with pytest.raises(ValueError):
        single_conclusion_derives(builtin_ruleset("R_B_MC"), [F("p")], F("p"), engine="forward")


def test_hilbert_universe_contains_disjunction_contexts():
    u = set(hilbert_universe([F("p")], F("#p"), "S", rounds=1))
    assert {F("#p | p"), F("p | #p"), F("~#~p"), F("~#p | #p")} <= u


def test_search_and_forward_agree_on_small_pool():
    rs = builtin_ruleset("R_B_HILBERT")
    pool = formula_pool(["p"], 1, ["neg", "and", "or"])
    for a in pool:
        for b in pool:
            fwd = single_conclusion_derives(rs, [a], b, engine="forward")
            sem = mc_semantic_consequence(mats("DM4:up_a"), [a], [b])
            assert bool(fwd) == bool(sem), (a, b)


# ---------------------------------------------------------------- consequence properties

SMALL = formula_pool(["p", "q"], 1, ["neg", "nabla", "and"])
RS = resolve_calculus("R_B_MC+R_NABLA")
idx = st.integers(0, len(SMALL) - 1)


def _derives(prem, conc, universe):
    return derives(RS, prem, conc, universe).derivable


@settings(max_examples=40, deadline=None)
@given(st.lists(idx, max_size=2), st.lists(idx, max_size=2), idx)
def test_overlap_dilution_cut(prem_i, conc_i, mid_i):
    prem = [SMALL[i] for i in prem_i]
    conc = [SMALL[i] for i in conc_i]
    mid = SMALL[mid_i]
    universe = analytic_universe(prem + conc + [mid], [], "SNABLA")
    assert _derives([mid], [mid], universe)
    base = _derives(prem, conc, universe)
    if base:
        assert _derives(prem + [mid], conc, universe)
        assert _derives(prem, conc + [mid], universe)
    if _derives(prem, conc + [mid], universe) and _derives(prem + [mid], conc, universe):
        assert base


@settings(max_examples=30, deadline=None)
@given(st.lists(idx, max_size=2), st.lists(idx, min_size=1, max_size=2))
def test_derivability_is_sound(prem_i, conc_i):
    prem = [SMALL[i] for i in prem_i]
    conc = [SMALL[i] for i in conc_i]
    if derives_analytic(RS, "SNABLA", prem, conc):
        assert mc_semantic_consequence(mats("IS6:up_a"), prem, conc)


# ---------------------------------------------------------------- oracles

def test_bounded_equalities():
    up_a, up_b, up_1 = (matrix_oracle(mats(r), ("p", "q")) for r in ("IS6:up_a", "IS6:up_b", "IS6:up_1"))
    assert bounded_logic_equality(up_a, up_b, ("p", "q"), 1, 1).disagreements == []
    top6 = matrix_oracle(mats("IS6:top"), ("p", "q"))
    top3 = matrix_oracle(mats("IS3:top"), ("p", "q"))
    assert bounded_logic_equality(top6, top3, ("p", "q"), 1, 1).disagreements == []
    report = bounded_logic_equality(up_a, up_1, ("p", "q"), 1, 2)
    assert report.disagreements
    ds = parse_sequent("p, ~p | q |- q")
    assert not up_a(ds.premises, ds.conclusions) and up_1(ds.premises, ds.conclusions)


def test_calculus_oracle_against_matrix():
    calc = calculus_oracle(builtin_ruleset("R_B_MC"), "S")
    sem = matrix_oracle(mats("DM4:up_a"), ("p",))
    rep = bounded_logic_equality(calc, sem, ("p",), 1, 1, 2, 0, ["neg", "and", "or"])
    assert rep.total > 0 and rep.disagreements == []


# ---------------------------------------------------------------- nabla rules

MISSING = "r22 : p , ~#p / .\nr23 : ~#p / ~p\n"


def test_nabla_rules_leave_a_valid_sequent_underivable():
    """``p |- #p`` holds in the lifted matrix but the 21 nabla rules together
    with R_B_MC cannot reach it; two sound rules close the gap."""
    s = parse_sequent("p |- #p")
    assert mc_semantic_consequence(mats("IS6:up_a"), s.premises, s.conclusions)
    rs = resolve_calculus("R_B_MC+R_NABLA")
    assert not derives_analytic(rs, "SNABLA", s.premises, s.conclusions)
    extra = parse_ruleset(MISSING, "extra")
    assert unsound_rules(extra, NABLA_MATRICES) == []
    assert derives_analytic(combine([rs, extra]), "SNABLA", s.premises, s.conclusions)


def test_missing_rules_close_sampled_gap():
    from islogic.harness import random_sequent_crosscheck

    extra = parse_ruleset(MISSING, "extra")
    base = resolve_calculus("R_B_MC+R_NABLA")
    args = (mats("IS6:up_a"), 150, ("p", "q"), 2, 11)
    before = random_sequent_crosscheck(base, "SNABLA", *args)
    after = random_sequent_crosscheck(combine([base, extra]), "SNABLA", *args)
    assert before.disagreements
    assert all(got == "underivable" for _, _, got, _ in before.disagreements)
    assert after.disagreements == []
