import random

import pytest
from hypothesis import given, settings, strategies as st

from islogic.formula import (
    BOT,
    TOP,
    And,
    FormulaSyntaxError,
    Nabla,
    Neg,
    Or,
    Sequent,
    Var,
    enumerate_formulas,
    enumerate_sequents,
    format_formula,
    format_sequent,
    formula_pool,
    generalized_subformulas,
    match,
    nabla_schema,
    parse_formula,
    parse_sequent,
    random_formula,
    read_sequent_lines,
    sample_sequents,
    schema,
    subformulas,
    substitute,
)

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_examples():
    assert parse_formula("~(p & q)") == Neg(And(p, q))
    assert parse_formula("#~p | 0") == Or(Nabla(Neg(p)), BOT)
    assert parse_formula("cons(p)") == Neg(Nabla(And(p, Neg(p))))
    assert parse_formula("incons(p)") == Nabla(And(p, Neg(p)))


def test_precedence_and_association():
    # & binds tighter than |; both associate to the left
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("p | q | r") == Or(Or(p, q), r)
    assert parse_formula("p & q & r") == And(And(p, q), r)
    assert format_formula(Or(p, Or(q, r))) == "p | (q | r)"
    assert format_formula(And(Or(p, q), r)) == "(p | q) & r"


def test_unicode_input():
    assert parse_formula("¬∇p ∨ ⊥") == Or(Neg(Nabla(p)), BOT)
    assert parse_sequent("p ∧ ¬p ⊢ q") == Sequent((And(p, Neg(p)),), (q,))


def test_constants_print_as_digits():
    assert format_formula(And(TOP, BOT)) == "1 & 0"


@pytest.mark.parametrize("bad", ["p &", "(p", "p q", "~", "", "p | | q", "cons p"])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(bad)


def test_sequent_round_trip():
    s = parse_sequent("p, ~q |- p | q, #q")
    assert format_sequent(s) == "p, ~q |- p | q, #q"
    assert format_sequent(parse_sequent("|- p")) == ". |- p"
    assert parse_sequent(". |- .") == Sequent((), ())


def test_read_sequent_lines_skips_comments():
    got = read_sequent_lines(["# header", "p |- q", "", " #p |- p"])
    assert got == [parse_sequent("p |- q"), Sequent((Nabla(p),), (p,))]


def test_subformulas():
    assert set(subformulas([Nabla(p)])) == {Nabla(p), p}
    assert set(subformulas([And(p, Neg(p))])) == {And(p, Neg(p)), p, Neg(p)}
    assert subformulas([]) == ()


def test_generalized_subformulas():
    nab = nabla_schema([])
    got = set(generalized_subformulas([p], nab))
    assert got == {parse_formula(t) for t in ("p", "#p", "~#p", "#~p", "~#~p")}
    assert set(generalized_subformulas([p], schema("S"))) == {p, Neg(p)}
    assert generalized_subformulas([], schema("SNABLA")) == ()


def test_generalized_subformulas_two_variable_schema():
    got = generalized_subformulas([p, q], [Or(p, q)])
    assert set(got) == {p, q, Or(p, p), Or(p, q), Or(q, p), Or(q, q)}


def test_enumeration_counts():
    assert list(enumerate_formulas(["p"], 0)) == [p, BOT, TOP]
    # 4 atoms, 2 unary ops over them, 2 binary ops over all atom pairs
    assert len(formula_pool(["p", "q"], 1)) == 4 + 2 * 4 + 2 * 4 * 4
    # depth-2 formulas use at least one depth-1 child
    d1 = 4 + 2 * 4 + 2 * 16
    exact2 = 2 * (d1 - 4) + 2 * (d1 * d1 - 4 * 4)
    assert len(formula_pool(["p", "q"], 2)) == d1 + exact2


def test_enumeration_is_duplicate_free():
    pool = formula_pool(["p", "q"], 2, ["neg", "and", "or"])
    assert len(pool) == len(set(pool))


def test_enumerate_sequents_count():
    pool = formula_pool(["p"], 0)
    # subsets of size <= 1 on each side of a three-formula pool
    assert len(list(enumerate_sequents(pool, 1, 1))) == 4 * 4


def test_sampling_is_seeded():
    pool = formula_pool(["p", "q"], 1)
    assert sample_sequents(pool, 20, 2, 2, seed=3) == sample_sequents(pool, 20, 2, 2, seed=3)
    assert sample_sequents(pool, 20, 2, 2, seed=3) != sample_sequents(pool, 20, 2, 2, seed=4)


def test_match_and_substitute():
    pat = parse_formula("#(?p & ?q)")
    target = parse_formula("#(~r & (p | q))")
    sigma = match(pat, target)
    assert sigma == {"?p": Neg(r), "?q": Or(p, q)}
    assert substitute(pat, sigma) == target
    assert match(parse_formula("?p & ?p"), And(p, q)) is None


formulas = st.builds(lambda seed, depth: random_formula(random.Random(seed), ["p", "q", "r"], depth),
                     st.integers(0, 10**6), st.integers(0, 4))


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_print_parse_round_trip(f):
    assert parse_formula(format_formula(f)) == f


@settings(max_examples=100, deadline=None)
@given(formulas, formulas)
def test_substitution_then_match_recovers_image(f, g):
    sigma = {"p": g}
    h = substitute(f, sigma)
    pattern = substitute(f, {v: Var("?" + v) for v in f.variables()})
    found = match(pattern, h)
    assert found is not None
    assert substitute(pattern, found) == h


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_subformulas_closed(f):
    subs = set(subformulas([f]))
    assert f in subs
    for g in subs:
        assert set(g.children) <= subs
