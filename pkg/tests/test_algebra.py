import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from islogic.algebra import (
    ALGEBRA_NAMES,
    DM_AXIOMS,
    IS_AXIOMS,
    STONE_IDENTITY,
    AlgebraError,
    FormatError,
    UnknownSymbolError,
    all_subuniverses,
    check_axioms,
    check_identity,
    check_quasi_identity,
    format_algebra,
    hat_reduct,
    is_homomorphism,
    make_named_algebra,
    nabla_lift,
    parse_algebra,
    product,
    projection,
    subalgebra,
    subuniverse_generated,
)
from islogic.formula import parse_formula
from islogic.matrix import algebra_isomorphism

IS6 = make_named_algebra("IS6")

# Belnap pairs (told true, told false); a is "both", b is "neither"
PAIRS = {"0": (0, 1), "a": (1, 1), "b": (0, 0), "1": (1, 0)}
BY_PAIR = {v: k for k, v in PAIRS.items()}


def test_dm4_tables_match_pair_model():
    dm = make_named_algebra("DM4")
    for x, y in itertools.product(PAIRS, repeat=2):
        (t1, f1), (t2, f2) = PAIRS[x], PAIRS[y]
        assert dm.apply("and", x, y) == BY_PAIR[(t1 & t2, f1 | f2)]
        assert dm.apply("or", x, y) == BY_PAIR[(t1 | t2, f1 & f2)]
    for x in PAIRS:
        t, f = PAIRS[x]
        assert dm.apply("neg", x) == BY_PAIR[(f, t)]


def test_is6_nabla_and_negation():
    assert IS6.apply("nabla", "0") == "T"
    assert IS6.apply("neg", "a") == "a"
    assert IS6.apply("neg", "b") == "b"
    assert IS6.apply("neg", "B") == "T"
    assert [IS6.apply("nabla", x) for x in IS6.elements] == ["B", "T", "T", "T", "T", "T"]


def test_is2_nabla_is_identity():
    is2 = make_named_algebra("IS2")
    assert all(is2.apply("nabla", x) == x for x in is2.elements)


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_builtin_axioms(name):
    assert all(v for _, v in check_axioms(make_named_algebra(name)))


def test_axiom_lists_cover_the_identity_suite():
    assert {n for n, _, _ in IS_AXIOMS} == {"IS1", "IS2", "IS3", "IS4"}
    assert {"DM1", "DM2", "DM3", "distrib"} <= {n for n, _, _ in DM_AXIOMS}
    assert STONE_IDENTITY[1] == "~#x | ~#~#x"


def test_unknown_algebra():
    with pytest.raises(KeyError):
        make_named_algebra("IS7")


def test_nabla_lift_shapes():
    assert algebra_isomorphism(nabla_lift(make_named_algebra("DM4")), IS6) is not None
    assert algebra_isomorphism(nabla_lift(make_named_algebra("K3")), make_named_algebra("IS5")) is not None
    assert algebra_isomorphism(nabla_lift(make_named_algebra("B2")), make_named_algebra("IS4")) is not None
    lifted = nabla_lift(make_named_algebra("B2"))
    assert lifted.apply("and", "T", "1") == "1"


def test_nabla_lift_rejects_is_algebra():
    with pytest.raises(AlgebraError):
        nabla_lift(IS6)


def test_nabla_lift_primes_clashing_names():
    dm = make_named_algebra("DM4")
    renamed = type(dm)(dm.signature, ("B", "a", "b", "T"), dict(dm.tables), "clash")
    lifted = nabla_lift(renamed)
    assert len(set(lifted.elements)) == 6
    assert lifted.elements[0] != "B" and lifted.elements[-1] != "T"


def test_hat_reduct():
    hat = hat_reduct(nabla_lift(make_named_algebra("DM4")))
    assert hat.signature.name == "DM"
    assert hat.size == 6
    assert np.array_equal(hat.tables["and"], IS6.tables["and"])
    is3 = hat_reduct(make_named_algebra("IS3"))
    assert [is3.apply("neg", x) for x in is3.elements] == ["T", "0", "B"]


def test_products():
    b2 = make_named_algebra("B2")
    four = product([b2, b2])
    assert four.size == 4
    assert all(v for _, v in check_axioms(four))
    assert check_identity(four, "x | ~x", "1")
    assert product([IS6, IS6]).size == 36
    k3 = make_named_algebra("K3")
    assert algebra_isomorphism(product([k3]), k3) is not None


def test_projection_is_homomorphism():
    k3, b2 = make_named_algebra("K3"), make_named_algebra("B2")
    prod = product([k3, b2])
    for i, factor in enumerate((k3, b2)):
        assert is_homomorphism(projection(prod, [k3, b2], i), prod, factor)


def test_product_cap():
    with pytest.raises(Exception):
        product([IS6] * 5, cap=1000)


def test_generated_subuniverses():
    # the constants are the new bottom and top, and negation swaps them
    assert subuniverse_generated(IS6, []) == {"B", "T"}
    # a is a negation fixpoint and nabla a is T, so nothing else appears
    assert subuniverse_generated(IS6, ["a"]) == {"B", "a", "T"}
    assert subuniverse_generated(IS6, ["a", "b"]) == set(IS6.elements)
    assert subuniverse_generated(IS6, ["0"]) == {"B", "0", "1", "T"}


def test_subuniverses_are_closed():
    for u in all_subuniverses(IS6):
        assert subuniverse_generated(IS6, u) == u


def test_subalgebra_rejects_non_subuniverse():
    with pytest.raises(AlgebraError):
        subalgebra(IS6, ["B", "a"])


def test_homomorphisms():
    ident = {x: x for x in IS6.elements}
    assert is_homomorphism(ident, IS6, IS6)
    swap = dict(ident, a="b", b="a")
    assert is_homomorphism(swap, IS6, IS6)
    collapse = dict(ident, **{"0": "B"})
    assert not is_homomorphism(collapse, IS6, IS6)


def test_identities_with_witnesses():
    assert check_identity(IS6, "~#x & #x", "0")
    v = check_identity(IS6, "x | ~x", "1")
    assert not v
    # the odometer reaches 0 first; a is a countermodel too
    assert v.witness["assignment"] == {"x": "0"}
    assert IS6.evaluate(parse_formula("x | ~x"), {"x": "a"}) == "a"
    assert check_identity(IS6, "~#x | ~#~#x", "1")


def test_quasi_identities():
    assert check_quasi_identity(IS6, [("g", "1")], ("g", "1"))
    assert check_quasi_identity(IS6, [("x", "1")], ("#x", "1"))
    v = check_quasi_identity(IS6, [("#x", "1")], ("x", "1"))
    assert not v and v.witness["assignment"] == {"x": "0"}


def test_quasi_identity_premise_bound():
    with pytest.raises(Exception):
        check_quasi_identity(IS6, [("x", "x")] * 5, ("x", "x"))


def test_unknown_symbol_in_term():
    with pytest.raises(UnknownSymbolError):
        check_identity(make_named_algebra("DM4"), "#x", "x")


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_format_round_trip(name):
    a = make_named_algebra(name)
    assert parse_algebra(format_algebra(a)) == a


@pytest.mark.parametrize("text", [
    "[algebra]\nsignature = DM\nelements = 0,1\nop neg = 1,0\nop and = 0,0,0,1\nop or = 0,1,1,1\nop bot = 0\n",
    "[algebra]\nsignature = DM\nelements = 0,1\nop neg = 1,0\nop and = 0,0,0\nop or = 0,1,1,1\nop bot = 0\nop top = 1\n",
    "[algebra]\nsignature = XX\nelements = 0\n",
    "signature = DM\n",
    "[algebra]\nsignature = DM\nelements = 0,1\nop neg = 1,2\nop and = 0,0,0,1\nop or = 0,1,1,1\nop bot = 0\nop top = 1\n",
])
def test_format_errors(text):
    with pytest.raises(FormatError):
        parse_algebra(text)


terms = st.sampled_from(["x", "~x", "#x", "x & y", "x | y", "#(x | y)", "~#~x", "#x & ~y", "0", "1"])


@settings(max_examples=60, deadline=None)
@given(terms, terms)
def test_identity_checker_matches_pointwise_evaluation(lhs, rhs):
    v = check_identity(IS6, lhs, rhs)
    fl, fr = parse_formula(lhs), parse_formula(rhs)
    holds = all(IS6.evaluate(fl, {"x": x, "y": y}) == IS6.evaluate(fr, {"x": x, "y": y})
                for x in IS6.elements for y in IS6.elements)
    assert bool(v) == holds
