import itertools

import pytest
from hypothesis import given, settings, strategies as st

from islogic.algebra import ALGEBRA_NAMES, FormatError, make_named_algebra
from islogic.formula import formula_pool, parse_formula, parse_sequent
from islogic.matrix import (
    DESIGNATION_TOKENS,
    Congruence,
    LogicalMatrix,
    MatrixOracle,
    SignatureMismatch,
    builtin_matrix,
    format_filters,
    format_matrix,
    format_verdict,
    is_congruence,
    is_reduced,
    lattice_filters,
    lattice_filters_brute,
    leibniz_by_enumeration,
    leibniz_by_polynomials,
    leibniz_by_translation,
    leibniz_congruence,
    matrix_hat,
    matrix_isomorphism,
    matrix_nabla_lift,
    matrix_product,
    mc_semantic_consequence,
    parse_matrices,
    parse_matrix_ref,
    quotient,
    reduce,
    semantic_consequence,
    submatrix,
)


def m(ref):
    return parse_matrix_ref("builtin:" + ref)


def builtin_filter_matrices():
    out = []
    for name in ALGEBRA_NAMES:
        a = make_named_algebra(name)
        for f in lattice_filters(a, include_improper=False):
            out.append(LogicalMatrix(a, frozenset(f.elements), f"{name}:up_{f.generator}"))
    return out


def brute_consequence(matrix, premises, conclusions):
    a = matrix.algebra
    variables = sorted({v for f in premises + conclusions for v in f.variables()})
    for values in itertools.product(a.elements, repeat=len(variables)):
        env = dict(zip(variables, values))
        if all(a.evaluate(f, env) in matrix.designated for f in premises) and \
                not any(a.evaluate(f, env) in matrix.designated for f in conclusions):
            return False
    return True


def test_builtin_references():
    assert m("IS6:top").designated == {"T"}
    assert m("IS6:up_a").designated == {"a", "1", "T"}
    assert m("DM4:up_1").designated == {"1"}
    assert m("IS3:up_0").designated == {"0", "T"}
    assert m("IS6:up_a").label() == "IS6:up_a"
    assert set(DESIGNATION_TOKENS) == {"top", "up_0", "up_a", "up_b", "up_1"}
    with pytest.raises(ValueError):
        parse_matrix_ref("IS6:up_a")


def test_semantic_consequence_examples():
    p, q = parse_formula("p"), parse_formula("q")
    assert not semantic_consequence(m("DM4:up_a"), [parse_formula("p & ~p")], q)
    assert semantic_consequence(m("DM4:up_1"), [parse_formula("p & (~p | q)")], q)
    v = semantic_consequence(m("IS6:up_a"), [p], parse_formula("~#~p"))
    assert not v and v.witness["assignment"] == {"p": "a"}
    assert v.witness["matrix"] == "IS6:up_a"


def test_multiple_conclusion_examples():
    p, np_ = parse_formula("p"), parse_formula("~p")
    assert mc_semantic_consequence(m("K3:up_a"), [], [p, np_])
    v = mc_semantic_consequence(m("DM4:up_a"), [], [p, np_])
    assert not v and v.witness["assignment"] == {"p": "b"}
    assert mc_semantic_consequence(m("IS6:up_a"), [parse_formula("#q & p")], [parse_formula("#q & p")])


def test_consequence_over_several_matrices_names_the_failing_one():
    s = parse_sequent("p & (~p | q) |- q")
    v = mc_semantic_consequence([m("IS6:up_1"), m("IS6:up_a")], s.premises, s.conclusions)
    assert not v and v.witness["matrix_index"] == 1
    assert v.witness["assignment"] == {"p": "a", "q": "B"}


def test_signature_mismatch():
    with pytest.raises(Exception):
        semantic_consequence(m("DM4:up_a"), [], parse_formula("#p"))


def test_verdict_text():
    v = mc_semantic_consequence(m("DM4:up_a"), [], [parse_formula("p | ~p")])
    assert format_verdict(v) == "NO\nmatrix: DM4:up_a\nassignment: p=b\nvalues: p | ~p = b\n"
    assert format_verdict(mc_semantic_consequence(m("DM4:up_a"), [], [parse_formula("1")])) == "YES\n"


seq_strategy = st.builds(
    lambda i, j, k: (i, j, k), st.integers(0, 43), st.integers(0, 43), st.integers(0, 43))
POOL = formula_pool(["p", "q"], 1)


@settings(max_examples=80, deadline=None)
@given(seq_strategy, st.sampled_from(["IS6:up_a", "IS6:top", "IS5:up_1", "IS3:up_0", "IS4:up_1"]))
def test_kernel_matches_brute_force(idx, ref):
    i, j, k = idx
    prem, conc = [POOL[i], POOL[j]], [POOL[k]]
    mat = m(ref)
    assert bool(mc_semantic_consequence(mat, prem, conc)) == brute_consequence(mat, prem, conc)


@settings(max_examples=80, deadline=None)
@given(seq_strategy)
def test_oracle_matches_kernel(idx):
    i, j, k = idx
    mats = [m("IS5:up_1"), m("IS5:up_a")]
    oracle = MatrixOracle(mats, ("p", "q"))
    got = oracle([POOL[i]], [POOL[j], POOL[k]])
    ref = mc_semantic_consequence(mats, [POOL[i]], [POOL[j], POOL[k]])
    assert bool(got) == bool(ref)
    if not got:
        assert got.witness["assignment"] == ref.witness["assignment"]


# ---------------------------------------------------------------- consequence properties

@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 43), max_size=2), st.lists(st.integers(0, 43), max_size=2),
       st.integers(0, 43))
def test_dilution_and_cut(prem_i, conc_i, mid_i):
    mat = m("IS6:up_a")
    prem = [POOL[i] for i in prem_i]
    conc = [POOL[i] for i in conc_i]
    mid = POOL[mid_i]
    holds = bool(mc_semantic_consequence(mat, prem, conc))
    if holds:
        assert mc_semantic_consequence(mat, prem + [mid], conc)
        assert mc_semantic_consequence(mat, prem, conc + [mid])
    # cut on a single formula
    if mc_semantic_consequence(mat, prem, conc + [mid]) and mc_semantic_consequence(mat, prem + [mid], conc):
        assert holds


# ---------------------------------------------------------------- Leibniz

def test_leibniz_examples():
    theta = leibniz_congruence(m("IS6:top"))
    assert str(theta) == "{B} {0,a,b,1} {T}"
    assert leibniz_congruence(m("IS6:up_1")).is_identity
    assert leibniz_congruence(m("IS6:up_a")).is_identity
    assert str(leibniz_congruence(m("IS6:up_0"))) == "{B} {0,a,b,1} {T}"


@pytest.mark.parametrize("mat", builtin_filter_matrices(), ids=lambda x: x.name)
def test_leibniz_methods_agree(mat):
    theta = leibniz_congruence(mat)
    assert is_congruence(mat.algebra, theta.labels)
    assert theta == leibniz_by_enumeration(mat)
    assert theta == leibniz_by_polynomials(mat)
    if mat.algebra.signature.name == "DM":
        assert theta == leibniz_by_translation(mat)


def test_leibniz_of_trivial_designations():
    a = make_named_algebra("IS6")
    for des in (frozenset(), frozenset(a.elements)):
        theta = leibniz_congruence(LogicalMatrix(a, des))
        assert len(theta.blocks()) == 1


def test_congruence_helpers():
    c = Congruence.from_labels("xyz", [5, 5, 7])
    assert c.blocks() == [("x", "y"), ("z",)]
    assert c.related("x", "y") and not c.related("x", "z")
    assert Congruence.identity("xyz").refines(c)
    assert not c.refines(Congruence.identity("xyz"))


def test_reductions():
    red = reduce(m("IS6:top"))
    assert red.algebra.size == 3
    assert matrix_isomorphism(red, m("IS3:top")) is not None
    assert matrix_isomorphism(reduce(m("IS6:up_0")), m("IS3:up_0")) is not None
    assert reduce(m("IS6:up_1")) == m("IS6:up_1")


@pytest.mark.parametrize("mat", builtin_filter_matrices(), ids=lambda x: x.name)
def test_reduce_idempotent(mat):
    once = reduce(mat)
    assert is_reduced(once)
    assert matrix_isomorphism(reduce(once), once) is not None


def test_quotient_is_strict_homomorphic_image():
    mat = m("IS6:top")
    q = quotient(mat, leibniz_congruence(mat))
    assert q.algebra.elements == ("B", "0", "T")
    assert q.designated == {"T"}


# ---------------------------------------------------------------- constructions

def test_matrix_nabla_lift():
    assert matrix_isomorphism(matrix_nabla_lift(m("DM4:up_a")), m("IS6:up_a")) is not None
    assert matrix_isomorphism(matrix_nabla_lift(m("K3:up_1")), m("IS5:up_1")) is not None
    assert matrix_nabla_lift(m("B2:up_1")).designated == {"1", "T"}


@pytest.mark.parametrize("ref", ["DM4:up_a", "DM4:up_1", "K3:up_a", "K3:up_1", "B2:up_1"])
def test_hat_reduction_recovers_matrix(ref):
    hat = matrix_hat(m(ref))
    assert hat.algebra.signature.name == "DM"
    assert hat.algebra.size == m(ref).algebra.size + 2
    assert matrix_isomorphism(reduce(hat), m(ref)) is not None


def test_hat_designation():
    assert matrix_hat(m("DM4:up_a")).designated == {"a", "1", "T"}


def test_isomorphism_examples():
    f = matrix_isomorphism(m("IS6:up_a"), m("IS6:up_b"))
    assert f == {"B": "B", "0": "0", "a": "b", "b": "a", "1": "1", "T": "T"}
    assert matrix_isomorphism(m("IS6:up_a"), m("IS6:up_1")) is None


def test_submatrix():
    sub = submatrix(m("IS6:up_a"), ["B", "0", "a", "1", "T"])
    assert matrix_isomorphism(sub, m("IS5:up_a")) is not None


def test_product_matrix():
    prod = matrix_product([m("K3:up_1"), m("B2:up_1")])
    assert prod.algebra.size == 6
    assert len(prod.designated) == 1


def test_lattice_filters():
    got = {frozenset(f.elements) for f in lattice_filters(make_named_algebra("IS6"))}
    assert got == {frozenset("B0ab1T"), frozenset("0ab1T"), frozenset("a1T"),
                   frozenset("b1T"), frozenset("1T"), frozenset("T")}
    assert {frozenset(f.elements) for f in lattice_filters(make_named_algebra("B2"))} == \
        {frozenset("1"), frozenset("01")}
    assert {frozenset(f.elements) for f in lattice_filters(make_named_algebra("K3"))} == \
        {frozenset("1"), frozenset("a1"), frozenset("0a1")}


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_lattice_filters_match_subset_enumeration(name):
    a = make_named_algebra(name)
    assert {frozenset(f.elements) for f in lattice_filters(a)} == set(lattice_filters_brute(a))


def test_filters_text():
    text = format_filters(lattice_filters(make_named_algebra("K3")))
    assert text == "up(0) = {0,a,1} improper\nup(a) = {a,1}\nup(1) = {1}\n"


def test_matrix_file_round_trip():
    lifted = matrix_nabla_lift(m("K3:up_a"))
    for mat in (m("IS6:up_a"), lifted):
        back = parse_matrices(format_matrix(mat))
        assert len(back) == 1 and back[0] == mat


def test_matrix_file_errors():
    with pytest.raises(FormatError):
        parse_matrices("[matrix]\nalgebra = IS9\ndesignated = 1\n")
    with pytest.raises(FormatError):
        parse_matrices("[matrix]\nalgebra = IS6\n")
    with pytest.raises(FormatError):
        parse_matrices("[matrix]\nalgebra = IS6\ndesignated = z\n")
