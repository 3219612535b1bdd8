"""The compiled kernels and the pure-Python fallback must agree exactly."""

import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from islogic import _kernels
from islogic._kernels import _pure
from islogic.formula import formula_pool, random_formula
from islogic.matrix import _table_stacks, builtin_matrix, compile_program

core = pytest.importorskip("islogic._kernels._core")


def test_backend_selected_at_import():
    assert _kernels.BACKEND == "cython"
    code = "import islogic._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, ISLOGIC_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def countermodel_args(seed, ref):
    rng = random.Random(seed)
    m = builtin_matrix(*ref.split(":"))
    a = m.algebra
    conn = ["neg", "and", "or", "bot", "top"] + (["nabla"] if "nabla" in a.signature else [])
    prem = [random_formula(rng, ["p", "q", "r"], 3, conn) for _ in range(rng.randint(0, 2))]
    conc = [random_formula(rng, ["p", "q", "r"], 3, conn) for _ in range(rng.randint(0, 2))]
    variables = ("p", "q", "r")
    op, x0, x1, x2, node_of = compile_program(a, prem + conc, variables)
    _, _, unary, binary = _table_stacks(a)
    return (a.size, len(variables), op, x0, x1, x2, unary, binary,
            np.array([node_of[f] for f in prem], dtype=np.int32),
            np.array([node_of[f] for f in conc], dtype=np.int32), m.mask.astype(np.uint8))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["IS6:up_a", "IS5:up_1", "DM4:up_a", "K3:up_a", "IS3:up_0"]))
def test_first_countermodel_agrees(seed, ref):
    args = countermodel_args(seed, ref)
    assert core.first_countermodel(*args) == _pure.first_countermodel(*args)


def random_cnf(rng, n_vars, n_clauses, width):
    starts, lits = [0], []
    for _ in range(n_clauses):
        k = rng.randint(1, width)
        lits += [2 * rng.randrange(n_vars) + rng.randint(0, 1) for _ in range(k)]
        starts.append(len(lits))
    return n_vars, np.array(starts, dtype=np.int32), np.array(lits, dtype=np.int32)


def brute_sat(n, starts, lits):
    for bits in range(1 << n):
        if all(any(((bits >> (l >> 1)) & 1) != (l & 1) for l in lits[starts[c]:starts[c + 1]])
               for c in range(len(starts) - 1)):
            return True
    return False


def satisfies(model, starts, lits):
    return all(any(model[l >> 1] != (l & 1) for l in lits[starts[c]:starts[c + 1]])
               for c in range(len(starts) - 1))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8), st.integers(0, 30), st.integers(1, 3))
def test_solve_agrees_and_is_correct(seed, n, m, w):
    cnf = random_cnf(random.Random(seed), n, m, w)
    a, b = core.solve(*cnf), _pure.solve(*cnf)
    assert (a is None) == (b is None)
    assert (a is not None) == brute_sat(*cnf)
    if a is not None:
        assert list(a) == list(b)
        assert satisfies(a, cnf[1], cnf[2])


def test_empty_clause_is_unsatisfiable():
    cnf = (2, np.array([0, 0], dtype=np.int32), np.array([], dtype=np.int32))
    assert core.solve(*cnf) is None and _pure.solve(*cnf) is None


def test_valid_sequent_has_no_countermodel():
    m = builtin_matrix("IS6", "up_a")
    f = formula_pool(["p"], 1)[4]
    op, x0, x1, x2, node_of = compile_program(m.algebra, [f], ("p",))
    _, _, unary, binary = _table_stacks(m.algebra)
    idx = np.array([node_of[f]], dtype=np.int32)
    args = (m.algebra.size, 1, op, x0, x1, x2, unary, binary, idx, idx, m.mask.astype(np.uint8))
    assert core.first_countermodel(*args) == -1 == _pure.first_countermodel(*args)
