"""Compare the compiled and pure-Python kernels on the two hot paths.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads: a valid sequent in IS6 over five variables (every valuation is
visited) and the clause sets built by the separating-theory search for a
batch of sampled sequents.
"""

import argparse
import timeit

import numpy as np

from islogic._kernels import _pure
from islogic.calculus import (
    _Universe, _all_instances, analytic_universe, encode_clauses, resolve_calculus,
)
from islogic.formula import formula_pool, parse_formula, sample_sequents
from islogic.matrix import _table_stacks, builtin_matrix, compile_program

try:
    from islogic._kernels import _core
except ImportError:
    _core = None


def countermodel_case():
    m = builtin_matrix("IS6", "up_a")
    a = m.algebra
    prem = [parse_formula(t) for t in ("(p & q) | (r & s)", "#t | ~#t")]
    conc = [parse_formula("(p | r) & (q | s) & (p | s) & (q | r)")]
    variables = ("p", "q", "r", "s", "t")
    op, x0, x1, x2, node_of = compile_program(a, prem + conc, variables)
    _, _, unary, binary = _table_stacks(a)
    return (a.size, len(variables), op, x0, x1, x2, unary, binary,
            np.array([node_of[f] for f in prem], dtype=np.int32),
            np.array([node_of[f] for f in conc], dtype=np.int32),
            m.mask.astype(np.uint8))


def clause_cases(count=40, seed=5):
    rs = resolve_calculus("R_B_MC+R_NABLA")
    pool = formula_pool(("p", "q"), 2)
    cases = []
    for s in sample_sequents(pool, count, 2, 2, seed):
        u = _Universe(analytic_universe(s.premises, s.conclusions, "SNABLA"))
        starts, lits = encode_clauses(u, s.premises, s.conclusions, _all_instances(rs, u, 10**6))
        cases.append((len(u), starts, lits))
    return cases


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", _pure)] + ([("cython", _core)] if _core is not None else [])

    cm = countermodel_case()
    cl = clause_cases()
    results = {}
    for name, mod in backends:
        t_cm = min(timeit.repeat(lambda: mod.first_countermodel(*cm), number=1, repeat=args.repeat))
        t_sat = min(timeit.repeat(lambda: [mod.solve(*c) for c in cl], number=1, repeat=args.repeat))
        results[name] = (t_cm, t_sat)
        print(f"{name:7s} first_countermodel {t_cm * 1e3:9.2f} ms   solve x{len(cl)} {t_sat * 1e3:9.2f} ms")
    if len(results) == 2:
        (p_cm, p_sat), (c_cm, c_sat) = results["python"], results["cython"]
        print(f"speedup first_countermodel {p_cm / c_cm:.1f}x, solve {p_sat / c_sat:.1f}x")
    # both backends must agree on every workload
    if _core is not None:
        assert _pure.first_countermodel(*cm) == _core.first_countermodel(*cm)
        for c in cl:
            a, b = _pure.solve(*c), _core.solve(*c)
            assert (a is None) == (b is None) and (a is None or list(a) == list(b))


if __name__ == "__main__":
    main()
