"""Pure-Python/numpy implementations of the hot kernels.

Both functions must return exactly what the compiled versions in
``_core.pyx`` return; tests compare the two backends.
"""

from __future__ import annotations

import numpy as np

OP_VAR, OP_CONST, OP_UNARY, OP_BINARY = 0, 1, 2, 3


def first_countermodel(n, nvars, opcode, arg0, arg1, arg2, unary, binary,
                       premises, conclusions, designated, chunk=1 << 16):
    """Index (odometer order, first variable most significant) of the first
    valuation designating every premise node and no conclusion node; -1 if none."""
    total = n ** nvars
    m = len(opcode)
    designated = np.asarray(designated, dtype=bool)
    for start in range(0, total, chunk):
        grid = np.arange(start, min(total, start + chunk), dtype=np.int64)
        vals = [None] * m
        for k in range(m):
            op = opcode[k]
            if op == OP_VAR:
                stride = n ** (nvars - 1 - arg0[k])
                vals[k] = (grid // stride) % n
            elif op == OP_CONST:
                vals[k] = np.full(grid.shape, arg0[k], dtype=np.int64)
            elif op == OP_UNARY:
                vals[k] = unary[arg0[k]][vals[arg1[k]]]
            else:
                vals[k] = binary[arg0[k]][vals[arg1[k]], vals[arg2[k]]]
        bad = np.ones(grid.shape, dtype=bool)
        for p in premises:
            bad &= designated[vals[p]]
        for c in conclusions:
            bad &= ~designated[vals[c]]
        hit = np.flatnonzero(bad)
        if hit.size:
            return int(start + hit[0])
    return -1


def solve(n_vars, clause_starts, lits):
    """Unit propagation with chronological backtracking; branch on the lowest
    unassigned variable, true first.

    Literals are encoded ``2 * var + neg``.  Returns a list of 0/1 values
    (a model) or ``None`` when unsatisfiable.
    """
    n_clauses = len(clause_starts) - 1
    value = [-1] * n_vars           # -1 unassigned, 0 false, 1 true
    watches = [[] for _ in range(2 * n_vars)]
    clauses = []
    units = []
    for c in range(n_clauses):
        cl = list(lits[clause_starts[c]:clause_starts[c + 1]])
        clauses.append(cl)
        if not cl:
            return None
        if len(cl) == 1:
            units.append(cl[0])
        else:
            watches[cl[0]].append(c)
            watches[cl[1]].append(c)

    trail: list[int] = []
    decisions: list[tuple[int, int, bool]] = []   # (trail length before, var, flipped)

    def lit_value(lit):
        v = value[lit >> 1]
        if v < 0:
            return -1
        return v ^ (lit & 1)

    def assign(lit):
        value[lit >> 1] = 1 - (lit & 1)
        trail.append(lit)

    def propagate(qhead):
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            ws = watches[false_lit]
            i = 0
            while i < len(ws):
                c = ws[i]
                cl = clauses[c]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                other = cl[0]
                if lit_value(other) == 1:
                    i += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if lit_value(cl[k]) != 0:
                        cl[1], cl[k] = cl[k], cl[1]
                        watches[cl[1]].append(c)
                        ws[i] = ws[-1]
                        ws.pop()
                        moved = True
                        break
                if moved:
                    continue
                ov = lit_value(other)
                if ov == 0:
                    return False
                assign(other)
                i += 1
        return True

    def undo(to):
        while len(trail) > to:
            value[trail.pop() >> 1] = -1

    for u in units:
        lv = lit_value(u)
        if lv == 0:
            return None
        if lv < 0:
            assign(u)
    ok = propagate(0)
    next_var = 0
    while True:
        if ok:
            while next_var < n_vars and value[next_var] >= 0:
                next_var += 1
            if next_var == n_vars:
                return [max(v, 0) for v in value]
            decisions.append((len(trail), next_var, False))
            assign(2 * next_var)
        else:
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return None
            mark, var, _ = decisions.pop()
            undo(mark)
            decisions.append((mark, var, True))
            assign(2 * var + 1)
            next_var = 0
        ok = propagate(len(trail) - 1)
