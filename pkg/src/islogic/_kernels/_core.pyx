# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: valuation sweep and clause search.

Semantics are identical to ``_pure.py``.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def first_countermodel(int n, int nvars, opcode, arg0, arg1, arg2, unary, binary,
                       premises, conclusions, designated):
    cdef int[::1] op = np.ascontiguousarray(opcode, dtype=np.int32)
    cdef int[::1] a0 = np.ascontiguousarray(arg0, dtype=np.int32)
    cdef int[::1] a1 = np.ascontiguousarray(arg1, dtype=np.int32)
    cdef int[::1] a2 = np.ascontiguousarray(arg2, dtype=np.int32)
    un_arr = np.ascontiguousarray(unary, dtype=np.int32).reshape(-1)
    bin_arr = np.ascontiguousarray(binary, dtype=np.int32).reshape(-1)
    if un_arr.size == 0:
        un_arr = np.zeros(1, dtype=np.int32)
    if bin_arr.size == 0:
        bin_arr = np.zeros(1, dtype=np.int32)
    cdef int[::1] un = un_arr
    cdef int[::1] bn = bin_arr
    cdef int[::1] prem = np.ascontiguousarray(premises, dtype=np.int32)
    cdef int[::1] conc = np.ascontiguousarray(conclusions, dtype=np.int32)
    cdef cnp.uint8_t[::1] des = np.ascontiguousarray(designated, dtype=np.uint8)
    cdef int m = op.shape[0]
    cdef int np_ = prem.shape[0]
    cdef int nc = conc.shape[0]
    cdef long long total = 1
    cdef int i
    for i in range(nvars):
        total *= n
    cdef int[::1] digits = np.zeros(max(nvars, 1), dtype=np.int32)
    cdef int[::1] vals = np.zeros(max(m, 1), dtype=np.int32)
    cdef long long idx
    cdef int k, ok
    cdef int nn = n * n
    cdef long long hit = -1
    with nogil:
        for idx in range(total):
            for k in range(m):
                if op[k] == 0:
                    vals[k] = digits[a0[k]]
                elif op[k] == 1:
                    vals[k] = a0[k]
                elif op[k] == 2:
                    vals[k] = un[a0[k] * n + vals[a1[k]]]
                else:
                    vals[k] = bn[a0[k] * nn + vals[a1[k]] * n + vals[a2[k]]]
            ok = 1
            for k in range(np_):
                if not des[vals[prem[k]]]:
                    ok = 0
                    break
            if ok:
                for k in range(nc):
                    if des[vals[conc[k]]]:
                        ok = 0
                        break
            if ok:
                hit = idx
                break
            # odometer increment, last variable fastest
            k = nvars - 1
            while k >= 0:
                digits[k] += 1
                if digits[k] < n:
                    break
                digits[k] = 0
                k -= 1
    return hit


cdef inline int _lit_value(signed char* value, int lit) nogil:
    cdef signed char v = value[lit >> 1]
    if v < 0:
        return -1
    return v ^ (lit & 1)


def solve(int n_vars, clause_starts, lits):
    cdef int[::1] starts = np.ascontiguousarray(clause_starts, dtype=np.int32)
    lits_arr = np.array(lits, dtype=np.int32, copy=True)
    if lits_arr.size == 0:
        lits_arr = np.zeros(1, dtype=np.int32)
    cdef int[::1] cl = lits_arr
    cdef int n_clauses = starts.shape[0] - 1
    cdef int c, k, i, lo, hi, lit, tmp, other, ov, false_lit, w, nw, found
    cdef int n_lits = 2 * n_vars

    # watch lists as growable int arrays
    cdef int* wcount = <int*>malloc(sizeof(int) * (n_lits + 1))
    cdef int* wcap = <int*>malloc(sizeof(int) * (n_lits + 1))
    cdef int** wlist = <int**>malloc(sizeof(int*) * (n_lits + 1))
    cdef signed char* value = <signed char*>malloc(n_vars + 1)
    cdef int* trail = <int*>malloc(sizeof(int) * (n_vars + 1))
    cdef int* dmark = <int*>malloc(sizeof(int) * (n_vars + 1))
    cdef int* dvar = <int*>malloc(sizeof(int) * (n_vars + 1))
    cdef signed char* dflip = <signed char*>malloc(n_vars + 1)
    cdef int trail_len = 0
    cdef int n_dec = 0
    cdef int qhead, ok, next_var, mark, var
    cdef int* newbuf
    result = None
    try:
        for i in range(n_lits):
            wcount[i] = 0
            wcap[i] = 4
            wlist[i] = <int*>malloc(sizeof(int) * 4)
        for i in range(n_vars):
            value[i] = -1

        # empty clauses and watches
        for c in range(n_clauses):
            lo = starts[c]
            hi = starts[c + 1]
            if hi == lo:
                return None
            if hi - lo >= 2:
                for k in range(2):
                    lit = cl[lo + k]
                    if wcount[lit] == wcap[lit]:
                        wcap[lit] *= 2
                        newbuf = <int*>malloc(sizeof(int) * wcap[lit])
                        for i in range(wcount[lit]):
                            newbuf[i] = wlist[lit][i]
                        free(wlist[lit])
                        wlist[lit] = newbuf
                    wlist[lit][wcount[lit]] = c
                    wcount[lit] += 1
        # unit clauses
        for c in range(n_clauses):
            lo = starts[c]
            hi = starts[c + 1]
            if hi - lo == 1:
                lit = cl[lo]
                ov = _lit_value(value, lit)
                if ov == 0:
                    return None
                if ov < 0:
                    value[lit >> 1] = 1 - (lit & 1)
                    trail[trail_len] = lit
                    trail_len += 1

        qhead = 0
        next_var = 0
        while True:
            # propagate
            ok = 1
            while qhead < trail_len and ok:
                false_lit = trail[qhead] ^ 1
                qhead += 1
                i = 0
                while i < wcount[false_lit]:
                    c = wlist[false_lit][i]
                    lo = starts[c]
                    hi = starts[c + 1]
                    if cl[lo] == false_lit:
                        cl[lo] = cl[lo + 1]
                        cl[lo + 1] = false_lit
                    other = cl[lo]
                    if _lit_value(value, other) == 1:
                        i += 1
                        continue
                    found = 0
                    for k in range(lo + 2, hi):
                        if _lit_value(value, cl[k]) != 0:
                            tmp = cl[lo + 1]
                            cl[lo + 1] = cl[k]
                            cl[k] = tmp
                            w = cl[lo + 1]
                            if wcount[w] == wcap[w]:
                                wcap[w] *= 2
                                newbuf = <int*>malloc(sizeof(int) * wcap[w])
                                for nw in range(wcount[w]):
                                    newbuf[nw] = wlist[w][nw]
                                free(wlist[w])
                                wlist[w] = newbuf
                            wlist[w][wcount[w]] = c
                            wcount[w] += 1
                            wlist[false_lit][i] = wlist[false_lit][wcount[false_lit] - 1]
                            wcount[false_lit] -= 1
                            found = 1
                            break
                    if found:
                        continue
                    ov = _lit_value(value, other)
                    if ov == 0:
                        ok = 0
                        break
                    value[other >> 1] = 1 - (other & 1)
                    trail[trail_len] = other
                    trail_len += 1
                    i += 1
            if ok:
                while next_var < n_vars and value[next_var] >= 0:
                    next_var += 1
                if next_var == n_vars:
                    result = [int(value[i]) if value[i] > 0 else 0 for i in range(n_vars)]
                    return result
                dmark[n_dec] = trail_len
                dvar[n_dec] = next_var
                dflip[n_dec] = 0
                n_dec += 1
                value[next_var] = 1
                trail[trail_len] = 2 * next_var
                trail_len += 1
            else:
                while n_dec > 0 and dflip[n_dec - 1]:
                    n_dec -= 1
                if n_dec == 0:
                    return None
                n_dec -= 1
                mark = dmark[n_dec]
                var = dvar[n_dec]
                while trail_len > mark:
                    trail_len -= 1
                    value[trail[trail_len] >> 1] = -1
                dmark[n_dec] = mark
                dvar[n_dec] = var
                dflip[n_dec] = 1
                n_dec += 1
                value[var] = 0
                trail[trail_len] = 2 * var + 1
                trail_len += 1
                next_var = 0
            qhead = trail_len - 1
    finally:
        for i in range(n_lits):
            free(wlist[i])
        free(wcount)
        free(wcap)
        free(wlist)
        free(value)
        free(trail)
        free(dmark)
        free(dvar)
        free(dflip)
