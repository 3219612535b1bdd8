"""Logical matrices: consequence by valuation enumeration, Leibniz congruence,
reduction, the nabla lift and hat construction, products, isomorphisms and
lattice filters."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .algebra import (
    SIG_DM,
    AlgebraError,
    CapExceeded,
    FiniteAlgebra,
    FormatError,
    Verdict,
    hat_reduct,
    is_homomorphism,
    make_named_algebra,
    nabla_lift,
    parse_algebra_section,
    format_algebra,
    format_assignment,
    product,
    split_sections,
    subalgebra,
)
from .formula import Formula, Var, format_formula, format_formulas, dedupe


@dataclass(frozen=True, eq=False)
class LogicalMatrix:
    algebra: FiniteAlgebra
    designated: frozenset[str]
    name: str = ""
    _mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        des = frozenset(self.designated)
        mask = np.zeros(self.algebra.size, dtype=bool)
        for e in des:
            mask[self.algebra.index(e)] = True
        mask.setflags(write=False)
        object.__setattr__(self, "designated", des)
        object.__setattr__(self, "_mask", mask)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def signature(self):
        return self.algebra.signature

    def designated_sorted(self) -> list[str]:
        return [e for e in self.algebra.elements if e in self.designated]

    @property
    def trivial_designation(self) -> bool:
        """True when nothing or everything is designated."""
        return not self.designated or len(self.designated) == self.algebra.size

    def label(self) -> str:
        if self.name:
            return self.name
        return f"<{self.algebra.name or '?'},{{{','.join(self.designated_sorted())}}}>"

    def __eq__(self, other):
        if not isinstance(other, LogicalMatrix):
            return NotImplemented
        return self.algebra == other.algebra and self.designated == other.designated

    def __hash__(self):
        return hash((self.algebra, self.designated))

    def __repr__(self):
        return f"LogicalMatrix({self.label()})"


# ---------------------------------------------------------------- built-ins

DESIGNATION_TOKENS = ("top", "up_0", "up_a", "up_b", "up_1")


def designation_from_token(a: FiniteAlgebra, token: str) -> frozenset[str]:
    """``top`` = {top}; ``up_x`` = principal up-set of x; otherwise a comma list."""
    if token == "top":
        return frozenset({a.constant("top")})
    if token.startswith("up_"):
        return a.up_set(token[3:])
    if token in ("", "none", "empty"):
        return frozenset()
    return frozenset(e.strip() for e in token.split(","))


def builtin_matrix(algebra: str, token: str) -> LogicalMatrix:
    a = make_named_algebra(algebra)
    return LogicalMatrix(a, designation_from_token(a, token), f"{a.name}:{token}")


def parse_matrix_ref(ref: str, search: Mapping[str, "LogicalMatrix"] | None = None) -> LogicalMatrix:
    """Resolve ``builtin:ALG:TOKEN`` (or a name found in ``search``)."""
    if ref.startswith("builtin:"):
        parts = ref.split(":", 2)
        if len(parts) != 3:
            raise ValueError(f"matrix reference {ref!r} should look like builtin:IS6:up_a")
        return builtin_matrix(parts[1], parts[2])
    if search and ref in search:
        return search[ref]
    raise ValueError(f"cannot resolve matrix {ref!r}")


# ---------------------------------------------------------------- consequence

class SignatureMismatch(AlgebraError):
    pass


@functools.lru_cache(maxsize=256)
def _table_stacks(a: FiniteAlgebra):
    unary_syms = [s for s, k in a.signature.symbols if k == 1]
    binary_syms = [s for s, k in a.signature.symbols if k == 2]
    n = a.size
    unary = (np.stack([a.tables[s] for s in unary_syms]) if unary_syms
             else np.zeros((0, n), dtype=np.int32))
    binary = (np.stack([a.tables[s] for s in binary_syms]) if binary_syms
              else np.zeros((0, n, n), dtype=np.int32))
    return ({s: i for i, s in enumerate(unary_syms)}, {s: i for i, s in enumerate(binary_syms)},
            np.ascontiguousarray(unary, dtype=np.int32), np.ascontiguousarray(binary, dtype=np.int32))


def compile_program(a: FiniteAlgebra, formulas: Sequence[Formula], variables: Sequence[str]):
    """Flatten formulas into a node list for the sweep kernel.

    Returns ``(opcode, arg0, arg1, arg2, node_of)`` where ``node_of`` maps each
    formula (and subformula) to its node index."""
    uidx, bidx, _, _ = _table_stacks(a)
    vpos = {v: i for i, v in enumerate(variables)}
    opcode: list[int] = []
    a0: list[int] = []
    a1: list[int] = []
    a2: list[int] = []
    node_of: dict[Formula, int] = {}

    def emit(f: Formula) -> int:
        got = node_of.get(f)
        if got is not None:
            return got
        if isinstance(f, Var):
            rec = (0, vpos[f.name], 0, 0)
        else:
            kids = f.children
            if not kids:
                rec = (1, int(a.tables[f.symbol]), 0, 0)
            elif len(kids) == 1:
                rec = (2, uidx[f.symbol], emit(kids[0]), 0)
            else:
                left = emit(kids[0])
                rec = (3, bidx[f.symbol], left, emit(kids[1]))
        node_of[f] = len(opcode)
        opcode.append(rec[0])
        a0.append(rec[1])
        a1.append(rec[2])
        a2.append(rec[3])
        return node_of[f]

    for f in formulas:
        emit(f)
    return (np.array(opcode, dtype=np.int32), np.array(a0, dtype=np.int32),
            np.array(a1, dtype=np.int32), np.array(a2, dtype=np.int32), node_of)


def _check_signature(ms: Sequence[LogicalMatrix], formulas: Iterable[Formula]) -> None:
    if not ms:
        raise ValueError("at least one matrix is required")
    for m in ms:
        for f in formulas:
            for sym in f.connectives():
                if sym not in m.signature:
                    raise SignatureMismatch(
                        f"{format_formula(f)!r} uses {sym!r}, not in the signature of {m.label()}")


def _query_variables(formulas: Iterable[Formula]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for f in formulas:
        seen.update(dict.fromkeys(f.variables()))
    return tuple(seen)


def mc_semantic_consequence(ms: Sequence[LogicalMatrix] | LogicalMatrix,
                            premises: Iterable[Formula], conclusions: Iterable[Formula],
                            cap: int = 10_000_000) -> Verdict:
    """``premises |= conclusions`` read disjunctively, in every listed matrix.

    When false the witness names the matrix, the assignment and the values of
    the sequent's formulas under it."""
    if isinstance(ms, LogicalMatrix):
        ms = [ms]
    premises = dedupe(premises)
    conclusions = dedupe(conclusions)
    everything = premises + conclusions
    _check_signature(ms, everything)
    variables = _query_variables(everything)
    for k, m in enumerate(ms):
        a = m.algebra
        if a.size ** len(variables) > cap:
            raise CapExceeded(f"{a.size}^{len(variables)} valuations on {m.label()} exceed cap {cap}")
        if set(premises) & set(conclusions):
            continue
        op, x0, x1, x2, node_of = compile_program(a, everything, variables)
        _, _, unary, binary = _table_stacks(a)
        hit = _kernels.first_countermodel(
            a.size, len(variables), op, x0, x1, x2, unary, binary,
            np.array([node_of[f] for f in premises], dtype=np.int32),
            np.array([node_of[f] for f in conclusions], dtype=np.int32),
            m.mask.astype(np.uint8))
        if hit >= 0:
            assignment = a.assignment_at(variables, int(hit))
            values = {format_formula(f): a.evaluate(f, assignment) for f in everything}
            return Verdict(False, {
                "matrix": m.label(), "matrix_index": k, "assignment": assignment,
                "formula": format_formulas(conclusions), "values": values,
            })
    return Verdict(True)


def semantic_consequence(ms: Sequence[LogicalMatrix] | LogicalMatrix,
                         premises: Iterable[Formula], conclusion: Formula,
                         cap: int = 10_000_000) -> Verdict:
    return mc_semantic_consequence(ms, premises, [conclusion], cap)


class MatrixOracle:
    """Consequence predicate over a fixed set of matrices, caching the
    designation pattern of each formula over all assignments to ``variables``."""

    def __init__(self, ms: Sequence[LogicalMatrix] | LogicalMatrix, variables: Sequence[str]):
        self.matrices = [ms] if isinstance(ms, LogicalMatrix) else list(ms)
        self.variables = tuple(variables)
        self._cache: list[dict[Formula, np.ndarray]] = [{} for _ in self.matrices]
        self._grid = []
        for m in self.matrices:
            n = m.algebra.size
            total = n ** len(self.variables)
            grid = np.arange(total, dtype=np.int64)
            cols = {}
            for i, v in enumerate(self.variables):
                stride = n ** (len(self.variables) - 1 - i)
                cols[v] = ((grid // stride) % n).astype(np.int32)
            self._grid.append((cols, {}, total))

    def _designated(self, k: int, f: Formula) -> np.ndarray:
        got = self._cache[k].get(f)
        if got is None:
            from .algebra import _eval_vec
            m = self.matrices[k]
            cols, memo, total = self._grid[k]
            got = m.mask[_eval_vec(m.algebra, f, cols, memo, total)]
            self._cache[k][f] = got
        return got

    def __call__(self, premises: Iterable[Formula], conclusions: Iterable[Formula]) -> Verdict:
        premises = dedupe(premises)
        conclusions = dedupe(conclusions)
        _check_signature(self.matrices, premises + conclusions)
        if set(premises) & set(conclusions):
            return Verdict(True)
        for k, m in enumerate(self.matrices):
            total = self._grid[k][2]
            bad = np.ones(total, dtype=bool)
            for f in premises:
                bad &= self._designated(k, f)
            for f in conclusions:
                bad &= ~self._designated(k, f)
            hit = np.flatnonzero(bad)
            if hit.size:
                assignment = m.algebra.assignment_at(self.variables, int(hit[0]))
                used = _query_variables(premises + conclusions)
                assignment = {v: assignment[v] for v in used}
                return Verdict(False, {"matrix": m.label(), "matrix_index": k,
                                       "assignment": assignment,
                                       "formula": format_formulas(conclusions)})
        return Verdict(True)


def format_verdict(v: Verdict) -> str:
    """``YES``, or ``NO`` followed by the countermodel lines."""
    if v:
        return "YES\n"
    w = v.witness
    lines = ["NO", f"matrix: {w['matrix']}", f"assignment: {format_assignment(w['assignment'])}"]
    if "values" in w:
        lines.append("values: " + "; ".join(f"{f} = {x}" for f, x in w["values"].items()))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- congruences

@dataclass(frozen=True)
class Congruence:
    """A partition of the carrier, blocks listed in order of their first element."""

    elements: tuple[str, ...]
    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, elements: Sequence[str], raw: Sequence) -> "Congruence":
        seen: dict = {}
        labels = tuple(seen.setdefault(r, len(seen)) for r in raw)
        return cls(tuple(elements), labels)

    @classmethod
    def identity(cls, elements: Sequence[str]) -> "Congruence":
        return cls.from_labels(elements, range(len(elements)))

    def blocks(self) -> list[tuple[str, ...]]:
        out: list[list[str]] = [[] for _ in range(max(self.labels) + 1)]
        for e, lab in zip(self.elements, self.labels):
            out[lab].append(e)
        return [tuple(b) for b in out]

    def related(self, x: str, y: str) -> bool:
        return self.labels[self.elements.index(x)] == self.labels[self.elements.index(y)]

    @property
    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    def refines(self, other: "Congruence") -> bool:
        """Every block of self lies inside a block of other."""
        mapping: dict[int, int] = {}
        for a, b in zip(self.labels, other.labels):
            if mapping.setdefault(a, b) != b:
                return False
        return True

    def __str__(self) -> str:
        return " ".join("{" + ",".join(b) + "}" for b in self.blocks())


def is_congruence(a: FiniteAlgebra, labels: Sequence[int]) -> bool:
    lab = np.asarray(labels)
    for sym, k in a.signature.symbols:
        t = a.tables[sym]
        if k == 1:
            for x in range(a.size):
                for y in range(x + 1, a.size):
                    if lab[x] == lab[y] and lab[t[x]] != lab[t[y]]:
                        return False
        elif k == 2:
            res = lab[t]
            for x in range(a.size):
                for y in range(x + 1, a.size):
                    if lab[x] == lab[y]:
                        if (res[x, :] != res[y, :]).any() or (res[:, x] != res[:, y]).any():
                            return False
    return True


def _set_partitions(n: int):
    """Restricted growth strings of length n."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(labels)
            return
        for v in range(top + 2):
            labels[i] = v
            yield from rec(i + 1, max(top, v))

    labels[0] = 0
    yield from rec(1, 0)


def congruences(a: FiniteAlgebra, max_size: int = 8) -> list[Congruence]:
    """All congruences by exhaustive partition enumeration (small carriers only)."""
    if a.size > max_size:
        raise CapExceeded(f"congruence enumeration is limited to {max_size} elements")
    return [Congruence.from_labels(a.elements, lab)
            for lab in _set_partitions(a.size) if is_congruence(a, lab)]


def leibniz_by_enumeration(m: LogicalMatrix, max_size: int = 8) -> Congruence:
    """Largest congruence compatible with the designated set, by enumeration."""
    compatible = []
    for c in congruences(m.algebra, max_size):
        if all(len({e in m.designated for e in b}) == 1 for b in c.blocks()):
            compatible.append(c)
    best = max(compatible, key=lambda c: len(c.elements) - len(c.blocks()))
    if not all(c.refines(best) for c in compatible):
        raise AssertionError("compatible congruences have no largest element")
    return best


@functools.lru_cache(maxsize=64)
def unary_polynomials(a: FiniteAlgebra, cap: int = 1_000_000) -> np.ndarray:
    """All unary polynomial functions as rows of value tables: the closure of
    the identity and the constant maps under the basic operations."""
    n = a.size
    weights = n ** np.arange(n, dtype=np.int64)

    def decode(codes: np.ndarray) -> np.ndarray:
        return ((codes[:, None] // weights) % n).astype(np.int32)

    seed = [np.arange(n, dtype=np.int32)] + [np.full(n, c, dtype=np.int32) for c in range(n)]
    seen = np.unique(np.stack(seed).astype(np.int64) @ weights)
    P = decode(seen)
    new = P
    ops = [(k, a.tables[s]) for s, k in a.signature.symbols if k > 0]
    while len(new):
        cands = []
        for k, t in ops:
            if k == 1:
                cands.append(t[new].astype(np.int64) @ weights)
                continue
            step = max(1, 2_000_000 // (len(P) * n))
            for i in range(0, len(new), step):
                blk = new[i:i + step]
                cands.append((t[blk[:, None, :], P[None, :, :]].astype(np.int64) @ weights).ravel())
                cands.append((t[P[None, :, :], blk[:, None, :]].astype(np.int64) @ weights).ravel())
        codes = np.unique(np.concatenate(cands))
        fresh = codes[~np.isin(codes, seen, assume_unique=True)]
        seen = np.union1d(seen, fresh)
        new = decode(fresh)
        P = np.concatenate([P, new])
        if len(P) * n > cap:
            raise CapExceeded(f"polynomial closure exceeds {cap} table entries")
    P.setflags(write=False)
    return P


def leibniz_by_polynomials(m: LogicalMatrix, cap: int = 1_000_000) -> Congruence:
    """x ~ y iff every unary polynomial p has p(x) designated exactly when p(y) is."""
    P = unary_polynomials(m.algebra, cap)
    profile = m.mask[P]
    return Congruence.from_labels(m.algebra.elements,
                                  [profile[:, x].tobytes() for x in range(m.algebra.size)])


def leibniz_congruence(m: LogicalMatrix) -> Congruence:
    """Largest congruence compatible with the designated set.

    Starts from the partition {D, A minus D} and splits classes until every
    basic translation maps related elements to related elements; the result
    is the relation of agreeing on designation under all unary polynomials."""
    a = m.algebra
    lab = m.mask.astype(np.int64)
    count = len(set(lab.tolist()))
    ops = [(k, a.tables[s]) for s, k in a.signature.symbols if k > 0]
    while True:
        keys = [lab[:, None]]
        for k, t in ops:
            if k == 1:
                keys.append(lab[t][:, None])
            else:
                keys.append(lab[t])
                keys.append(lab[t].T)
        sig = np.concatenate(keys, axis=1)
        _, first, inv = np.unique(sig, axis=0, return_index=True, return_inverse=True)
        inv = inv.reshape(-1)
        if len(first) == count:
            return Congruence.from_labels(a.elements, inv.tolist())
        lab, count = inv.astype(np.int64), len(first)


def leibniz_by_translation(m: LogicalMatrix) -> Congruence:
    """For a De Morgan algebra with a lattice filter: x ~ y iff for every c,
    (x|c in F iff y|c in F) and (~x|c in F iff ~y|c in F)."""
    a = m.algebra
    join, neg, des = a.tables["or"], a.tables["neg"], m.mask
    keys = []
    for x in range(a.size):
        keys.append((tuple(des[join[x, :]]), tuple(des[join[neg[x], :]])))
    return Congruence.from_labels(a.elements, keys)


def quotient(m: LogicalMatrix, theta: Congruence, name: str | None = None) -> LogicalMatrix:
    """Quotient matrix; each class is named by its first element."""
    a = m.algebra
    reps = [b[0] for b in theta.blocks()]
    lab = np.array(theta.labels, dtype=np.int32)
    rep_idx = [a.index(r) for r in reps]
    tables = {}
    for sym, k in a.signature.symbols:
        t = a.tables[sym]
        if k == 0:
            tables[sym] = np.int32(lab[int(t)])
        else:
            sub = t[np.ix_(*([rep_idx] * k))]
            tables[sym] = lab[sub]
    qa = FiniteAlgebra(a.signature, tuple(reps), tables,
                       f"{a.name}/~" if a.name else "")
    des = frozenset(reps[lab[a.index(e)]] for e in m.designated)
    return LogicalMatrix(qa, des, name if name is not None else (f"{m.label()}*"))


def reduce(m: LogicalMatrix) -> LogicalMatrix:
    return quotient(m, leibniz_congruence(m))


def is_reduced(m: LogicalMatrix) -> bool:
    return leibniz_congruence(m).is_identity


# ---------------------------------------------------------------- constructions

def matrix_nabla_lift(m: LogicalMatrix) -> LogicalMatrix:
    la = nabla_lift(m.algebra)
    return LogicalMatrix(la, m.designated | {la.constant("top")}, f"{m.label()}^nabla")


def matrix_hat(m: LogicalMatrix) -> LogicalMatrix:
    if m.signature != SIG_DM:
        raise AlgebraError("matrix_hat expects a De Morgan matrix")
    la = nabla_lift(m.algebra)
    ha = hat_reduct(la)
    return LogicalMatrix(ha, m.designated | {ha.constant("top")}, f"{m.label()}^hat")


def matrix_product(ms: Sequence[LogicalMatrix], cap: int = 4096) -> LogicalMatrix:
    pa = product([m.algebra for m in ms], cap)
    des = frozenset(".".join(parts) for parts in itertools.product(*[m.designated_sorted() for m in ms]))
    return LogicalMatrix(pa, des, "x".join(m.label() for m in ms))


def submatrix(m: LogicalMatrix, universe: Iterable[str], name: str | None = None) -> LogicalMatrix:
    sa = subalgebra(m.algebra, universe)
    return LogicalMatrix(sa, m.designated & frozenset(sa.elements), name or f"{m.label()}|sub")


def is_matrix_homomorphism(f: Mapping[str, str], m1: LogicalMatrix, m2: LogicalMatrix,
                           strict: bool = True, symbols: Iterable[str] | None = None) -> bool:
    """Algebra homomorphism preserving designation (both ways when ``strict``)."""
    if not is_homomorphism(f, m1.algebra, m2.algebra, symbols):
        return False
    for e in m1.algebra.elements:
        if e in m1.designated and f[e] not in m2.designated:
            return False
        if strict and e not in m1.designated and f[e] in m2.designated:
            return False
    return True


def is_embedding(f: Mapping[str, str], m1: LogicalMatrix, m2: LogicalMatrix,
                 symbols: Iterable[str] | None = None) -> bool:
    return (len(set(f.values())) == len(f)
            and is_matrix_homomorphism(f, m1, m2, strict=True, symbols=symbols))


def matrix_isomorphism(m1: LogicalMatrix, m2: LogicalMatrix, cap: int = 12) -> dict[str, str] | None:
    """A bijection preserving every table and designation both ways, or None.

    Backtracking over elements in declared order, candidates in declared order."""
    a, b = m1.algebra, m2.algebra
    if a.signature != b.signature:
        raise AlgebraError("isomorphism check needs a shared signature")
    if a.size > cap or b.size > cap:
        raise CapExceeded(f"isomorphism search is limited to carriers of size {cap}")
    if a.size != b.size or len(m1.designated) != len(m2.designated):
        return None
    n = a.size
    fmap = [-1] * n
    used = [False] * n
    ops = [(s, k, a.tables[s], b.tables[s]) for s, k in a.signature.symbols]
    for s, k, ta, tb in ops:
        if k == 0:
            x, y = int(ta), int(tb)
            if fmap[x] not in (-1, y):
                return None
            fmap[x] = y
    for x, y in enumerate(fmap):
        if y >= 0:
            if used[y]:
                return None
            used[y] = True
    des1, des2 = m1.mask, m2.mask

    def consistent() -> bool:
        for s, k, ta, tb in ops:
            if k == 1:
                for x in range(n):
                    fx = fmap[x]
                    if fx < 0:
                        continue
                    fy = fmap[ta[x]]
                    if fy >= 0 and fy != tb[fx]:
                        return False
            elif k == 2:
                for x in range(n):
                    fx = fmap[x]
                    if fx < 0:
                        continue
                    for y in range(n):
                        fy = fmap[y]
                        if fy < 0:
                            continue
                        fz = fmap[ta[x, y]]
                        if fz >= 0 and fz != tb[fx, fy]:
                            return False
        return True

    if not all(fmap[x] < 0 or des1[x] == des2[fmap[x]] for x in range(n)) or not consistent():
        return None

    def search(x: int) -> bool:
        if x == n:
            return True
        if fmap[x] >= 0:
            return search(x + 1)
        for y in range(n):
            if used[y] or des1[x] != des2[y]:
                continue
            fmap[x] = y
            used[y] = True
            if consistent() and search(x + 1):
                return True
            fmap[x] = -1
            used[y] = False
        return False

    if not search(0):
        return None
    return {a.elements[x]: b.elements[fmap[x]] for x in range(n)}


def algebra_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra, cap: int = 12) -> dict[str, str] | None:
    return matrix_isomorphism(LogicalMatrix(a, frozenset()), LogicalMatrix(b, frozenset()), cap)


# ---------------------------------------------------------------- filters

@dataclass(frozen=True)
class LatticeFilter:
    generator: str
    elements: tuple[str, ...]
    improper: bool


def lattice_filters(a: FiniteAlgebra, include_improper: bool = True) -> list[LatticeFilter]:
    """Nonempty lattice filters; in a finite lattice each is the up-set of its meet."""
    if "and" not in a.signature or "or" not in a.signature:
        raise AlgebraError("lattice_filters needs a lattice reduct")
    out = []
    seen = set()
    for g in a.elements:
        up = a.up_set(g)
        if up in seen:
            continue
        seen.add(up)
        improper = len(up) == a.size
        if improper and not include_improper:
            continue
        out.append(LatticeFilter(g, tuple(e for e in a.elements if e in up), improper))
    return out


def format_filters(fs: Sequence[LatticeFilter]) -> str:
    return "".join(f"up({f.generator}) = {{{','.join(f.elements)}}}{' improper' if f.improper else ''}\n"
                   for f in fs)


def format_mapping(f: Mapping[str, str] | None) -> str:
    if f is None:
        return "none\n"
    return "".join(f"{k} -> {v}\n" for k, v in f.items())


def lattice_filters_brute(a: FiniteAlgebra) -> list[frozenset[str]]:
    """Every nonempty up-closed, meet-closed subset, by subset enumeration."""
    n = a.size
    meet = a.tables["and"]
    leq = np.array([[meet[i, j] == i for j in range(n)] for i in range(n)])
    found = []
    for bits in range(1, 1 << n):
        s = [i for i in range(n) if bits >> i & 1]
        if any(leq[i, j] and not bits >> j & 1 for i in s for j in range(n)):
            continue
        if any(not bits >> int(meet[i, j]) & 1 for i in s for j in s):
            continue
        found.append(frozenset(a.elements[i] for i in s))
    return found


# ---------------------------------------------------------------- file format

def format_matrix(m: LogicalMatrix, include_algebra: bool | None = None) -> str:
    a = m.algebra
    builtin = False
    try:
        builtin = make_named_algebra(a.name) == a
    except KeyError:
        pass
    if include_algebra is None:
        include_algebra = not builtin
    text = format_algebra(a) if include_algebra else ""
    lines = ["[matrix]"]
    if m.name:
        lines.append(f"name = {m.name}")
    lines += [f"algebra = {a.name}", f"designated = {','.join(m.designated_sorted())}"]
    return text + "\n".join(lines) + "\n"


def parse_matrices(text: str) -> list[LogicalMatrix]:
    """Read ``[algebra]`` and ``[matrix]`` sections; a matrix's ``algebra`` names
    an earlier algebra section or a built-in."""
    algebras: dict[str, FiniteAlgebra] = {}
    out = []
    for title, pairs in split_sections(text):
        if title == "algebra":
            a = parse_algebra_section(pairs)
            algebras[a.name] = a
        elif title == "matrix":
            keys: dict[str, str] = {}
            for lineno, key, value in pairs:
                if key not in ("name", "algebra", "designated"):
                    raise FormatError(f"line {lineno}: unknown key {key!r}")
                if key in keys:
                    raise FormatError(f"line {lineno}: duplicate key {key!r}")
                keys[key] = value
            if "algebra" not in keys or "designated" not in keys:
                raise FormatError("[matrix] needs 'algebra' and 'designated'")
            name = keys["algebra"]
            if name in algebras:
                a = algebras[name]
            else:
                try:
                    a = make_named_algebra(name)
                except KeyError:
                    raise FormatError(f"unknown algebra {name!r}") from None
            des = [e.strip() for e in keys["designated"].split(",") if e.strip()]
            try:
                out.append(LogicalMatrix(a, frozenset(des), keys.get("name", "")))
            except AlgebraError as exc:
                raise FormatError(str(exc)) from None
        else:
            raise FormatError(f"unknown section [{title}]")
    return out
