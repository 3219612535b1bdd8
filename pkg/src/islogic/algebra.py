"""Finite algebras over the De Morgan and IS signatures.

Elements are addressed by name in the public API; tables are numpy arrays
over element indices (row-major, in declared element order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import Formula, Var, parse_formula


class AlgebraError(ValueError):
    pass


class UnknownSymbolError(AlgebraError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Signature:
    name: str
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate symbols in signature {self.name}")

    def arity(self, symbol: str) -> int:
        for s, k in self.symbols:
            if s == symbol:
                return k
        raise UnknownSymbolError(f"symbol {symbol!r} not in signature {self.name}")

    def names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return any(s == symbol for s, _ in self.symbols)


SIG_DM = Signature("DM", (("and", 2), ("or", 2), ("neg", 1), ("bot", 0), ("top", 0)))
SIG_IS = Signature("IS", SIG_DM.symbols + (("nabla", 1),))
SIGNATURES = {"DM": SIG_DM, "IS": SIG_IS}


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive check; falsy with a witness when it fails."""

    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    signature: Signature
    elements: tuple[str, ...]
    tables: Mapping[str, np.ndarray]
    name: str = ""
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.elements)
        if n < 1:
            raise AlgebraError("an algebra needs at least one element")
        if len(set(self.elements)) != n:
            raise AlgebraError("duplicate element names")
        tables = {}
        for sym, k in self.signature.symbols:
            if sym not in self.tables:
                raise AlgebraError(f"missing table for {sym!r}")
            t = np.array(self.tables[sym], dtype=np.int32)
            if t.shape != (n,) * k:
                raise AlgebraError(f"table {sym!r} has shape {t.shape}, expected {(n,) * k}")
            if t.size and (t.min() < 0 or t.max() >= n):
                raise AlgebraError(f"table {sym!r} has out-of-range entries")
            t.setflags(write=False)
            tables[sym] = t
        extra = set(self.tables) - set(tables)
        if extra:
            raise AlgebraError(f"tables for symbols outside the signature: {sorted(extra)}")
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    # -- basic access

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise AlgebraError(f"{element!r} is not an element of {self.name or 'the algebra'}") from None

    def indices(self, elements: Iterable[str]) -> list[int]:
        return [self.index(e) for e in elements]

    def apply(self, symbol: str, *args: str) -> str:
        t = self.tables[symbol]
        return self.elements[int(t[tuple(self.index(a) for a in args)])]

    def leq(self, x: str, y: str) -> bool:
        i, j = self.index(x), self.index(y)
        return int(self.tables["and"][i, j]) == i

    def up_set(self, x: str) -> frozenset[str]:
        return frozenset(y for y in self.elements if self.leq(x, y))

    def constant(self, symbol: str) -> str:
        return self.elements[int(self.tables[symbol])]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (self.signature == other.signature and self.elements == other.elements
                and all(np.array_equal(self.tables[s], other.tables[s])
                        for s in self.signature.names()))

    def __hash__(self) -> int:
        return hash((self.signature, self.elements))

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name or '?'}, {self.signature.name}, {list(self.elements)})"

    # -- terms

    def check_term(self, f: Formula) -> None:
        for sym in f.connectives():
            if sym not in self.signature:
                raise UnknownSymbolError(
                    f"symbol {sym!r} not in signature {self.signature.name} of {self.name or 'algebra'}")

    def evaluate(self, f: Formula, assignment: Mapping[str, str]) -> str:
        self.check_term(f)
        idx = {v: self.index(e) for v, e in assignment.items()}
        return self.elements[_eval_index(self, f, idx)]

    def evaluate_all(self, formulas: Sequence[Formula], variables: Sequence[str] | None = None,
                     cap: int = 10_000_000) -> tuple[tuple[str, ...], np.ndarray]:
        """Values of every formula under every assignment, odometer order
        (first variable most significant).  Returns ``(variables, values)``
        with ``values.shape == (len(formulas), n ** len(variables))``."""
        for f in formulas:
            self.check_term(f)
        if variables is None:
            seen: dict[str, None] = {}
            for f in formulas:
                seen.update(dict.fromkeys(f.variables()))
            variables = tuple(seen)
        variables = tuple(variables)
        n = self.size
        total = n ** len(variables)
        if total * max(1, len(formulas)) > cap:
            raise CapExceeded(f"{n}^{len(variables)} assignments exceed the evaluation cap {cap}")
        grid = np.arange(total, dtype=np.int64)
        columns = {}
        for i, v in enumerate(variables):
            stride = n ** (len(variables) - 1 - i)
            columns[v] = ((grid // stride) % n).astype(np.int32)
        memo: dict[Formula, np.ndarray] = {}
        out = np.empty((len(formulas), total), dtype=np.int32)
        for k, f in enumerate(formulas):
            out[k] = _eval_vec(self, f, columns, memo, total)
        return variables, out

    def assignment_at(self, variables: Sequence[str], k: int) -> dict[str, str]:
        n = self.size
        out = {}
        for i, v in enumerate(variables):
            stride = n ** (len(variables) - 1 - i)
            out[v] = self.elements[(k // stride) % n]
        return out


def _eval_index(a: FiniteAlgebra, f: Formula, idx: Mapping[str, int]) -> int:
    if isinstance(f, Var):
        try:
            return idx[f.name]
        except KeyError:
            raise AlgebraError(f"variable {f.name!r} has no value") from None
    t = a.tables[f.symbol]
    kids = f.children
    if not kids:
        return int(t)
    if len(kids) == 1:
        return int(t[_eval_index(a, kids[0], idx)])
    return int(t[_eval_index(a, kids[0], idx), _eval_index(a, kids[1], idx)])


def _eval_vec(a: FiniteAlgebra, f: Formula, columns, memo, total) -> np.ndarray:
    got = memo.get(f)
    if got is not None:
        return got
    if isinstance(f, Var):
        if f.name not in columns:
            raise AlgebraError(f"variable {f.name!r} has no value")
        res = columns[f.name]
    else:
        t = a.tables[f.symbol]
        kids = f.children
        if not kids:
            res = np.full(total, int(t), dtype=np.int32)
        elif len(kids) == 1:
            res = t[_eval_vec(a, kids[0], columns, memo, total)]
        else:
            res = t[_eval_vec(a, kids[0], columns, memo, total),
                    _eval_vec(a, kids[1], columns, memo, total)]
    memo[f] = res
    return res


# ---------------------------------------------------------------- construction

def algebra_from_order(name: str, elements: Sequence[str], covers: Iterable[tuple[str, str]],
                       neg: Mapping[str, str], nabla: Mapping[str, str] | None = None) -> FiniteAlgebra:
    """Build a bounded lattice algebra from its Hasse diagram (pairs ``(lower, upper)``)."""
    n = len(elements)
    pos = {e: i for i, e in enumerate(elements)}
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        leq[pos[lo], pos[hi]] = True
    for k in range(n):  # transitive closure
        leq |= leq[:, [k]] & leq[[k], :]
    meet = np.zeros((n, n), dtype=np.int32)
    join = np.zeros((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            lower = [k for k in range(n) if leq[k, i] and leq[k, j]]
            upper = [k for k in range(n) if leq[i, k] and leq[j, k]]
            glb = [k for k in lower if all(leq[m, k] for m in lower)]
            lub = [k for k in upper if all(leq[k, m] for m in upper)]
            if len(glb) != 1 or len(lub) != 1:
                raise AlgebraError(f"{name}: the order is not a lattice")
            meet[i, j], join[i, j] = glb[0], lub[0]
    bottoms = [k for k in range(n) if leq[k].all()]
    tops = [k for k in range(n) if leq[:, k].all()]
    tables = {
        "and": meet, "or": join,
        "neg": np.array([pos[neg[e]] for e in elements], dtype=np.int32),
        "bot": np.int32(bottoms[0]), "top": np.int32(tops[0]),
    }
    sig = SIG_DM
    if nabla is not None:
        tables["nabla"] = np.array([pos[nabla[e]] for e in elements], dtype=np.int32)
        sig = SIG_IS
    return FiniteAlgebra(sig, tuple(elements), tables, name)


def _build_named(name: str) -> FiniteAlgebra:
    if name == "DM4":
        return algebra_from_order("DM4", ["0", "a", "b", "1"],
                                  [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
                                  {"0": "1", "a": "a", "b": "b", "1": "0"})
    if name == "K3":
        return algebra_from_order("K3", ["0", "a", "1"], [("0", "a"), ("a", "1")],
                                  {"0": "1", "a": "a", "1": "0"})
    if name == "B2":
        return algebra_from_order("B2", ["0", "1"], [("0", "1")], {"0": "1", "1": "0"})
    if name == "IS6":
        els = ["B", "0", "a", "b", "1", "T"]
        return algebra_from_order(
            "IS6", els,
            [("B", "0"), ("0", "a"), ("0", "b"), ("a", "1"), ("b", "1"), ("1", "T")],
            {"B": "T", "0": "1", "a": "a", "b": "b", "1": "0", "T": "B"},
            {e: ("B" if e == "B" else "T") for e in els})
    if name == "IS5":
        els = ["B", "0", "a", "1", "T"]
        return algebra_from_order(
            "IS5", els, [("B", "0"), ("0", "a"), ("a", "1"), ("1", "T")],
            {"B": "T", "0": "1", "a": "a", "1": "0", "T": "B"},
            {e: ("B" if e == "B" else "T") for e in els})
    if name == "IS4":
        els = ["B", "0", "1", "T"]
        return algebra_from_order(
            "IS4", els, [("B", "0"), ("0", "1"), ("1", "T")],
            {"B": "T", "0": "1", "1": "0", "T": "B"},
            {e: ("B" if e == "B" else "T") for e in els})
    if name == "IS3":
        els = ["B", "0", "T"]
        return algebra_from_order(
            "IS3", els, [("B", "0"), ("0", "T")],
            {"B": "T", "0": "0", "T": "B"},
            {e: ("B" if e == "B" else "T") for e in els})
    if name == "IS2":
        return algebra_from_order("IS2", ["B", "T"], [("B", "T")],
                                  {"B": "T", "T": "B"}, {"B": "B", "T": "T"})
    raise KeyError(f"unknown built-in algebra {name!r}")


ALGEBRA_NAMES = ("DM4", "K3", "B2", "IS6", "IS5", "IS4", "IS3", "IS2")
_NAMED: dict[str, FiniteAlgebra] = {}


def make_named_algebra(name: str) -> FiniteAlgebra:
    key = name.upper()
    if key not in ALGEBRA_NAMES:
        raise KeyError(f"unknown built-in algebra {name!r}; choose from {', '.join(ALGEBRA_NAMES)}")
    if key not in _NAMED:
        _NAMED[key] = _build_named(key)
    return _NAMED[key]


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def nabla_lift(a: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """Adjoin a new bottom ``B`` and top ``T`` (primed on name clashes) and
    set nabla to send the new bottom to itself and everything else to the new top."""
    if a.signature != SIG_DM:
        raise AlgebraError("nabla_lift expects an algebra over the De Morgan signature")
    taken = set(a.elements)
    bname = _fresh("B", taken)
    tname = _fresh("T", taken | {bname})
    n = a.size
    bot, top = 0, n + 1
    old = np.arange(n) + 1

    size = n + 2
    meet = np.empty((size, size), dtype=np.int32)
    join = np.empty((size, size), dtype=np.int32)
    meet[1:n + 1, 1:n + 1] = a.tables["and"] + 1
    join[1:n + 1, 1:n + 1] = a.tables["or"] + 1
    for x in range(size):
        meet[bot, x] = meet[x, bot] = bot
        join[top, x] = join[x, top] = top
    for z in old:
        meet[top, z] = meet[z, top] = z
        join[bot, z] = join[z, bot] = z
    meet[top, top] = top
    join[bot, bot] = bot

    neg = np.empty(size, dtype=np.int32)
    neg[1:n + 1] = a.tables["neg"] + 1
    neg[bot], neg[top] = top, bot
    nab = np.full(size, top, dtype=np.int32)
    nab[bot] = bot
    tables = {"and": meet, "or": join, "neg": neg, "nabla": nab,
              "bot": np.int32(bot), "top": np.int32(top)}
    elements = (bname,) + a.elements + (tname,)
    return FiniteAlgebra(SIG_IS, elements, tables, name or (f"{a.name}^nabla" if a.name else ""))


def reduct(a: FiniteAlgebra, signature: Signature, name: str | None = None) -> FiniteAlgebra:
    for sym in signature.names():
        if sym not in a.signature:
            raise AlgebraError(f"{sym!r} missing; cannot take the {signature.name}-reduct")
    return FiniteAlgebra(signature, a.elements, {s: a.tables[s] for s in signature.names()},
                         name if name is not None else a.name)


def hat_reduct(a: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """Drop the nabla table."""
    if a.signature != SIG_IS:
        raise AlgebraError("hat_reduct expects an algebra over the IS signature")
    return reduct(a, SIG_DM, name if name is not None else (f"{a.name}^hat" if a.name else ""))


def product(algebras: Sequence[FiniteAlgebra], cap: int = 4096, name: str | None = None) -> FiniteAlgebra:
    """Direct product; element names are the component names joined by ``.``."""
    if not algebras:
        raise AlgebraError("product of an empty family")
    sig = algebras[0].signature
    if any(x.signature != sig for x in algebras):
        raise AlgebraError("product factors must share a signature")
    total = 1
    for x in algebras:
        total *= x.size
    if total > cap:
        raise CapExceeded(f"product has {total} elements, cap is {cap}")
    sizes = [x.size for x in algebras]
    coords = list(itertools.product(*[range(s) for s in sizes]))
    elements = tuple(".".join(x.elements[c] for x, c in zip(algebras, cs)) for cs in coords)
    flat = {cs: i for i, cs in enumerate(coords)}
    tables: dict[str, np.ndarray] = {}
    for sym, k in sig.symbols:
        if k == 0:
            tables[sym] = np.int32(flat[tuple(int(x.tables[sym]) for x in algebras)])
            continue
        t = np.empty((total,) * k, dtype=np.int32)
        for args in itertools.product(range(total), repeat=k):
            comp = tuple(int(x.tables[sym][tuple(coords[arg][i] for arg in args)])
                         for i, x in enumerate(algebras))
            t[args] = flat[comp]
        tables[sym] = t
    nm = name if name is not None else "x".join(x.name or "?" for x in algebras)
    return FiniteAlgebra(sig, elements, tables, nm)


def projection(prod: FiniteAlgebra, factors: Sequence[FiniteAlgebra], i: int) -> dict[str, str]:
    """The i-th coordinate projection of a product built by :func:`product`."""
    out = {}
    for e in prod.elements:
        out[e] = _split_product_name(e, factors)[i]
    return out


def _split_product_name(name: str, factors: Sequence[FiniteAlgebra]) -> tuple[str, ...]:
    # element names may contain '.', so match factor names greedily from the left
    def go(rest: str, k: int):
        if k == len(factors):
            return () if rest == "" else None
        for e in factors[k].elements:
            if k == len(factors) - 1:
                if rest == e:
                    return (e,)
            elif rest.startswith(e + "."):
                tail = go(rest[len(e) + 1:], k + 1)
                if tail is not None:
                    return (e,) + tail
        return None

    got = go(name, 0)
    if got is None:
        raise AlgebraError(f"{name!r} is not a product element name")
    return got


# ---------------------------------------------------------------- subalgebras

def _closure(a: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    sub = set(seed)
    for sym, k in a.signature.symbols:
        if k == 0:
            sub.add(int(a.tables[sym]))
    changed = True
    while changed:
        changed = False
        current = sorted(sub)
        for sym, k in a.signature.symbols:
            if k == 0:
                continue
            t = a.tables[sym]
            for args in itertools.product(current, repeat=k):
                v = int(t[args])
                if v not in sub:
                    sub.add(v)
                    changed = True
    return frozenset(sub)


def subuniverse_generated(a: FiniteAlgebra, seed: Iterable[str]) -> frozenset[str]:
    """Least subset containing ``seed`` and the constants, closed under all operations."""
    return frozenset(a.elements[i] for i in _closure(a, a.indices(seed)))


def all_subuniverses(a: FiniteAlgebra) -> list[frozenset[str]]:
    """Every subuniverse, ordered by size then by sorted element indices."""
    found: set[frozenset[int]] = set()
    frontier = [_closure(a, ())]
    found.add(frontier[0])
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(a.size):
                if x not in s:
                    t = _closure(a, s | {x})
                    if t not in found:
                        found.add(t)
                        nxt.append(t)
        frontier = nxt
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [frozenset(a.elements[i] for i in s) for s in ordered]


def subalgebra(a: FiniteAlgebra, universe: Iterable[str], name: str | None = None) -> FiniteAlgebra:
    idx = sorted(set(a.indices(universe)))
    if _closure(a, idx) != frozenset(idx):
        raise AlgebraError("the given set is not a subuniverse")
    renum = {old: new for new, old in enumerate(idx)}
    tables = {}
    for sym, k in a.signature.symbols:
        t = a.tables[sym]
        if k == 0:
            tables[sym] = np.int32(renum[int(t)])
        else:
            sub = t[np.ix_(*([idx] * k))]
            tables[sym] = np.vectorize(renum.__getitem__, otypes=[np.int32])(sub)
    return FiniteAlgebra(a.signature, tuple(a.elements[i] for i in idx), tables,
                         name if name is not None else "")


# ---------------------------------------------------------------- morphisms

def is_homomorphism(f: Mapping[str, str], a: FiniteAlgebra, b: FiniteAlgebra,
                    symbols: Iterable[str] | None = None) -> bool:
    """True iff ``f`` commutes with every operation (or only those in ``symbols``)."""
    if symbols is None:
        if a.signature != b.signature:
            raise AlgebraError("homomorphism check needs a shared signature")
        symbols = a.signature.names()
    fi = np.array([b.index(f[e]) for e in a.elements], dtype=np.int32)
    for sym in symbols:
        k = a.signature.arity(sym)
        ta, tb = a.tables[sym], b.tables[sym]
        if k == 0:
            if fi[int(ta)] != int(tb):
                return False
        elif k == 1:
            if not np.array_equal(fi[ta], tb[fi]):
                return False
        else:
            if not np.array_equal(fi[ta], tb[np.ix_(fi, fi)]):
                return False
    return True


# ---------------------------------------------------------------- identities

def _as_term(t: Formula | str) -> Formula:
    return parse_formula(t) if isinstance(t, str) else t


def check_identity(a: FiniteAlgebra, lhs: Formula | str, rhs: Formula | str) -> Verdict:
    lhs, rhs = _as_term(lhs), _as_term(rhs)
    variables, vals = a.evaluate_all([lhs, rhs])
    bad = np.nonzero(vals[0] != vals[1])[0]
    if bad.size == 0:
        return Verdict(True)
    k = int(bad[0])
    return Verdict(False, {"assignment": a.assignment_at(variables, k),
                           "lhs": a.elements[vals[0, k]], "rhs": a.elements[vals[1, k]]})


def check_quasi_identity(a: FiniteAlgebra, premises: Sequence[tuple[Formula | str, Formula | str]],
                         conclusion: tuple[Formula | str, Formula | str],
                         max_premises: int = 4) -> Verdict:
    if len(premises) > max_premises:
        raise CapExceeded(f"{len(premises)} premises exceed the bound {max_premises}")
    terms = []
    for lhs, rhs in list(premises) + [conclusion]:
        terms += [_as_term(lhs), _as_term(rhs)]
    variables, vals = a.evaluate_all(terms)
    ok = np.ones(vals.shape[1], dtype=bool)
    for i in range(len(premises)):
        ok &= vals[2 * i] == vals[2 * i + 1]
    bad = np.nonzero(ok & (vals[-2] != vals[-1]))[0]
    if bad.size == 0:
        return Verdict(True)
    return Verdict(False, {"assignment": a.assignment_at(variables, int(bad[0]))})


LATTICE_AXIOMS = (
    ("and-comm", "x & y", "y & x"),
    ("or-comm", "x | y", "y | x"),
    ("and-assoc", "x & (y & z)", "(x & y) & z"),
    ("or-assoc", "x | (y | z)", "(x | y) | z"),
    ("absorb-1", "x & (x | y)", "x"),
    ("absorb-2", "x | (x & y)", "x"),
    ("distrib", "x & (y | z)", "(x & y) | (x & z)"),
    ("bottom", "x | 0", "x"),
    ("top", "x & 1", "x"),
)
DM_AXIOMS = LATTICE_AXIOMS + (
    ("DM1", "~(x | y)", "~x & ~y"),
    ("DM2", "~(x & y)", "~x | ~y"),
    ("DM3", "x", "~~x"),
    ("neg-top", "~1", "0"),
    ("neg-bot", "~0", "1"),
)
IS_AXIOMS = (
    ("IS1", "#0", "0"),
    ("IS2", "x", "x & #x"),
    ("IS3", "#(x & y)", "#x & #y"),
    ("IS4", "~#x & #x", "0"),
)
STONE_IDENTITY = ("stone", "~#x | ~#~#x", "1")


def check_axioms(a: FiniteAlgebra, axioms=None) -> list[tuple[str, Verdict]]:
    """Run an axiom list (default: De Morgan axioms, plus IS1-IS4 and the Stone
    identity when nabla is present)."""
    if axioms is None:
        axioms = DM_AXIOMS
        if "nabla" in a.signature:
            axioms = axioms + IS_AXIOMS + (STONE_IDENTITY,)
    return [(name, check_identity(a, lhs, rhs)) for name, lhs, rhs in axioms]


def format_assignment(assignment: Mapping[str, str]) -> str:
    return ", ".join(f"{k}={v}" for k, v in assignment.items())


def format_axiom_results(results: Sequence[tuple[str, Verdict]]) -> str:
    lines = []
    for name, v in results:
        if v:
            lines.append(f"{name} PASS")
        else:
            w = v.witness
            lines.append(f"{name} FAIL {format_assignment(w['assignment'])} (lhs={w['lhs']} rhs={w['rhs']})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- file format

def format_algebra(a: FiniteAlgebra) -> str:
    lines = ["[algebra]", f"name = {a.name}", f"signature = {a.signature.name}",
             f"elements = {','.join(a.elements)}"]
    for sym, k in a.signature.symbols:
        t = a.tables[sym]
        entries = [a.elements[int(v)] for v in np.asarray(t).reshape(-1)]
        lines.append(f"op {sym} = {','.join(entries)}")
    return "\n".join(lines) + "\n"


class FormatError(ValueError):
    pass


def parse_algebra_section(pairs: list[tuple[int, str, str]]) -> FiniteAlgebra:
    """Build an algebra from the ``key = value`` lines of one ``[algebra]`` section."""
    meta: dict[str, str] = {}
    ops: dict[str, str] = {}
    for lineno, key, value in pairs:
        if key.startswith("op "):
            sym = key[3:].strip()
            if sym in ops:
                raise FormatError(f"line {lineno}: duplicate table {sym!r}")
            ops[sym] = value
        elif key in ("name", "signature", "elements"):
            if key in meta:
                raise FormatError(f"line {lineno}: duplicate key {key!r}")
            meta[key] = value
        else:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
    for key in ("signature", "elements"):
        if key not in meta:
            raise FormatError(f"missing key {key!r}")
    if meta["signature"] not in SIGNATURES:
        raise FormatError(f"unknown signature {meta['signature']!r}")
    sig = SIGNATURES[meta["signature"]]
    elements = tuple(e.strip() for e in meta["elements"].split(","))
    pos = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    tables = {}
    for sym, k in sig.symbols:
        if sym not in ops:
            raise FormatError(f"missing table for {sym!r}")
        entries = [e.strip() for e in ops.pop(sym).split(",")]
        if len(entries) != n ** k:
            raise FormatError(f"table {sym!r} has {len(entries)} entries, expected {n ** k}")
        try:
            vals = [pos[e] for e in entries]
        except KeyError as exc:
            raise FormatError(f"table {sym!r} mentions unknown element {exc.args[0]!r}") from None
        tables[sym] = np.array(vals, dtype=np.int32).reshape((n,) * k) if k else np.int32(vals[0])
    if ops:
        raise FormatError(f"tables for unknown symbols: {sorted(ops)}")
    try:
        return FiniteAlgebra(sig, elements, tables, meta.get("name", ""))
    except AlgebraError as exc:
        raise FormatError(str(exc)) from None


def split_sections(text: str) -> list[tuple[str, list[tuple[int, str, str]]]]:
    """Split ``[section]`` / ``key = value`` text; ``#`` starts a comment."""
    sections: list[tuple[str, list[tuple[int, str, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            sections.append((line[1:-1].strip(), []))
            continue
        if "=" not in line:
            raise FormatError(f"line {lineno}: expected 'key = value'")
        if not sections:
            raise FormatError(f"line {lineno}: key outside of a section")
        key, value = line.split("=", 1)
        key = " ".join(key.split())
        sections[-1][1].append((lineno, key, value.strip()))
    return sections


def parse_algebra(text: str) -> FiniteAlgebra:
    sections = split_sections(text)
    algs = [s for s in sections if s[0] == "algebra"]
    others = [s[0] for s in sections if s[0] != "algebra"]
    if others:
        raise FormatError(f"unexpected sections {others}")
    if len(algs) != 1:
        raise FormatError(f"expected exactly one [algebra] section, found {len(algs)}")
    return parse_algebra_section(algs[0][1])
