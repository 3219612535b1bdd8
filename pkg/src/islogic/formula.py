"""Formulas over the IS signature: AST, text grammar, substitution, enumeration.

Grammar (ASCII)::

    formula  := disj
    disj     := conj ('|' conj)*
    conj     := unary ('&' unary)*
    unary    := '~' unary | '#' unary | atom
    atom     := VAR | '0' | '1' | '(' formula ')' | 'cons' '(' formula ')'
              | 'incons' '(' formula ')'

``~`` is De Morgan negation, ``#`` is nabla, ``0``/``1`` are bottom/top.
Both binary connectives associate to the left.  Variables are identifiers;
a leading ``?`` marks a schematic (rule) variable.

Sequents are written ``G1, G2 |- D1, D2``; an empty side is written ``.``
or left blank.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import ClassVar, Iterable, Iterator, Mapping, Sequence


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula or sequent text.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class EnumerationCapExceeded(RuntimeError):
    pass


class Formula:
    """Base class of formula nodes.  Nodes are immutable and hashable."""

    __slots__ = ()
    symbol: ClassVar[str]
    arity: ClassVar[int]

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def depth(self) -> int:
        return 0

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def variables(self) -> tuple[str, ...]:
        """Variable names in order of first occurrence (left to right)."""
        seen: dict[str, None] = {}
        _collect_vars(self, seen)
        return tuple(seen)

    def connectives(self) -> frozenset[str]:
        out: set[str] = set()
        stack: list[Formula] = [self]
        while stack:
            f = stack.pop()
            if not isinstance(f, Var):
                out.add(f.symbol)
            stack.extend(f.children)
        return frozenset(out)

    def substitute(self, sigma: Mapping[str, "Formula"]) -> "Formula":
        return substitute(self, sigma)

    def __str__(self) -> str:
        return format_formula(self)


def _collect_vars(f: Formula, seen: dict[str, None]) -> None:
    if isinstance(f, Var):
        seen.setdefault(f.name, None)
        return
    for c in f.children:
        _collect_vars(c, seen)


def _cached_hash(self) -> int:
    return self._hash


@dataclass(frozen=True, slots=True, repr=False)
class Var(Formula):
    name: str
    _hash: int = field(init=False, compare=False)
    symbol: ClassVar[str] = "var"
    arity: ClassVar[int] = 0

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("var", self.name)))

    __hash__ = _cached_hash

    def __repr__(self) -> str:
        return f"Var({self.name!r})"

    @property
    def schematic(self) -> bool:
        return self.name.startswith("?")


@dataclass(frozen=True, slots=True, repr=False)
class Bot(Formula):
    symbol: ClassVar[str] = "bot"
    arity: ClassVar[int] = 0

    def __hash__(self) -> int:
        return 0x0B07

    def __repr__(self) -> str:
        return "Bot()"


@dataclass(frozen=True, slots=True, repr=False)
class Top(Formula):
    symbol: ClassVar[str] = "top"
    arity: ClassVar[int] = 0

    def __hash__(self) -> int:
        return 0x7095

    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True, slots=True, repr=False)
class _Unary(Formula):
    child: Formula
    _hash: int = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    arity: ClassVar[int] = 1

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.symbol, self.child)))
        object.__setattr__(self, "_depth", self.child.depth() + 1)

    __hash__ = _cached_hash

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)

    def depth(self) -> int:
        return self._depth

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.child!r})"


@dataclass(frozen=True, slots=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False)
    _depth: int = field(init=False, compare=False)
    arity: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.symbol, self.left, self.right)))
        object.__setattr__(self, "_depth", max(self.left.depth(), self.right.depth()) + 1)

    __hash__ = _cached_hash

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def depth(self) -> int:
        return self._depth

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class Neg(_Unary):
    symbol: ClassVar[str] = "neg"

    def __eq__(self, other):
        return self is other or (type(other) is Neg and self._hash == other._hash
                                 and self.child == other.child)

    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class Nabla(_Unary):
    symbol: ClassVar[str] = "nabla"

    def __eq__(self, other):
        return self is other or (type(other) is Nabla and self._hash == other._hash
                                 and self.child == other.child)

    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class And(_Binary):
    symbol: ClassVar[str] = "and"

    def __eq__(self, other):
        return self is other or (type(other) is And and self._hash == other._hash
                                 and self.left == other.left and self.right == other.right)

    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class Or(_Binary):
    symbol: ClassVar[str] = "or"

    def __eq__(self, other):
        return self is other or (type(other) is Or and self._hash == other._hash
                                 and self.left == other.left and self.right == other.right)

    __hash__ = _cached_hash


BOT = Bot()
TOP = Top()

NODE_TYPES: dict[str, type[Formula]] = {
    "neg": Neg, "nabla": Nabla, "and": And, "or": Or,
}

ALL_CONNECTIVES = ("neg", "nabla", "and", "or", "bot", "top")
DM_CONNECTIVES = ("neg", "and", "or", "bot", "top")


def make(symbol: str, *args: Formula) -> Formula:
    if symbol == "bot":
        return BOT
    if symbol == "top":
        return TOP
    return NODE_TYPES[symbol](*args)


def consistency(f: Formula) -> Formula:
    """The derived connective ``cons``: ~#(f & ~f)."""
    return Neg(Nabla(And(f, Neg(f))))


def inconsistency(f: Formula) -> Formula:
    """The derived connective ``incons``: #(f & ~f)."""
    return Nabla(And(f, Neg(f)))


# ---------------------------------------------------------------- substitution

def substitute(f: Formula, sigma: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Var):
        return sigma.get(f.name, f)
    if isinstance(f, _Unary):
        c = substitute(f.child, sigma)
        return f if c is f.child else type(f)(c)
    if isinstance(f, _Binary):
        lft = substitute(f.left, sigma)
        rgt = substitute(f.right, sigma)
        if lft is f.left and rgt is f.right:
            return f
        return type(f)(lft, rgt)
    return f


def compose_substitutions(sigma: Mapping[str, Formula],
                          tau: Mapping[str, Formula]) -> dict[str, Formula]:
    """Return ``sigma;tau`` so that ``f^(sigma;tau) == (f^sigma)^tau``."""
    out = {x: substitute(g, tau) for x, g in sigma.items()}
    for x, g in tau.items():
        out.setdefault(x, g)
    return out


def match(pattern: Formula, target: Formula,
          sigma: dict[str, Formula] | None = None) -> dict[str, Formula] | None:
    """One-sided matching: find ``s`` extending ``sigma`` with ``pattern^s == target``."""
    out = dict(sigma) if sigma else {}
    return out if _match_into(pattern, target, out) else None


def _match_into(p: Formula, t: Formula, sigma: dict[str, Formula]) -> bool:
    if isinstance(p, Var):
        bound = sigma.get(p.name)
        if bound is None:
            sigma[p.name] = t
            return True
        return bound == t
    if type(p) is not type(t):
        return False
    if isinstance(p, _Unary):
        return _match_into(p.child, t.child, sigma)
    if isinstance(p, _Binary):
        return _match_into(p.left, t.left, sigma) and _match_into(p.right, t.right, sigma)
    return True


# ---------------------------------------------------------------- subformulas

def dedupe(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(dict.fromkeys(fs))


def subformulas(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    """All subformulas of ``fs``, each formula before its own subformulas."""
    seen: dict[Formula, None] = {}
    for f in fs:
        stack = [f]
        while stack:
            g = stack.pop()
            if g in seen:
                continue
            seen[g] = None
            stack.extend(reversed(g.children))
    return tuple(seen)


def generalized_subformulas(base: Iterable[Formula],
                            schema: Iterable[Formula]) -> tuple[Formula, ...]:
    """``base`` plus every instance of a schema formula with its variables
    mapped into ``base``."""
    base = dedupe(base)
    out: dict[Formula, None] = dict.fromkeys(base)
    if not base:
        return ()
    for a in schema:
        names = a.variables()
        if not names:
            out.setdefault(a, None)
            continue
        for image in itertools.product(base, repeat=len(names)):
            out.setdefault(substitute(a, dict(zip(names, image))), None)
    return tuple(out)


SCHEMA_S = ("p", "~p")
SCHEMA_NABLA_EXTRA = ("#p", "~#p", "#~p", "~#~p")


def schema(name: str) -> tuple[Formula, ...]:
    """Named separator sets: ``S`` = {p, ~p}; ``SNABLA`` adds the four nabla forms."""
    key = name.upper().replace("_", "")
    if key == "S":
        texts = SCHEMA_S
    elif key in ("SNABLA", "S^NABLA", "SN"):
        texts = SCHEMA_S + SCHEMA_NABLA_EXTRA
    elif key in ("NONE", "EMPTY"):
        texts = ()
    else:
        raise KeyError(f"unknown schema {name!r}")
    return tuple(parse_formula(t) for t in texts)


def nabla_schema(phi: Iterable[Formula]) -> tuple[Formula, ...]:
    """Extend a separator set with #p, ~#p, #~p, ~#~p."""
    return dedupe(list(phi) + [parse_formula(t) for t in SCHEMA_NABLA_EXTRA])


# ---------------------------------------------------------------- enumeration

def enumerate_formulas(variables: Sequence[str], max_depth: int,
                       connectives: Iterable[str] = ALL_CONNECTIVES,
                       cap: int = 200_000) -> Iterator[Formula]:
    """Every formula of depth <= ``max_depth``, depth first, then by connective
    (~, #, &, |) and then by the positions of the children in this order."""
    conn = set(connectives)
    unknown = conn - set(ALL_CONNECTIVES)
    if unknown:
        raise ValueError(f"unknown connectives {sorted(unknown)}")
    layer: list[Formula] = [Var(v) for v in variables]
    if "bot" in conn:
        layer.append(BOT)
    if "top" in conn:
        layer.append(TOP)
    pool: list[Formula] = []
    count = 0
    for depth in range(max_depth + 1):
        if depth > 0:
            prev_exact = layer
            n_old = len(pool) - len(prev_exact)
            layer = []
            for sym in ("neg", "nabla"):
                if sym in conn:
                    layer.extend(NODE_TYPES[sym](x) for x in prev_exact)
            for sym in ("and", "or"):
                if sym not in conn:
                    continue
                node = NODE_TYPES[sym]
                for i, x in enumerate(pool):
                    for j, y in enumerate(pool):
                        if i >= n_old or j >= n_old:
                            layer.append(node(x, y))
        count += len(layer)
        if count > cap:
            raise EnumerationCapExceeded(f"formula pool exceeds cap {cap}")
        yield from layer
        pool.extend(layer)


def formula_pool(variables: Sequence[str], max_depth: int,
                 connectives: Iterable[str] = ALL_CONNECTIVES,
                 cap: int = 200_000) -> list[Formula]:
    return list(enumerate_formulas(variables, max_depth, connectives, cap))


@dataclass(frozen=True)
class Sequent:
    premises: tuple[Formula, ...]
    conclusions: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "premises", dedupe(self.premises))
        object.__setattr__(self, "conclusions", dedupe(self.conclusions))

    @property
    def single_conclusion(self) -> bool:
        return len(self.conclusions) == 1

    def formulas(self) -> tuple[Formula, ...]:
        return dedupe(self.premises + self.conclusions)

    def __str__(self) -> str:
        return format_sequent(self)


def enumerate_sequents(pool: Sequence[Formula], max_premises: int,
                       max_conclusions: int, min_conclusions: int = 0,
                       cap: int = 5_000_000) -> Iterator[Sequent]:
    total = (sum(math.comb(len(pool), k) for k in range(max_premises + 1))
             * sum(math.comb(len(pool), k) for k in range(min_conclusions, max_conclusions + 1)))
    if total > cap:
        raise EnumerationCapExceeded(f"{total} sequents exceed cap {cap}")
    for np_ in range(max_premises + 1):
        for prem in itertools.combinations(pool, np_):
            for nc in range(min_conclusions, max_conclusions + 1):
                for conc in itertools.combinations(pool, nc):
                    yield Sequent(prem, conc)


def sample_sequents(pool: Sequence[Formula], count: int, max_premises: int,
                    max_conclusions: int, seed: int,
                    min_conclusions: int = 0) -> list[Sequent]:
    """Draw ``count`` sequents uniformly (with replacement) from the pool of
    all sequents with at most the given numbers of distinct formulas per side."""
    rng = random.Random(seed)
    n = len(pool)
    p_sizes = list(range(max_premises + 1))
    p_weights = [math.comb(n, k) for k in p_sizes]
    c_sizes = list(range(min_conclusions, max_conclusions + 1))
    c_weights = [math.comb(n, k) for k in c_sizes]
    out = []
    for _ in range(count):
        kp = rng.choices(p_sizes, weights=p_weights)[0]
        kc = rng.choices(c_sizes, weights=c_weights)[0]
        prem = [pool[i] for i in sorted(rng.sample(range(n), kp))]
        conc = [pool[i] for i in sorted(rng.sample(range(n), kc))]
        out.append(Sequent(tuple(prem), tuple(conc)))
    return out


def random_formula(rng: random.Random, variables: Sequence[str], max_depth: int,
                   connectives: Iterable[str] = ALL_CONNECTIVES) -> Formula:
    conn = [c for c in ALL_CONNECTIVES if c in set(connectives)]
    atoms: list[Formula] = [Var(v) for v in variables]
    if "bot" in conn:
        atoms.append(BOT)
    if "top" in conn:
        atoms.append(TOP)
    ops = [c for c in conn if c in NODE_TYPES]
    if max_depth == 0 or not ops or rng.random() < 0.25:
        return rng.choice(atoms)
    sym = rng.choice(ops)
    node = NODE_TYPES[sym]
    if node.arity == 1:
        return node(random_formula(rng, variables, max_depth - 1, conn))
    return node(random_formula(rng, variables, max_depth - 1, conn),
                random_formula(rng, variables, max_depth - 1, conn))


# ---------------------------------------------------------------- text

_PREC = {"or": 1, "and": 2}
_OPCHAR = {"or": "|", "and": "&"}


def format_formula(f: Formula) -> str:
    return _fmt(f, 0)


def _fmt(f: Formula, min_prec: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bot):
        return "0"
    if isinstance(f, Top):
        return "1"
    if isinstance(f, Neg):
        return "~" + _fmt(f.child, 3)
    if isinstance(f, Nabla):
        return "#" + _fmt(f.child, 3)
    prec = _PREC[f.symbol]
    s = f"{_fmt(f.left, prec)} {_OPCHAR[f.symbol]} {_fmt(f.right, prec + 1)}"
    return f"({s})" if prec < min_prec else s


def format_formulas(fs: Iterable[Formula]) -> str:
    fs = list(fs)
    return ", ".join(format_formula(f) for f in fs) if fs else "."


def format_sequent(s: Sequent) -> str:
    return f"{format_formulas(s.premises)} |- {format_formulas(s.conclusions)}"


_UNICODE = {"¬": "~", "∇": "#", "∧": "&", "∨": "|", "⊥": "0", "⊤": "1", "⊢": "|-", "⊩": "|-"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = _UNICODE.get(text[i], text[i])
        if ch.isspace():
            i += 1
            continue
        if ch == "|" and i + 1 < n and text[i + 1] == "-":
            tokens.append(("TURN", "|-", i))
            i += 2
            continue
        if ch == "|-":
            tokens.append(("TURN", "|-", i))
            i += 1
            continue
        if ch in "()~#&|,./":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch in "01":
            tokens.append(("CONST", ch, i))
            i += 1
            continue
        if ch == "?" or ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            if ch == "?" and j == i + 1:
                raise FormulaSyntaxError("'?' must prefix a variable name", text, i)
            tokens.append(("IDENT", text[i:j], i))
            i = j
            continue
        raise FormulaSyntaxError(f"unexpected character {text[i]!r}", text, i)
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.advance()
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {kind!r}, found {shown!r}", self.text, tok[2])
        return tok

    def formula(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()[0]
        if kind == "~":
            self.advance()
            return Neg(self.unary())
        if kind == "#":
            self.advance()
            return Nabla(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, val, at = self.advance()
        if kind == "CONST":
            return BOT if val == "0" else TOP
        if kind == "(":
            f = self.formula()
            self.expect(")")
            return f
        if kind == "IDENT":
            if val in ("cons", "incons") and self.peek()[0] == "(":
                self.advance()
                arg = self.formula()
                self.expect(")")
                return consistency(arg) if val == "cons" else inconsistency(arg)
            return Var(val)
        shown = val or "end of input"
        raise FormulaSyntaxError(f"unexpected {shown!r}", self.text, at)

    def formula_list(self, stop: set[str]) -> list[Formula]:
        kind = self.peek()[0]
        if kind == ".":
            self.advance()
            return []
        if kind in stop:
            return []
        out = [self.formula()]
        while self.peek()[0] == ",":
            self.advance()
            out.append(self.formula())
        return out

    def done(self) -> None:
        kind, val, at = self.peek()
        if kind != "EOF":
            raise FormulaSyntaxError(f"unexpected trailing {val!r}", self.text, at)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.done()
    return f


def parse_formula_list(text: str) -> list[Formula]:
    p = _Parser(text)
    out = p.formula_list({"EOF"})
    p.done()
    return out


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    prem = p.formula_list({"TURN"})
    p.expect("TURN")
    conc = p.formula_list({"EOF"})
    p.done()
    return Sequent(tuple(prem), tuple(conc))


def read_sequent_lines(lines: Iterable[str]) -> list[Sequent]:
    """One sequent per line.  A ``#`` in column 0 starts a comment line
    (elsewhere ``#`` is nabla, so a sequent starting with nabla needs a
    leading space)."""
    out = []
    for line in lines:
        if line.startswith("#") or not line.strip():
            continue
        out.append(parse_sequent(line.rstrip("\n")))
    return out
