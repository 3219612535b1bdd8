"""Multiple-conclusion rule sets and analytic derivability.

A query ``premises |- conclusions`` relative to a finite universe is decided by
looking for a separating theory: a subset of the universe containing the
premises, missing every conclusion and closed under all rule instances that
stay inside the universe.  The search is a clause satisfiability problem with
one boolean per universe formula.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .algebra import CapExceeded, Verdict, format_assignment
from .formula import (
    DM_CONNECTIVES,
    ALL_CONNECTIVES,
    Formula,
    FormulaSyntaxError,
    Or,
    Sequent,
    Var,
    _Binary,
    _Unary,
    _Parser,
    dedupe,
    enumerate_sequents,
    format_formula,
    formula_pool,
    generalized_subformulas,
    match,
    nabla_schema,
    schema as named_schema,
    subformulas,
    substitute,
)
from .matrix import LogicalMatrix, mc_semantic_consequence

DERIVABLE = "Derivable"
UNDERIVABLE = "Underivable"

IS_SIGNATURE = frozenset(ALL_CONNECTIVES)
DM_SIGNATURE = frozenset(DM_CONNECTIVES)


class UnknownSymbolScope(ValueError):
    """A query uses a connective outside the calculus' declared signature."""


# ---------------------------------------------------------------- rules

def _schematic(f: Formula) -> Formula:
    names = [v for v in f.variables() if not v.startswith("?")]
    return substitute(f, {v: Var("?" + v) for v in names}) if names else f


def _plain(f: Formula) -> Formula:
    names = [v for v in f.variables() if v.startswith("?")]
    return substitute(f, {v: Var(v[1:]) for v in names}) if names else f


@dataclass(frozen=True)
class Rule:
    """Premises over conclusions; formulas use ``?``-prefixed rule variables."""

    name: str
    premises: tuple[Formula, ...]
    conclusions: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "premises", dedupe(_schematic(f) for f in self.premises))
        object.__setattr__(self, "conclusions", dedupe(_schematic(f) for f in self.conclusions))

    def formulas(self) -> tuple[Formula, ...]:
        return dedupe(self.premises + self.conclusions)

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for f in self.formulas():
            seen.update(dict.fromkeys(f.variables()))
        return tuple(seen)

    def connectives(self) -> frozenset[str]:
        out: set[str] = set()
        for f in self.formulas():
            out |= f.connectives()
        return frozenset(out)

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    def plain(self) -> tuple[tuple[Formula, ...], tuple[Formula, ...]]:
        return tuple(map(_plain, self.premises)), tuple(map(_plain, self.conclusions))

    def text(self) -> str:
        prem, conc = self.plain()
        side = lambda fs: " , ".join(format_formula(f) for f in fs) if fs else "."
        return f"{self.name} : {side(prem)} / {side(conc)}"

    def __str__(self) -> str:
        return self.text()


def parse_rule(line: str) -> Rule:
    """Read ``name : P1 , P2 / C1 , C2``; ``.`` marks an empty side."""
    name, sep, body = line.partition(":")
    name = name.strip()
    if not sep or not name or not all(ch.isalnum() or ch in "_^'-" for ch in name):
        raise FormulaSyntaxError("expected 'name : premises / conclusions'", line, 0)
    p = _Parser(body)
    prem = p.formula_list({"/"})
    p.expect("/")
    conc = p.formula_list({"EOF"})
    p.done()
    return Rule(name, tuple(prem), tuple(conc))


@dataclass(frozen=True)
class RuleSet:
    name: str
    rules: tuple[Rule, ...]
    signature: frozenset[str] = IS_SIGNATURE
    matrices: tuple[str, ...] = ()
    schema: str = ""

    def __post_init__(self):
        names = [r.name for r in self.rules]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ValueError(f"duplicate rule names in {self.name}: {sorted(dup)}")
        used = set()
        for r in self.rules:
            used |= r.connectives()
        extra = used - set(self.signature)
        if extra:
            raise ValueError(f"rules of {self.name} use {sorted(extra)} outside the declared signature")

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __getitem__(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def single_conclusion(self) -> bool:
        return all(len(r.conclusions) == 1 for r in self.rules)

    def text(self) -> str:
        return "".join(r.text() + "\n" for r in self.rules)


def parse_ruleset(text: str, name: str = "custom", signature: Iterable[str] | None = None) -> RuleSet:
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rules.append(parse_rule(stripped))
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(f"line {lineno}: {exc.args[0]}", line, exc.position) from None
    if signature is None:
        used: set[str] = set()
        for r in rules:
            used |= r.connectives()
        signature = IS_SIGNATURE if "nabla" in used else DM_SIGNATURE
    return RuleSet(name, tuple(rules), frozenset(signature))


def combine(rulesets: Sequence[RuleSet], name: str | None = None) -> RuleSet:
    """Union of rule sets; a clashing name with different content is prefixed
    by its set's name, identical duplicates are kept once."""
    rules: dict[str, Rule] = {}
    for rs in rulesets:
        for r in rs.rules:
            old = rules.get(r.name)
            if old is None:
                rules[r.name] = r
            elif (old.premises, old.conclusions) != (r.premises, r.conclusions):
                renamed = Rule(f"{rs.name}_{r.name}", r.premises, r.conclusions)
                rules[renamed.name] = renamed
    sig: set[str] = set()
    mats: list[str] = []
    for rs in rulesets:
        sig |= rs.signature
        mats += [m for m in rs.matrices if m not in mats]
    return RuleSet(name or "+".join(rs.name for rs in rulesets), tuple(rules.values()),
                   frozenset(sig), tuple(mats) if len(rulesets) == 1 else (),
                   rulesets[0].schema if len(rulesets) == 1 else "")


# ---------------------------------------------------------------- built-ins

_R_NABLA = """
r1 : . / #p , ~#p
r2 : #p / ~#~#p
r3 : ##p / #p
r4 : #p , ~#p / .
r5 : ~#p / #~p
r6 : #~~p / #p
r7 : #p / #~~p
r8 : #(p & q) / #p
r9 : #(p & q) / #q
r10 : #~(p & q) / #~p , #~q
r11 : #~p / #~(p & q)
r12 : #~q / #~(p & q)
r13 : #p , #q / #(p & q)
r14 : #~(p | q) / #~p
r15 : #~(p | q) / #~q
r16 : #(p | q) / #p , #q
r17 : #p / #(p | q)
r18 : #q / #(p | q)
r19 : #~p , #~q / #~(p | q)
r20 : . / ~#0
r21 : . / ~#~1
"""

_R_B_HILBERT = """
h1 : p & q / p
h2 : p & q / q
h3 : p , q / p & q
h4 : p / p | q
h5 : p | q / q | p
h6 : p | p / p
h7 : p | (q | r) / (p | q) | r
h8 : p | q & r / (p | q) & (p | r)
h9 : (p | q) & (p | r) / p | q & r
h10 : p | r / ~~p | r
h11 : ~~p | r / p | r
h12 : ~(p | q) | r / ~p & ~q | r
h13 : ~p & ~q | r / ~(p | q) | r
h14 : ~(p & q) | r / (~p | ~q) | r
h15 : (~p | ~q) | r / ~(p & q) | r
h16 : . / 1
h17 : . / ~0
h18 : 0 | p / p
h19 : ~1 | p / p
"""

_R_B_MC = """
b1 : p / ~~p
b2 : ~~p / p
b3 : p & q / p
b4 : p & q / q
b5 : p , q / p & q
b6 : ~p / ~(p & q)
b7 : ~q / ~(p & q)
b8 : ~(p & q) / ~p , ~q
b9 : p / p | q
b10 : q / p | q
b11 : p | q / p , q
b12 : ~p , ~q / ~(p | q)
b13 : ~(p | q) / ~p
b14 : ~(p | q) / ~q
b15 : . / 1
b16 : ~1 / .
b17 : . / ~0
b18 : 0 / .
"""

_S15 = """
s1 : p , q / p & q
s2 : p & q / p
s3 : p & q / q
s4 : ~p / ~(p & q)
s5 : ~q / ~(p & q)
s6 : ~(p & q) / ~p , ~q
s7 : p / p | q
s8 : q / p | q
s9 : ~(p | q) / ~p
s10 : ~(p | q) / ~q
s11 : ~p , ~q / ~(p | q)
s12 : p | q / p , q
s13 : p / ~~p
s14 : ~~p / p
s15 : p , ~p / q , ~q
"""

_S21_EXTRA = """
s16 : ~p , #p / p
s17 : ~p / p , ~#p
s18 : p / #p
s19 : p , ~#p / .
s20 : ~#p / ~p
s21 : . / ~p , #p
"""

_SINGLE = {
    "DS": ("ds : p & (~p | q) / q", DM_SIGNATURE),
    "K1": ("k1 : (p & ~p) | q / q", DM_SIGNATURE),
    "KLEQ": ("kleq : (p & ~p) | r / (q | ~q) | r", DM_SIGNATURE),
    "EM": ("em : . / p | ~p", DM_SIGNATURE),
    "ASSERT1": ("assert1 : p / ~#~p", IS_SIGNATURE),
    "ORDER3": ("order3a : ~p | r , #p | r / p | r\norder3b : ~#p | r / ~p | r", IS_SIGNATURE),
    "AXUP0": ("axup0 : . / p | ~#p", IS_SIGNATURE),
}

BUILTIN_RULESETS = ("R_NABLA", "R_NABLA_OR", "R_B_HILBERT", "R_B_MC", "S15", "S21",
                    "DS", "K1", "KLEQ", "EM", "ASSERT1", "ORDER3", "AX_UP0")


def _key(name: str) -> str:
    return name.upper().replace("_", "").replace("-", "")


def builtin_ruleset(name: str) -> RuleSet:
    key = _key(name)
    canonical = {_key(n): n for n in BUILTIN_RULESETS}.get(key)
    if canonical is None:
        raise KeyError(f"unknown rule set {name!r}; known: {', '.join(BUILTIN_RULESETS)}")
    if key == "RNABLA":
        rs = parse_ruleset(_R_NABLA, canonical, IS_SIGNATURE)
        return RuleSet(canonical, rs.rules, IS_SIGNATURE, (), "SNABLA")
    if key == "RNABLAOR":
        return or_transform(builtin_ruleset("R_NABLA"), name=canonical)
    if key == "RBHILBERT":
        rs = parse_ruleset(_R_B_HILBERT, canonical, DM_SIGNATURE)
        return RuleSet(canonical, rs.rules, DM_SIGNATURE, ("builtin:DM4:up_a",), "")
    if key == "RBMC":
        rs = parse_ruleset(_R_B_MC, canonical, DM_SIGNATURE)
        return RuleSet(canonical, rs.rules, DM_SIGNATURE, ("builtin:DM4:up_a",), "S")
    if key == "S15":
        rs = parse_ruleset(_S15, canonical, DM_SIGNATURE)
        return RuleSet(canonical, rs.rules, DM_SIGNATURE,
                       ("builtin:K3:up_1", "builtin:K3:up_a"), "S")
    if key == "S21":
        rs = parse_ruleset(_S15 + _S21_EXTRA, canonical, IS_SIGNATURE)
        return RuleSet(canonical, rs.rules, IS_SIGNATURE,
                       ("builtin:IS3:top", "builtin:IS3:up_0"), "S")
    text, sig = _SINGLE[key]
    return parse_ruleset(text, canonical, sig)


def resolve_calculus(spec: str) -> RuleSet:
    """``NAME[+NAME...]`` of built-ins."""
    parts = [p for p in spec.split("+") if p.strip()]
    if not parts:
        raise KeyError("empty calculus name")
    sets = [builtin_ruleset(p.strip()) for p in parts]
    return sets[0] if len(sets) == 1 else combine(sets)


# ---------------------------------------------------------------- or-transform

STRUCTURAL_OR = """
d1 : p / p | q
d2 : p | q / q | p
d3 : p | p / p
d4 : p | (q | r) / (p | q) | r
"""


def big_or(fs: Sequence[Formula]) -> Formula:
    """Left-nested disjunction of a nonempty sequence."""
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def fresh_context_variable(rs: RuleSet) -> str:
    used = set()
    for r in rs.rules:
        used |= set(r.variables())
    if "?r" not in used:
        return "r"
    k = 0
    while f"?p{k}" in used:
        k += 1
    return f"p{k}"


def or_transform(rs: RuleSet, name: str | None = None) -> RuleSet:
    """Single-conclusion rules obtained by disjoining a fresh context variable.

    Axioms ``. / D`` become ``. / \\/D``; ``G / .`` becomes ``G|x / x``; any
    other ``G / D`` becomes ``G|x / (\\/D)|x``.  The four structural
    disjunction rules are appended."""
    x = Var("?" + fresh_context_variable(rs))
    out = []
    for r in rs.rules:
        if not r.premises:
            conc = (big_or(r.conclusions),) if r.conclusions else (x,)
            out.append(Rule(r.name + "v", (), conc))
            continue
        prem = tuple(Or(f, x) for f in r.premises)
        conc = (Or(big_or(r.conclusions), x),) if r.conclusions else (x,)
        out.append(Rule(r.name + "v", prem, conc))
    structural = parse_ruleset(STRUCTURAL_OR, "structural", DM_SIGNATURE).rules
    taken = {r.name for r in out}
    out.extend(s for s in structural if s.name not in taken)
    return RuleSet(name or f"{rs.name}_OR", tuple(out), rs.signature | {"or"}, rs.matrices, "")


# ---------------------------------------------------------------- soundness

def is_sound(rule: Rule, ms: Sequence[LogicalMatrix] | LogicalMatrix) -> Verdict:
    prem, conc = rule.plain()
    return mc_semantic_consequence(ms, prem, conc)


def format_soundness(rs: RuleSet, ms: Sequence[LogicalMatrix] | LogicalMatrix, fmt: str = "text") -> str:
    """One line per rule: ``name sound`` / ``name UNSOUND matrix assignment``,
    or ``CHECK name PASS|FAIL ...`` records."""
    lines = []
    for r in rs.rules:
        v = is_sound(r, ms)
        bad = "" if v else f" {v.witness['matrix']} {format_assignment(v.witness['assignment'])}"
        if fmt == "records":
            lines.append(f"CHECK {r.name} {'PASS' if v else 'FAIL'}{bad}")
        else:
            lines.append(f"{r.name} {'sound' if v else 'UNSOUND'}{bad}")
    return "\n".join(lines) + "\n"


def unsound_rules(rs: RuleSet, ms: Sequence[LogicalMatrix] | LogicalMatrix) -> list[tuple[str, dict]]:
    out = []
    for r in rs.rules:
        v = is_sound(r, ms)
        if not v:
            out.append((r.name, v.witness))
    return out


# ---------------------------------------------------------------- instances

@functools.lru_cache(maxsize=200_000)
def _vars(f: Formula) -> frozenset[str]:
    return frozenset(f.variables())


class _Universe:
    """A growable formula set indexed by top connective and by each child of
    binary formulas, so partially bound patterns only meet plausible targets."""

    def __init__(self, formulas: Iterable[Formula] = ()):
        self.formulas: list[Formula] = []
        self.position: dict[Formula, int] = {}
        self.by_type: dict[type, list[Formula]] = {}
        self.by_left: dict[tuple, list[Formula]] = {}
        self.by_right: dict[tuple, list[Formula]] = {}
        self.by_shape: dict[tuple, list[Formula]] = {}
        for f in formulas:
            self.add(f)

    def add(self, f: Formula) -> bool:
        if f in self.position:
            return False
        self.position[f] = len(self.formulas)
        self.formulas.append(f)
        t = type(f)
        self.by_type.setdefault(t, []).append(f)
        if isinstance(f, _Binary):
            self.by_left.setdefault((t, f.left), []).append(f)
            self.by_right.setdefault((t, f.right), []).append(f)
            self.by_shape.setdefault((t, 0, type(f.left)), []).append(f)
            self.by_shape.setdefault((t, 1, type(f.right)), []).append(f)
        elif isinstance(f, _Unary):
            self.by_shape.setdefault((t, 0, type(f.child)), []).append(f)
        return True

    def candidates(self, pattern: Formula, sigma: dict[str, Formula]) -> Sequence[Formula]:
        if isinstance(pattern, Var):
            return self.formulas
        t = type(pattern)
        if isinstance(pattern, _Binary):
            if _vars(pattern.left) <= sigma.keys():
                return self.by_left.get((t, substitute(pattern.left, sigma)), ())
            if _vars(pattern.right) <= sigma.keys():
                return self.by_right.get((t, substitute(pattern.right, sigma)), ())
            if not isinstance(pattern.left, Var):
                return self.by_shape.get((t, 0, type(pattern.left)), ())
            if not isinstance(pattern.right, Var):
                return self.by_shape.get((t, 1, type(pattern.right)), ())
        elif isinstance(pattern, _Unary) and not isinstance(pattern.child, Var):
            return self.by_shape.get((t, 0, type(pattern.child)), ())
        return self.by_type.get(t, ())

    def __contains__(self, f: Formula) -> bool:
        return f in self.position

    def __len__(self) -> int:
        return len(self.formulas)


def _plan(rule: Rule) -> list[Formula]:
    return sorted(rule.formulas(), key=lambda f: -f.size())


def _extend(plan: Sequence[Formula], universe: _Universe,
            sigma: dict[str, Formula]) -> Iterator[dict[str, Formula]]:
    """Every extension of ``sigma`` sending each planned formula into the universe."""
    return _join([(f, universe) for f in plan], sigma)


def _join(plan: Sequence[tuple[Formula, _Universe]],
          sigma: dict[str, Formula]) -> Iterator[dict[str, Formula]]:
    """Extensions of ``sigma`` placing each pattern in its own target set."""
    def go(k: int, s: dict[str, Formula]):
        if k == len(plan):
            yield s
            return
        pat, target = plan[k]
        if _vars(pat) <= s.keys():
            if substitute(pat, s) in target:
                yield from go(k + 1, s)
            return
        for t in target.candidates(pat, s):
            ext = match(pat, t, s)
            if ext is not None:
                yield from go(k + 1, ext)

    yield from go(0, dict(sigma))


def _substitutions(plan: Sequence[Formula], universe: _Universe) -> Iterator[dict[str, Formula]]:
    return _extend(plan, universe, {})


def rule_instances(rule: Rule, universe: Iterable[Formula] | _Universe
                   ) -> Iterator[tuple[tuple[Formula, ...], tuple[Formula, ...]]]:
    """Instances of ``rule`` whose premises and conclusions all lie in ``universe``."""
    u = universe if isinstance(universe, _Universe) else _Universe(universe)
    seen = set()
    for sigma in _substitutions(_plan(rule), u):
        inst = (tuple(substitute(f, sigma) for f in rule.premises),
                tuple(substitute(f, sigma) for f in rule.conclusions))
        if inst not in seen:
            seen.add(inst)
            yield inst


# ---------------------------------------------------------------- search

@dataclass
class SearchOutcome:
    verdict: str
    premises: tuple[Formula, ...]
    conclusions: tuple[Formula, ...]
    universe: tuple[Formula, ...]
    theory: tuple[Formula, ...] | None = None
    instances: int = 0
    engine: str = "search"
    trace: list[str] = field(default_factory=list)

    @property
    def derivable(self) -> bool:
        return self.verdict == DERIVABLE

    def __bool__(self) -> bool:
        return self.derivable

    def text(self) -> str:
        lines = ["DERIVABLE" if self.derivable else "UNDERIVABLE"]
        if self.theory is not None:
            lines.append("theory: " + ("{" + ", ".join(format_formula(f) for f in self.theory) + "}"))
        lines.append(f"universe: {len(self.universe)} formulas, {self.instances} instances")
        lines += ["  " + step for step in self.trace]
        return "\n".join(lines) + "\n"


def _guard(rs: RuleSet, formulas: Iterable[Formula]) -> None:
    for f in formulas:
        extra = f.connectives() - set(rs.signature)
        if extra:
            raise UnknownSymbolScope(
                f"{format_formula(f)!r} uses {sorted(extra)}, outside the signature of {rs.name}")


def _all_instances(rs: RuleSet, u: _Universe, cap: int):
    out = []
    for r in rs.rules:
        for inst in rule_instances(r, u):
            out.append(inst)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} rule instances")
    return out


def is_closed(theory: Iterable[Formula], rs: RuleSet, universe: Iterable[Formula]) -> tuple[str, tuple] | None:
    """Return the first instance (rule name, instance) violating closure, or None."""
    t = set(theory)
    u = _Universe(universe)
    for r in rs.rules:
        for prem, conc in rule_instances(r, u):
            if all(f in t for f in prem) and not any(f in t for f in conc):
                return r.name, (prem, conc)
    return None


def encode_clauses(u: _Universe, premises: Sequence[Formula], conclusions: Sequence[Formula],
                   instances) -> tuple[np.ndarray, np.ndarray]:
    """CSR clause arrays for the solver: premises as positive units, conclusions
    as negative units, and each instance as (not P) or C.  Literal ``2*i`` says
    formula ``i`` is in the theory, ``2*i+1`` that it is not."""
    starts = [0]
    lits: list[int] = []
    for f in premises:
        lits.append(2 * u.position[f])
        starts.append(len(lits))
    for f in conclusions:
        lits.append(2 * u.position[f] + 1)
        starts.append(len(lits))
    for prem, conc in instances:
        clause = {2 * u.position[f] + 1 for f in prem} | {2 * u.position[f] for f in conc}
        if any(lit ^ 1 in clause for lit in clause):
            continue
        lits.extend(sorted(clause))
        starts.append(len(lits))
    return np.array(starts, dtype=np.int32), np.array(lits, dtype=np.int32)


def derives(rs: RuleSet, premises: Iterable[Formula], conclusions: Iterable[Formula],
            universe: Iterable[Formula], max_universe: int = 2000,
            max_instances: int = 1_000_000, validate: bool = True) -> SearchOutcome:
    """Decide ``premises |-_rs conclusions`` using only formulas of ``universe``."""
    premises = dedupe(premises)
    conclusions = dedupe(conclusions)
    _guard(rs, premises + conclusions)
    u = _Universe(universe)
    missing = [f for f in premises + conclusions if f not in u]
    if missing:
        raise ValueError(f"{format_formula(missing[0])!r} is not in the universe")
    if len(u) > max_universe:
        raise CapExceeded(f"universe of {len(u)} formulas exceeds cap {max_universe}")
    insts = _all_instances(rs, u, max_instances)
    starts, lits = encode_clauses(u, premises, conclusions, insts)
    model = _kernels.solve(len(u), starts, lits)
    if model is None:
        return SearchOutcome(DERIVABLE, premises, conclusions, u.formulas, None, len(insts))
    theory = tuple(f for f, bit in zip(u.formulas, model) if bit)
    if validate:
        bad = is_closed(theory, rs, u.formulas)
        if bad is not None or not set(premises) <= set(theory) or set(conclusions) & set(theory):
            raise AssertionError(f"separating theory failed re-validation: {bad}")
    return SearchOutcome(UNDERIVABLE, premises, conclusions, u.formulas, theory, len(insts))


def resolve_schema(phi: str | Iterable[Formula] | None) -> tuple[Formula, ...]:
    if phi is None:
        return ()
    if isinstance(phi, str):
        return named_schema(phi)
    return tuple(phi)


def analytic_universe(premises: Iterable[Formula], conclusions: Iterable[Formula],
                      phi: str | Iterable[Formula] | None) -> tuple[Formula, ...]:
    return generalized_subformulas(subformulas(list(premises) + list(conclusions)), resolve_schema(phi))


def derives_analytic(rs: RuleSet, phi: str | Iterable[Formula] | None,
                     premises: Iterable[Formula], conclusions: Iterable[Formula],
                     extra: Iterable[Formula] = (), **kw) -> SearchOutcome:
    premises = dedupe(premises)
    conclusions = dedupe(conclusions)
    _guard(rs, premises + conclusions)
    universe = dedupe(analytic_universe(premises, conclusions, phi) + tuple(extra))
    return derives(rs, premises, conclusions, universe, **kw)


# ---------------------------------------------------------------- single conclusion

def hilbert_universe(premises: Iterable[Formula], conclusion: Formula,
                     phi: str | Iterable[Formula] | None = "S", rounds: int = 2) -> tuple[Formula, ...]:
    """Generalized subformulas under the nabla-extended schema, then ``rounds``
    passes adding x|y and y|x for x in the set so far and y a query subformula."""
    premises = list(premises)
    sub = subformulas(premises + [conclusion])
    lam: dict[Formula, None] = dict.fromkeys(
        generalized_subformulas(sub, nabla_schema(resolve_schema(phi))))
    for _ in range(rounds):
        current = list(lam)
        for x in current:
            for y in sub:
                lam.setdefault(Or(x, y), None)
                lam.setdefault(Or(y, x), None)
    return tuple(lam)


def forward_closure(rs: RuleSet, premises: Iterable[Formula], universe: Iterable[Formula],
                    goal: Formula | None = None,
                    parents: dict | None = None) -> list[Formula]:
    """Close ``premises`` under single-conclusion rule instances inside ``universe``.

    Semi-naive rounds: an instance is built only when one of its premises was
    derived in the previous round.  ``parents`` receives, for each derived
    formula, the rule name and premise instances that first produced it."""
    u = universe if isinstance(universe, _Universe) else _Universe(universe)
    facts = _Universe(premises)
    if parents is None:
        parents = {}
    rules = []
    for r in rs.rules:
        if len(r.conclusions) != 1:
            raise ValueError(f"rule {r.name} is not single-conclusion")
        rules.append((r, sorted(r.premises, key=lambda f: -f.size())))
    new: list[Formula] = []

    def record(r: Rule, s: dict[str, Formula]) -> None:
        c = substitute(r.conclusions[0], s)
        if c not in facts and c not in parents:
            parents[c] = (r.name, tuple(substitute(p, s) for p in r.premises))
            new.append(c)

    for r, _ in rules:
        if not r.premises:
            for s in _extend(r.conclusions, u, {}):
                record(r, s)
    delta = _Universe(facts.formulas)
    while True:
        for r, plan in rules:
            conc = r.conclusions[0]
            for i, pat in enumerate(plan):
                # the conclusion goes first unless it is a bare variable:
                # a bound child narrows its candidates to a handful
                rest = [(f, facts) for f in plan[:i] + plan[i + 1:]]
                rest = ([(conc, u)] + rest) if not isinstance(conc, Var) else (rest + [(conc, u)])
                for t in delta.candidates(pat, {}):
                    s0 = match(pat, t)
                    if s0 is None:
                        continue
                    for s in _join(rest, s0):
                        record(r, s)
        if not new:
            break
        for f in new:
            facts.add(f)
        delta, new = _Universe(new), []
        if goal is not None and goal in facts:
            break
    return facts.formulas


def proof_steps(goal: Formula, parents: dict) -> list[str]:
    """The applied instances leading to ``goal``, premises before conclusions."""
    out: list[str] = []
    done: set[Formula] = set()

    def visit(f: Formula) -> None:
        if f in done or f not in parents:
            return
        done.add(f)
        name, prem = parents[f]
        for p in prem:
            visit(p)
        shown = " , ".join(format_formula(p) for p in prem) or "."
        out.append(f"{name} : {shown} / {format_formula(f)}")

    visit(goal)
    return out


def single_conclusion_derives(rs: RuleSet, premises: Iterable[Formula], conclusion: Formula,
                              universe: Iterable[Formula] | None = None,
                              phi: str | Iterable[Formula] | None = None,
                              engine: str = "search", rounds: int = 2) -> SearchOutcome:
    """``premises |- conclusion``.

    ``engine="search"`` runs the separating-theory search; ``"forward"``
    forward-chains a single-conclusion rule set.  Without an explicit
    universe, the search uses the analytic universe for ``phi`` and the
    forward engine uses :func:`hilbert_universe`."""
    premises = dedupe(premises)
    _guard(rs, premises + (conclusion,))
    if engine == "search":
        if universe is None:
            universe = analytic_universe(premises, (conclusion,), phi)
        return derives(rs, premises, (conclusion,), universe)
    if engine != "forward":
        raise ValueError(f"unknown engine {engine!r}")
    if not rs.single_conclusion:
        raise ValueError(f"{rs.name} has rules without exactly one conclusion")
    if universe is None:
        universe = hilbert_universe(premises, conclusion, "S" if phi is None else phi, rounds)
    universe = dedupe(tuple(premises) + tuple(universe))
    parents: dict = {}
    closure = set(forward_closure(rs, premises, universe, goal=conclusion, parents=parents))
    ok = conclusion in closure
    return SearchOutcome(DERIVABLE if ok else UNDERIVABLE, premises, (conclusion,),
                         tuple(universe), None if ok else tuple(f for f in universe if f in closure),
                         len(parents), "forward", proof_steps(conclusion, parents) if ok else [])


# ---------------------------------------------------------------- oracles

Oracle = Callable[[Sequence[Formula], Sequence[Formula]], object]


def calculus_oracle(rs: RuleSet, phi: str | Iterable[Formula] | None) -> Oracle:
    phi_formulas = resolve_schema(phi)
    return lambda prem, conc: derives_analytic(rs, phi_formulas, prem, conc)


def matrix_oracle(ms: Sequence[LogicalMatrix] | LogicalMatrix, variables: Sequence[str] | None = None) -> Oracle:
    if variables is not None:
        from .matrix import MatrixOracle
        return MatrixOracle(ms, variables)
    return lambda prem, conc: mc_semantic_consequence(ms, prem, conc)


@dataclass
class EqualityReport:
    total: int
    agreements: int
    disagreements: list[tuple[int, Sequent, bool, bool, object]]

    @property
    def equal(self) -> bool:
        return not self.disagreements

    def text(self) -> str:
        lines = [f"compared {self.total} sequents: {self.agreements} agree, "
                 f"{len(self.disagreements)} disagree"]
        for idx, s, v1, v2, w in self.disagreements:
            lines.append(f"  #{idx} {s}  first={'yes' if v1 else 'no'} second={'yes' if v2 else 'no'}"
                         + (f"  witness={w}" if w else ""))
        return "\n".join(lines) + "\n"


def compare_oracles(o1: Oracle, o2: Oracle, sequents: Iterable[Sequent],
                    limit: int | None = None) -> EqualityReport:
    total = agree = 0
    bad = []
    for idx, s in enumerate(sequents):
        r1 = o1(s.premises, s.conclusions)
        r2 = o2(s.premises, s.conclusions)
        total += 1
        if bool(r1) == bool(r2):
            agree += 1
        elif limit is None or len(bad) < limit:
            w = getattr(r1, "witness", None) or getattr(r2, "witness", None)
            if w is None:
                w = getattr(r1, "theory", None) or getattr(r2, "theory", None)
                if w is not None:
                    w = "{" + ", ".join(format_formula(f) for f in w) + "}"
            bad.append((idx, s, bool(r1), bool(r2), w))
    return EqualityReport(total, agree, bad)


def bounded_logic_equality(o1: Oracle, o2: Oracle, variables: Sequence[str], depth: int,
                           max_premises: int, max_conclusions: int = 1, min_conclusions: int = 1,
                           connectives: Iterable[str] = ALL_CONNECTIVES,
                           cap: int = 5_000_000) -> EqualityReport:
    """Compare two consequence predicates on every sequent over the bounded pool."""
    pool = formula_pool(variables, depth, connectives)
    seqs = enumerate_sequents(pool, max_premises, max_conclusions, min_conclusions, cap)
    return compare_oracles(o1, o2, seqs)
