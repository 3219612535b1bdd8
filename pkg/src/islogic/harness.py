"""Scripted checks of the algebraic and proof-theoretic claims, with
text and line-record reports.

Checks run in a fixed order and never raise: a failure is a report entry
carrying a witness.  Reports leave timings out so that two runs with the same
selection, seed and profile print identical bytes.
"""

from __future__ import annotations

import multiprocessing
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .algebra import (
    ALGEBRA_NAMES,
    DM_AXIOMS,
    IS_AXIOMS,
    STONE_IDENTITY,
    all_subuniverses,
    check_identity,
    make_named_algebra,
    nabla_lift,
    subalgebra,
)
from .calculus import (
    DERIVABLE,
    RuleSet,
    analytic_universe,
    builtin_ruleset,
    derives,
    is_sound,
    or_transform,
    parse_ruleset,
    resolve_calculus,
    resolve_schema,
    single_conclusion_derives,
)
from .formula import (
    DM_CONNECTIVES,
    ALL_CONNECTIVES,
    Formula,
    Sequent,
    dedupe,
    enumerate_sequents,
    format_formula,
    format_sequent,
    formula_pool,
    random_formula,
    sample_sequents,
)
from .matrix import (
    LogicalMatrix,
    MatrixOracle,
    algebra_isomorphism,
    builtin_matrix,
    leibniz_by_enumeration,
    leibniz_by_polynomials,
    leibniz_congruence,
    lattice_filters,
    matrix_hat,
    matrix_isomorphism,
    reduce,
)


# ---------------------------------------------------------------- reports

@dataclass
class CheckResult:
    name: str
    criterion: int
    passed: bool
    detail: str = ""
    witness: str | None = None
    seconds: float = 0.0

    def record(self) -> str:
        parts = [f"CHECK {self.name} {'PASS' if self.passed else 'FAIL'}"]
        if self.detail:
            parts.append(self.detail)
        if self.witness:
            parts.append(f"witness={self.witness}")
        return " ".join(parts)

    def text(self, timings: bool = False) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:>2} {self.name}"
        if timings:
            head += f" ({self.seconds:.2f}s)"
        lines = [head]
        if self.detail:
            lines.append(f"      {self.detail}")
        if self.witness:
            lines.append(f"      witness: {self.witness}")
        return "\n".join(lines)


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)
    seed: int = 0
    profile: str = "smoke"

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def records(self) -> str:
        return "".join(r.record() + "\n" for r in self.results)

    def text(self, timings: bool = False) -> str:
        n_fail = sum(not r.passed for r in self.results)
        body = "\n".join(r.text(timings) for r in self.results)
        return (f"profile={self.profile} seed={self.seed}\n{body}\n"
                f"{len(self.results) - n_fail} passed, {n_fail} failed\n")

    def format(self, fmt: str = "text", timings: bool = False) -> str:
        return self.records() if fmt == "records" else self.text(timings)


@dataclass(frozen=True)
class Profile:
    name: str
    variables: tuple[str, ...]
    depth: int
    sample: int
    exhaustive: bool
    equality_premises: int
    hilbert_limit: int | None


PROFILES = {
    "smoke": Profile("smoke", ("p",), 1, 40, False, 1, 6),
    "full": Profile("full", ("p", "q"), 2, 500, True, 2, None),
}


# ---------------------------------------------------------------- crosscheck

@dataclass
class CrosscheckReport:
    total: int
    agreements: int
    derivable: int
    disagreements: list[tuple[int, str, str, str]]
    verdicts: list[bool] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def summary(self) -> str:
        return (f"compared={self.total} derivable={self.derivable} "
                f"disagreements={len(self.disagreements)}")

    def record(self, name: str = "crosscheck") -> str:
        return f"CHECK {name} {'PASS' if self.ok else 'FAIL'} {self.summary()}\n"

    def text(self) -> str:
        lines = [self.summary()]
        for i, s, got, why in self.disagreements:
            lines.append(f"#{i} {s} calculus={got} semantics={why}")
        lines.append("AGREE" if self.ok else "DISAGREE")
        return "\n".join(lines) + "\n"


_WORK: dict = {}


def _derive_one(i: int) -> tuple[int, bool]:
    w = _WORK
    s = w["sequents"][i]
    universe = analytic_universe(s.premises, s.conclusions, w["phi"])
    if w["padding"] is not None:
        universe = dedupe(universe + tuple(w["padding"][i]))
    out = derives(w["calculus"], s.premises, s.conclusions, universe)
    return i, out.derivable


def _parallel_derive(calculus: RuleSet, phi, sequents: Sequence[Sequent], padding, jobs: int) -> list[bool]:
    _WORK.update(calculus=calculus, phi=phi, sequents=sequents, padding=padding)
    try:
        if jobs <= 1 or len(sequents) < 50:
            return [_derive_one(i)[1] for i in range(len(sequents))]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs) as pool:
            out = dict(pool.imap_unordered(_derive_one, range(len(sequents)), chunksize=16))
        return [out[i] for i in range(len(sequents))]
    finally:
        _WORK.clear()


def _variables_of(sequents: Iterable[Sequent]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for s in sequents:
        for f in s.formulas():
            seen.update(dict.fromkeys(f.variables()))
    return tuple(sorted(seen))


def crosscheck_sequents(calculus: RuleSet, phi, matrices: Sequence[LogicalMatrix],
                        sequents: Sequence[Sequent], jobs: int = 1,
                        padding: Sequence[Sequence[Formula]] | None = None) -> CrosscheckReport:
    """Compare analytic derivability against matrix consequence on given sequents."""
    phi = resolve_schema(phi)
    verdicts = _parallel_derive(calculus, phi, sequents, padding, jobs)
    oracle = MatrixOracle(matrices, _variables_of(sequents) or ("p",))
    bad = []
    for i, (s, d) in enumerate(zip(sequents, verdicts)):
        sem = oracle(s.premises, s.conclusions)
        if bool(sem) != d:
            if sem:
                universe = analytic_universe(s.premises, s.conclusions, phi)
                if padding is not None:
                    universe = dedupe(universe + tuple(padding[i]))
                out = derives(calculus, s.premises, s.conclusions, universe)
                why = "valid; separating theory {" + ", ".join(map(format_formula, out.theory)) + "}"
            else:
                a = sem.witness["assignment"]
                why = f"invalid in {sem.witness['matrix']} at " + ",".join(f"{k}={x}" for k, x in a.items())
            bad.append((i, format_sequent(s), "derivable" if d else "underivable", why))
    return CrosscheckReport(len(sequents), len(sequents) - len(bad), sum(verdicts), bad, verdicts)


def random_sequent_crosscheck(calculus: RuleSet, phi, matrices: Sequence[LogicalMatrix],
                              count: int, variables: Sequence[str], depth: int, seed: int,
                              max_premises: int = 2, max_conclusions: int = 2,
                              connectives: Iterable[str] | None = None,
                              jobs: int = 1) -> CrosscheckReport:
    """Sample ``count`` sequents uniformly from the bounded pool and compare
    the calculus with the matrices on each."""
    if connectives is None:
        connectives = calculus.signature
    pool = formula_pool(variables, depth, [c for c in ALL_CONNECTIVES if c in set(connectives)])
    seqs = sample_sequents(pool, count, max_premises, max_conclusions, seed)
    return crosscheck_sequents(calculus, phi, matrices, seqs, jobs)


def exhaustive_sequents(variables: Sequence[str], depth: int, connectives: Iterable[str],
                        max_total: int = 2) -> list[Sequent]:
    """All sequents over the pool with at most ``max_total`` formulas in all."""
    pool = formula_pool(variables, depth, [c for c in ALL_CONNECTIVES if c in set(connectives)])
    out = []
    for s in enumerate_sequents(pool, max_total, max_total):
        if len(s.premises) + len(s.conclusions) <= max_total:
            out.append(s)
    return out


def padding_formulas(seed: int, n_sequents: int, variables: Sequence[str], depth: int,
                     connectives: Iterable[str], per_query: int = 10) -> list[list[Formula]]:
    rng = random.Random(seed)
    conn = list(connectives)
    return [[random_formula(rng, variables, depth, conn) for _ in range(per_query)]
            for _ in range(n_sequents)]


# ---------------------------------------------------------------- paper data

# r1..r21 after the disjunction transform, as displayed in the source example
OR_TRANSFORM_EXPECTED = """
r1v : . / #p | ~#p
r2v : #p | r / ~#~#p | r
r3v : ##p | r / #p | r
r4v : #p | r , ~#p | r / r
r5v : ~#p | r / #~p | r
r6v : #~~p | r / #p | r
r7v : #p | r / #~~p | r
r8v : #(p & q) | r / #p | r
r9v : #(p & q) | r / #q | r
r10v : #~(p & q) | r / #~p | #~q | r
r11v : #~p | r / #~(p & q) | r
r12v : #~q | r / #~(p & q) | r
r13v : #p | r , #q | r / #(p & q) | r
r14v : #~(p | q) | r / #~p | r
r15v : #~(p | q) | r / #~q | r
r16v : #(p | q) | r / #p | #q | r
r17v : #p | r / #(p | q) | r
r18v : #q | r / #(p | q) | r
r19v : #~p | r , #~q | r / #~(p | q) | r
r20v : . / ~#0
r21v : . / ~#~1
d1 : p / p | q
d2 : p | q / q | p
d3 : p | p / p
d4 : p | (q | r) / (p | q) | r
"""

PAIRINGS = (
    ("crosscheck-B", "R_B_MC", "S", ("builtin:DM4:up_a",), DM_CONNECTIVES),
    ("crosscheck-B-nabla", "R_B_MC+R_NABLA", "SNABLA", ("builtin:IS6:up_a",), ALL_CONNECTIVES),
    ("crosscheck-K", "S15", "S", ("builtin:K3:up_1", "builtin:K3:up_a"), ("neg", "and", "or")),
    ("crosscheck-K-nabla", "S15+R_NABLA", "SNABLA", ("builtin:IS5:up_1", "builtin:IS5:up_a"),
     ("neg", "nabla", "and", "or")),
    ("crosscheck-IS3", "S21", "SNABLA", ("builtin:IS3:top", "builtin:IS3:up_0"),
     ("neg", "nabla", "and", "or")),
)


def _m(ref: str) -> LogicalMatrix:
    return builtin_matrix(*ref.split(":")[1:])


# ---------------------------------------------------------------- checks

class _Context:
    def __init__(self, seed: int, profile: Profile, jobs: int):
        self.seed = seed
        self.profile = profile
        self.jobs = jobs
        self.cache: dict = {}


def _identities(names: Sequence[str], axioms) -> tuple[bool, str, str | None]:
    for n in names:
        a = make_named_algebra(n)
        for name, lhs, rhs in axioms:
            v = check_identity(a, lhs, rhs)
            if not v:
                return False, f"{n}: {name} fails", str(v.witness)
    return True, f"algebras={len(names)} identities={len(axioms)}", None


def check_dm_identities(ctx):
    return _identities(("DM4", "K3", "B2"), DM_AXIOMS)


def check_is_identities(ctx):
    return _identities(("IS3", "IS4", "IS5", "IS6"), DM_AXIOMS + IS_AXIOMS)


def check_stone(ctx):
    return _identities(("IS3", "IS4", "IS5", "IS6"), (STONE_IDENTITY,))


def _lift_check(src: str, dst: str):
    def check(ctx):
        f = algebra_isomorphism(nabla_lift(make_named_algebra(src)), make_named_algebra(dst))
        if f is None:
            return False, f"no isomorphism {src}^nabla -> {dst}", None
        return True, "map=" + ",".join(f"{k}>{v}" for k, v in f.items()), None
    return check


def check_leibniz_is6_top(ctx):
    theta = leibniz_congruence(_m("builtin:IS6:top"))
    ok = [set(b) for b in theta.blocks()] == [{"B"}, {"0", "a", "b", "1"}, {"T"}]
    return ok, f"omega={theta}", None if ok else str(theta)


def _reduced(ref: str):
    def check(ctx):
        theta = leibniz_congruence(_m(ref))
        return theta.is_identity, f"omega={theta}", None if theta.is_identity else str(theta)
    return check


def check_leibniz_oracle(ctx):
    count = 0
    for name in ALGEBRA_NAMES:
        a = make_named_algebra(name)
        for flt in lattice_filters(a):
            m = LogicalMatrix(a, frozenset(flt.elements))
            fast, poly, slow = leibniz_congruence(m), leibniz_by_polynomials(m), leibniz_by_enumeration(m)
            count += 1
            if not fast == poly == slow:
                return False, f"{name} up_{flt.generator}", \
                    f"refinement={fast} polynomials={poly} enumeration={slow}"
    return True, f"matrices={count} methods=refinement,polynomials,enumeration", None


def _reduction(src: str, dst: str):
    def check(ctx):
        r = reduce(_m(src))
        f = matrix_isomorphism(r, _m(dst))
        if f is None:
            return False, f"reduce({src}) has carrier {','.join(r.algebra.elements)}", str(sorted(r.designated))
        return True, "map=" + ",".join(f"{k}>{v}" for k, v in f.items()), None
    return check


HAT_MATRICES = ("builtin:DM4:up_a", "builtin:DM4:up_1", "builtin:K3:up_a", "builtin:K3:up_1", "builtin:B2:up_1")


def check_hat(ctx):
    for ref in HAT_MATRICES:
        m = _m(ref)
        if matrix_isomorphism(reduce(matrix_hat(m)), m) is None:
            return False, f"reduce(hat({ref})) differs", ref
    return True, f"matrices={len(HAT_MATRICES)}", None


NABLA_SOUND_ON = ("builtin:IS6:up_a", "builtin:IS6:up_1", "builtin:IS5:up_a", "builtin:IS5:up_1",
                  "builtin:IS4:up_1", "builtin:IS3:top", "builtin:IS3:up_0")


def _soundness(rs_name: str, refs: Sequence[str]):
    def check(ctx):
        rs = builtin_ruleset(rs_name)
        for ref in refs:
            for r in rs.rules:
                v = is_sound(r, _m(ref))
                if not v:
                    return False, f"{r.name} unsound on {ref}", str(v.witness["assignment"])
        return True, f"rules={len(rs)} matrices={len(refs)}", None
    return check


SEPARATIONS = (
    ("DS", "builtin:IS6:up_1", True), ("DS", "builtin:IS6:up_a", False),
    ("EM", "builtin:IS5:up_a", True), ("EM", "builtin:IS6:up_a", False),
    ("K1", "builtin:IS5:up_1", True), ("K1", "builtin:IS5:up_a", False),
    ("KLEQ", "builtin:IS5:up_1", True), ("KLEQ", "builtin:IS5:up_a", True),
    ("KLEQ", "builtin:IS6:up_a", False),
    ("ASSERT1", "builtin:IS6:top", True), ("ASSERT1", "builtin:IS6:up_1", False),
    ("AX_UP0", "builtin:IS3:up_0", True), ("AX_UP0", "builtin:IS6:up_a", False),
)


def check_separation(ctx):
    witnesses = []
    for rs_name, ref, expected in SEPARATIONS:
        rule = builtin_ruleset(rs_name).rules[0]
        v = is_sound(rule, _m(ref))
        if bool(v) != expected:
            return False, f"{rs_name} on {ref}: expected {'sound' if expected else 'unsound'}", str(v.witness)
        if not v:
            a = v.witness["assignment"]
            witnesses.append(f"{rs_name}@{ref[8:]}:" + ",".join(f"{k}={x}" for k, x in a.items()))
    return True, f"entries={len(SEPARATIONS)} " + " ".join(witnesses), None


EQUALITIES = (
    ("equality-IS6-a-b", ("builtin:IS6:up_a", "builtin:IS6:up_b")),
    ("equality-top-chain", ("builtin:IS6:top", "builtin:IS5:top", "builtin:IS4:top", "builtin:IS3:top")),
    ("equality-up0", ("builtin:IS6:up_0", "builtin:IS3:up_0")),
)


def _equality(refs: Sequence[str]):
    def check(ctx):
        p = ctx.profile
        variables = ("p", "q") if p.exhaustive else p.variables
        pool = formula_pool(variables, 1)
        seqs = list(enumerate_sequents(pool, p.equality_premises, 1, 1))
        oracles = [MatrixOracle([_m(r)], variables) for r in refs]
        for left, right in zip(oracles, oracles[1:]):
            for s in seqs:
                a = left(s.premises, s.conclusions)
                b = right(s.premises, s.conclusions)
                if bool(a) != bool(b):
                    w = a.witness or b.witness
                    return False, f"{left.matrices[0].label()} vs {right.matrices[0].label()}", \
                        f"{format_sequent(s)} {w['assignment']}"
        return True, f"sequents={len(seqs)} pairs={len(refs) - 1}", None
    return check


def _pairing_sequents(ctx, name: str, connectives) -> list[Sequent]:
    key = ("seqs", name)
    if key not in ctx.cache:
        p = ctx.profile
        pool = formula_pool(p.variables, p.depth, [c for c in ALL_CONNECTIVES if c in set(connectives)])
        seqs = sample_sequents(pool, p.sample, 2, 2, ctx.seed)
        if p.exhaustive:
            seen = set(seqs)
            seqs += [s for s in exhaustive_sequents(p.variables, 1, connectives) if s not in seen]
        ctx.cache[key] = seqs
    return ctx.cache[key]


def _crosscheck(name: str, calc: str, phi: str, refs: Sequence[str], connectives):
    def check(ctx):
        seqs = _pairing_sequents(ctx, name, connectives)
        rep = crosscheck_sequents(resolve_calculus(calc), phi, [_m(r) for r in refs], seqs, ctx.jobs)
        ctx.cache[("verdicts", name)] = rep.verdicts
        w = None
        if rep.disagreements:
            i, s, got, why = rep.disagreements[0]
            w = f"{s} calculus={got} semantics={why}"
        return rep.ok, rep.summary(), w
    return check


def _stability(name: str, calc: str, phi: str, refs: Sequence[str], connectives):
    def check(ctx):
        seqs = _pairing_sequents(ctx, name, connectives)
        rs = resolve_calculus(calc)
        base = ctx.cache.get(("verdicts", name))
        if base is None:
            base = _parallel_derive(rs, resolve_schema(phi), seqs, None, ctx.jobs)
        conn = [c for c in ALL_CONNECTIVES if c in set(connectives)]
        pad = padding_formulas(ctx.seed, len(seqs), ctx.profile.variables, ctx.profile.depth, conn)
        padded = _parallel_derive(rs, resolve_schema(phi), seqs, pad, ctx.jobs)
        flips = [i for i, (x, y) in enumerate(zip(base, padded)) if x != y]
        w = None
        if flips:
            i = flips[0]
            w = (f"{format_sequent(seqs[i])} {'derivable' if base[i] else 'underivable'} -> "
                 f"{'derivable' if padded[i] else 'underivable'} with "
                 + ", ".join(format_formula(f) for f in pad[i]))
        return not flips, f"queries={len(seqs)} flips={len(flips)}", w
    return check


def check_or_text(ctx):
    got = or_transform(builtin_ruleset("R_NABLA"))
    want = parse_ruleset(OR_TRANSFORM_EXPECTED, "expected")
    if len(got) != len(want):
        return False, f"rules={len(got)} expected={len(want)}", None
    for g, w in zip(got.rules, want.rules):
        if g.text() != w.text() or (g.premises, g.conclusions) != (w.premises, w.conclusions):
            return False, f"{g.name} differs", f"got '{g.text()}' expected '{w.text()}'"
    return True, f"rules={len(got)}", None


def hilbert_agreement(ctx_or_limit=None, rounds: int = 2):
    """Forward engine on the Hilbert calculus against IS6 with up_a, over every
    one-variable depth-one sequent with at most one premise.

    Returns ``(compared, misses, unsound)`` where misses are semantically
    valid sequents the engine did not derive."""
    rs = resolve_calculus("R_B_HILBERT+R_NABLA_OR")
    pool = formula_pool(["p"], 1)
    seqs = list(enumerate_sequents(pool, 1, 1, 1))
    if isinstance(ctx_or_limit, int):
        seqs = seqs[::max(1, len(seqs) // ctx_or_limit)][:ctx_or_limit]
    oracle = MatrixOracle([_m("builtin:IS6:up_a")], ["p"])
    misses, unsound = [], []
    for s in seqs:
        got = single_conclusion_derives(rs, s.premises, s.conclusions[0], engine="forward", rounds=rounds)
        sem = bool(oracle(s.premises, s.conclusions))
        if got.derivable and not sem:
            unsound.append(format_sequent(s))
        elif sem and not got.derivable:
            misses.append(format_sequent(s))
    return len(seqs), misses, unsound


def check_hilbert(ctx):
    n, misses, unsound = hilbert_agreement(ctx.profile.hilbert_limit)
    detail = f"compared={n} unsound={len(unsound)} misses={len(misses)}"
    if misses:
        detail += " flagged-misses=" + ";".join(misses)
    return not unsound, detail, unsound[0] if unsound else None


CENSUS = {
    frozenset({"B", "T"}): "IS2",
    frozenset({"B", "a", "T"}): "IS3",
    frozenset({"B", "b", "T"}): "IS3",
    frozenset({"B", "0", "1", "T"}): "IS4",
    frozenset({"B", "0", "a", "1", "T"}): "IS5",
    frozenset({"B", "0", "b", "1", "T"}): "IS5",
    frozenset({"B", "0", "a", "b", "1", "T"}): "IS6",
}


def check_census(ctx):
    a = make_named_algebra("IS6")
    subs = all_subuniverses(a)
    if set(subs) != set(CENSUS) or len(subs) != len(CENSUS):
        return False, f"found {len(subs)} subuniverses", str(sorted(sorted(s) for s in subs))
    for u, name in CENSUS.items():
        if algebra_isomorphism(subalgebra(a, u), make_named_algebra(name)) is None:
            return False, f"{{{','.join(sorted(u))}}} is not a copy of {name}", None
    counts: dict[str, int] = {}
    for name in CENSUS.values():
        counts[name] = counts.get(name, 0) + 1
    return True, "subuniverses=7 " + " ".join(f"{k}x{v}" for k, v in sorted(counts.items())), None


CHECKS: list[tuple[str, int, Callable]] = [
    ("DM-identities", 1, check_dm_identities),
    ("IS-identities", 1, check_is_identities),
    ("stone-identity", 1, check_stone),
    ("lift-DM4-IS6", 2, _lift_check("DM4", "IS6")),
    ("lift-K3-IS5", 2, _lift_check("K3", "IS5")),
    ("lift-B2-IS4", 2, _lift_check("B2", "IS4")),
    ("leibniz-IS6-top", 3, check_leibniz_is6_top),
    ("reduced-IS6-up_1", 3, _reduced("builtin:IS6:up_1")),
    ("reduced-IS6-up_a", 3, _reduced("builtin:IS6:up_a")),
    ("leibniz-oracle", 3, check_leibniz_oracle),
    ("reduce-IS6-top", 4, _reduction("builtin:IS6:top", "builtin:IS3:top")),
    ("reduce-IS6-up_0", 4, _reduction("builtin:IS6:up_0", "builtin:IS3:up_0")),
    ("hat-reduction", 5, check_hat),
    ("soundness-R_NABLA", 6, _soundness("R_NABLA", NABLA_SOUND_ON)),
    ("soundness-R_B_MC", 6, _soundness("R_B_MC", ("builtin:DM4:up_a",))),
    ("separation", 7, check_separation),
    *[(name, 8, _equality(refs)) for name, refs in EQUALITIES],
    *[(p[0], 9, _crosscheck(*p)) for p in PAIRINGS],
    *[("stability-" + p[0].split("-", 1)[1], 10, _stability(*p)) for p in PAIRINGS],
    ("or-transform-text", 11, check_or_text),
    ("hilbert-forward", 11, check_hilbert),
    ("subalgebra-census", 12, check_census),
]

CHECK_NAMES = tuple(name for name, _, _ in CHECKS)


def run_paper_checks(selection: Iterable[str] | str = "ALL", seed: int = 0,
                     profile: str | Profile = "smoke", jobs: int = 1) -> Report:
    """Run the selected checks in declared order.

    ``selection`` holds check names, criterion numbers as strings, or ``ALL``."""
    prof = PROFILES[profile] if isinstance(profile, str) else profile
    if isinstance(selection, str):
        selection = [selection]
    wanted = set(selection)
    if "ALL" not in wanted:
        unknown = wanted - set(CHECK_NAMES) - {str(c) for _, c, _ in CHECKS}
        if unknown:
            raise KeyError(f"unknown checks: {', '.join(sorted(unknown))}")
    ctx = _Context(seed, prof, jobs)
    report = Report(seed=seed, profile=prof.name)
    for name, crit, fn in CHECKS:
        if "ALL" not in wanted and name not in wanted and str(crit) not in wanted:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail, witness = fn(ctx)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail, witness = False, f"error {type(exc).__name__}", str(exc)
        report.results.append(CheckResult(name, crit, bool(ok), detail, witness,
                                          time.perf_counter() - t0))
    return report
