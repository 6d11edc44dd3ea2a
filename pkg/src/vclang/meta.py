"""Deciding language solvability and producing its certificates.

The pipeline (`is_solvable`) runs three phases, each built on the
cutting-plane driver from `fpoly`:

1. a greedy merge of domain labels into a maximal partition, where each merge
   is accepted by an LP-relaxation separation test (`partition_test`);
2. a search over the partition's transversals for a core: a unary fractional
   polymorphism whose support maps the domain onto one transversal
   (`conditional_core`);
3. a solvability test of the restricted core language via binary symmetric
   idempotent operations (finite-valued) or quaternary operations with a
   Siggers witness (`core_solvability_test`).

Phases 1 and 2 give one-sided ("conditional") answers: when the language is
not solvable they may misjudge intermediate questions, but any "solvable"
verdict is backed by certificates that are re-verified exhaustively before
being returned.  `brute_core` is the independent small-domain oracle used to
cross-check cores in tests.

Operations of arity m double as labelings of instances whose variables are
m-tuples of labels (or classes of such tuples); that identification is what
lets an LP probe of a plain VCSP instance discover new support operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .algebra import (
    CostFunction,
    FractionalOperation,
    Language,
    Operation,
    Partition,
    all_tuples,
    is_fractional_polymorphism,
    op_predicate,
    symmetry_partition,
    tuple_index,
    unary_op,
)
from .errors import BudgetError, InputError, InvariantError
from .fpoly import (
    ITERATION_CAP,
    CutSet,
    GammaPlus,
    Hyperplane,
    OpCut,
    BlpCut,
    SepResult,
    abort,
    cut,
    cutting_plane,
    farkas_extract,
    gamma_plus,
    hyperplane_for_op,
    in_y,
)
from .vcsp import Instance, Term, feas_plus, blp_solve, lp_probe, pin_term

M4_DOMAIN_CAP = 3
BRUTE_CORE_BUDGET = 300

MODES = (
    "core_search",
    "partition_full",
    "partition_quotient",
    "solvability",
    "solvability_quotient",
)


@dataclass(frozen=True)
class SeparationInstanceSpec:
    mode: str
    y: tuple[Fraction, ...]
    partition: Partition | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown separation mode {self.mode!r}")
        if self.mode.endswith("quotient") and self.partition is None:
            raise InputError("quotient modes need a partition")


def _var_mapper(spec: SeparationInstanceSpec, d: int, m: int):
    """Map an index-space column (an m-tuple of labels) to the variable it
    names in the separation instance of the given mode."""
    if spec.mode in ("core_search", "partition_full"):
        if m != 1:
            raise InputError(f"{spec.mode} expects unary tuple families")
        return d, lambda col: col[0]
    if spec.mode == "partition_quotient":
        if m != 1:
            raise InputError(f"{spec.mode} expects unary tuple families")
        part = spec.partition
        return part.num_blocks, lambda col: part.block_of[col[0]]
    if spec.mode == "solvability":
        return d**m, lambda col: tuple_index(col, d)
    part = spec.partition
    return part.num_blocks, lambda col: part.block_of[tuple_index(col, d)]


def build_separation_instance(
    language: Language, gp: GammaPlus, spec: SeparationInstanceSpec
) -> tuple[Instance, tuple[int | None, ...]]:
    """Instance whose labelings are candidate operations, one weighted term
    per index-space entry.

    Zero-weight entries of finite-valued functions are vacuous (their domain
    constraint allows everything) and are skipped; the second return value
    maps each entry to its term position, None for skipped ones.
    """
    if len(spec.y) != len(gp.entries):
        raise InputError("weight vector length does not match the index space")
    if any(w < 0 for w in spec.y):
        raise InputError("separation weights must be nonnegative")
    d = language.domain_size
    m = gp.arity
    num_vars, var_of = _var_mapper(spec, d, m)

    terms: list[Term] = []
    entry_term: list[int | None] = []
    for i, e in enumerate(gp.entries):
        f = language.functions[e.func_index]
        w = spec.y[i]
        if w == 0 and f.is_finite_valued:
            entry_term.append(None)
            continue
        entry_term.append(len(terms))
        terms.append(Term(f, tuple(var_of(col) for col in e.cols), w))

    if spec.mode in ("solvability", "solvability_quotient"):
        for a in range(d):
            terms.append(pin_term(d, var_of((a,) * m), a))

    return Instance(num_vars, d, tuple(terms)), tuple(entry_term)


def _h(gp: GammaPlus, y: Sequence[Fraction]) -> Fraction:
    return sum((y[i] * e.mean for i, e in enumerate(gp.entries) if y[i] != 0), Fraction(0))


# ---------------------------------------------------------------------------
# Candidate-core search


def separation_core(
    language: Language, gp: GammaPlus, candidate: Iterable[int], y: Sequence[Fraction]
) -> SepResult | None:
    """One probe of the core-search instance restricted to a candidate label
    set.  Returns the resulting violated cut, or None to assert that the
    candidate is no core (or the language not solvable)."""
    inst, _ = build_separation_instance(
        language, gp, SeparationInstanceSpec("core_search", tuple(y))
    )
    res = lp_probe(inst, candidate)
    if res.kind == "empty":
        raise InvariantError("core-search instance rejected the identity labeling")
    if res.kind == "fail":
        return None
    g = unary_op(language.domain_size, res.labeling)
    return cut(hyperplane_for_op(language, gp, g, True), OpCut(g, True))


@dataclass(frozen=True)
class CoreSearchOutcome:
    kind: str  # "omega" | "no_vector" | "conditional_fail"
    omega: FractionalOperation | None = None
    cuts: CutSet | None = None
    iterations: int = 0
    dead_candidates: int = 0


def candidate_core_search(
    language: Language,
    candidates: Iterable[Iterable[int]],
    *,
    iteration_cap: int = ITERATION_CAP,
) -> CoreSearchOutcome:
    """Cutting-plane search for a unary fractional polymorphism supported on
    maps into one of the candidate sets.

    Candidates are consumed lazily and die in order: a probe failure rules
    the current one out for good and the next is tried within the same
    separation call.  All dead means every candidate was rejected
    ("conditional fail"); a surviving weight vector means no such fractional
    polymorphism exists ("no vector")."""
    gp = gamma_plus(language, 1)
    stream = iter(candidates)
    state = {"current": next(stream, None), "dead": 0}
    if state["current"] is None:
        raise InputError("candidate core search needs at least one candidate")

    def sep(y):
        while state["current"] is not None:
            got = separation_core(language, gp, state["current"], y)
            if got is not None:
                return got
            state["dead"] += 1
            state["current"] = next(stream, None)
        return abort("all candidates rejected")

    out = cutting_plane(gp, sep, iteration_cap=iteration_cap)
    if out.kind == "feasible":
        return CoreSearchOutcome(
            "no_vector", cuts=out.cuts, iterations=out.iterations, dead_candidates=state["dead"]
        )
    if out.kind == "aborted":
        return CoreSearchOutcome(
            "conditional_fail",
            cuts=out.cuts,
            iterations=out.iterations,
            dead_candidates=state["dead"],
        )
    omega = farkas_extract(language, gp, out.cuts.op_cuts())
    if omega is None:
        raise InvariantError("infeasible cut system but no fractional polymorphism")
    return CoreSearchOutcome(
        "omega", omega=omega, cuts=out.cuts, iterations=out.iterations, dead_candidates=state["dead"]
    )


# ---------------------------------------------------------------------------
# Partition testing


def _entry_expectations(
    language: Language,
    gp: GammaPlus,
    spec: SeparationInstanceSpec,
    entry_term: Sequence[int | None],
    sol,
) -> list[Fraction]:
    """Expected cost of every index-space entry under a relaxation solution,
    using the product of the variable distributions for the entries whose
    terms were skipped as vacuous (they have full tables, so the product is
    an optimal choice of distribution for them)."""
    _, var_of = _var_mapper(spec, language.domain_size, gp.arity)
    out = []
    for e, ti in zip(gp.entries, entry_term):
        f = language.functions[e.func_index]
        if ti is not None:
            mu = sol.mu[ti]
            out.append(sum((p * f.entries[x] for x, p in mu.items()), Fraction(0)))
        else:
            supports = [sorted(sol.alpha[var_of(col)].items()) for col in e.cols]
            total = Fraction(0)
            for combo in itertools.product(*supports):
                x = tuple(a for a, _ in combo)
                w = Fraction(1)
                for _, p in combo:
                    w *= p
                total += w * f.entries[x]
            out.append(total)
    return out


def _integral_point(inst: Instance, sol, bound: Fraction) -> list[int] | None:
    """Round a relaxation solution to a labeling of value below the bound.

    Variables are pinned one at a time, cheapest-first within the current
    support and then over the rest of the domain, re-solving after each pin
    and keeping the optimum strictly under the bound.  Point-mass variables
    adopt their label for free.  Returns None when the greedy path dead-ends,
    which proves nothing about integral labelings in general."""
    cur = inst
    labeling: list[int] = []
    for v in range(inst.num_vars):
        alpha = sol.alpha[v]
        if len(alpha) == 1:
            (lbl,) = alpha
            labeling.append(lbl)
            cur = cur.with_terms((pin_term(inst.domain_size, v, lbl),))
            continue
        order = sorted(alpha) + [l for l in range(inst.domain_size) if l not in alpha]
        for lbl in order:
            trial = cur.with_terms((pin_term(inst.domain_size, v, lbl),))
            tsol = blp_solve(trial)
            if tsol.alpha is not None and tsol.value < bound:
                labeling.append(lbl)
                cur, sol = trial, tsol
                break
        else:
            return None
    return labeling


def _labeling_coeffs(
    language: Language, gp: GammaPlus, spec: SeparationInstanceSpec, labeling: Sequence[int]
) -> dict[int, Fraction]:
    """Hyperplane coefficients of the row induced by an integral labeling."""
    _, var_of = _var_mapper(spec, language.domain_size, gp.arity)
    coeffs: dict[int, Fraction] = {}
    for i, e in enumerate(gp.entries):
        f = language.functions[e.func_index]
        v = f.entries[tuple(labeling[var_of(col)] for col in e.cols)]
        if not isinstance(v, Fraction):
            raise InvariantError("integral labeling left the feasible set")
        if v != e.mean:
            coeffs[i] = v - e.mean
    return coeffs


def partition_separation(
    language: Language,
    gp: GammaPlus,
    partition: Partition,
    feas_full: Instance,
    feas_quotient: Instance,
    y: Sequence[Fraction],
) -> SepResult:
    """Produce a violated hyperplane from a relaxation optimum of the full or
    of the quotient instance, or accept y when neither is cheap enough.

    When a violation is found, the fractional optimum is first rounded toward
    an integral labeling still under the violation threshold; its row cuts
    just as validly (integral labelings are points of the same polytope) and
    carries structure the optimal vertex lacks, so the cut system closes in
    far fewer rounds.  The fractional row remains the fallback."""
    hy = _h(gp, y)

    def excess(spec: SeparationInstanceSpec, feas: Instance):
        inst, et = build_separation_instance(language, gp, spec)
        full = inst.with_terms(feas.terms)
        sol = blp_solve(full)
        if sol.alpha is None:
            return None, None, None
        exp = _entry_expectations(language, gp, spec, et, sol)
        coeffs = {i: exp[i] - e.mean for i, e in enumerate(gp.entries) if exp[i] != e.mean}
        dot = sum((y[i] * c for i, c in coeffs.items() if y[i] != 0), Fraction(0))
        return coeffs, dot, (full, sol)

    def sharpen(spec: SeparationInstanceSpec, solved, bound: Fraction):
        labeling = _integral_point(solved[0], solved[1], bound)
        if labeling is None:
            return None
        return _labeling_coeffs(language, gp, spec, labeling)

    fspec = SeparationInstanceSpec("partition_full", tuple(y))
    coeffs, dot, solved = excess(fspec, feas_full)
    if coeffs is not None and dot < 0:
        better = sharpen(fspec, solved, hy)
        return cut(Hyperplane(better if better is not None else coeffs, Fraction(0)),
                   BlpCut("instance"))

    qspec = SeparationInstanceSpec("partition_quotient", tuple(y), partition)
    qcoeffs, qdot, qsolved = excess(qspec, feas_quotient)
    if qcoeffs is not None and qdot < 1:
        better = sharpen(qspec, qsolved, hy + 1)
        return cut(Hyperplane(better if better is not None else qcoeffs, Fraction(-1)),
                   BlpCut("quotient"))

    return in_y()


def _improving_solution(
    language: Language, gp: GammaPlus, spec: SeparationInstanceSpec, feas: Instance
) -> bool:
    """Whether some relaxation solution of the quotient instance with every
    entry as a term weakly improves every entry at once.

    Entries sharing a function and a variable tuple share one distribution,
    which is confined to the tuples costing no more than the cheapest mean in
    the class; all distributions must agree with a single set of variable
    marginals, which is exactly a relaxation-feasibility question on a crisp
    instance.  The precomputed feasibility terms ride along, as they do in
    every oracle solve.  Such a solution's cut row has no positive coefficient
    yet demands total weight one, so no nonnegative vector satisfies it and
    the partition can be accepted outright — the cut loop would otherwise have
    to assemble the same conclusion from many shallow rows, and when the only
    certificates are fractional it may never finish assembling it."""
    d = language.domain_size
    num_vars, var_of = _var_mapper(spec, d, gp.arity)
    best: dict[tuple[int, tuple[int, ...]], Fraction] = {}
    for e in gp.entries:
        key = (e.func_index, tuple(var_of(col) for col in e.cols))
        m = best.get(key)
        if m is None or e.mean < m:
            best[key] = e.mean
    terms = []
    for (fi, vs), bound in sorted(best.items()):
        f = language.functions[fi]
        allowed = {x: Fraction(0) for x, v in f.entries.items() if v <= bound}
        terms.append(Term(CostFunction(f.arity, d, allowed), vs, Fraction(0)))
    sol = blp_solve(Instance(num_vars, d, tuple(terms) + feas.terms))
    return sol.alpha is not None


REJECT_CANDIDATE_CAP = 2000


def _reject_candidates(
    language: Language, gp: GammaPlus, partition: Partition
) -> Iterator[tuple[Fraction, ...]]:
    """Small-support weight vectors worth testing before the cut loop.

    A rejecting vector must keep the plain relaxation tight while the
    quotient pays extra, and the simplest shapes doing that put unit mass on
    minimum-cost entries whose label sets only meet after collapsing: a
    single entry whose labels fall together, or two label-disjoint entries
    pushed onto a common block.  Tight plain value is then automatic (disjoint
    scopes decompose), so only the quotient side needs the collapse to hurt.
    The cut loop can find such vectors too, but needs many rounds to corner
    them; handing them over directly keeps rejection cheap."""
    n = len(gp.entries)
    mins = [f.min_finite() for f in language.functions]
    info: list[tuple[int, frozenset[int], frozenset[int]]] = []
    for i, e in enumerate(gp.entries):
        if e.mean != mins[e.func_index]:
            continue
        labels = frozenset(c[0] for c in e.cols)
        blocks = frozenset(partition.block_of[c[0]] for c in e.cols)
        info.append((i, labels, blocks))
    zero, one = Fraction(0), Fraction(1)
    for i, labels, blocks in info:
        if len(blocks) < len(labels):
            y = [zero] * n
            y[i] = one
            yield tuple(y)
    pairs = []
    for a in range(len(info)):
        i, li, bi = info[a]
        for b in range(a + 1, len(info)):
            j, lj, bj = info[b]
            if not (li & lj) and (bi & bj):
                pairs.append((len(li) + len(lj), i, j))
    pairs.sort()
    for _, i, j in pairs[:REJECT_CANDIDATE_CAP]:
        y = [zero] * n
        y[i] = one
        y[j] = one
        yield tuple(y)


def partition_test(
    language: Language, partition: Partition, *, iteration_cap: int = ITERATION_CAP
) -> bool:
    """Conditionally accept a partition of the domain.

    True (accept) when the cut system closes, i.e. the relaxation optima keep
    refuting every candidate weight vector; in that case, if the language is
    solvable at all, it has a unary fractional polymorphism collapsing labels
    exactly along the partition.  False when a weight vector survives both
    relaxations, which unconditionally rules the partition out."""
    gp = gamma_plus(language, 1)
    zero = (Fraction(0),) * len(gp.entries)
    qspec = SeparationInstanceSpec("partition_quotient", zero, partition)
    jfull, _ = build_separation_instance(
        language, gp, SeparationInstanceSpec("partition_full", zero)
    )
    jquot, _ = build_separation_instance(language, gp, qspec)
    feas_full = feas_plus(jfull)
    feas_quotient = feas_plus(jquot)

    # one cut dominating every entry settles acceptance without any loop
    if _improving_solution(language, gp, qspec, feas_quotient):
        return True

    def sep(y):
        return partition_separation(language, gp, partition, feas_full, feas_quotient, y)

    # cheap unconditional rejections first: a surviving vector of support one
    # or two settles the question without growing any cut system
    for cand in _reject_candidates(language, gp, partition):
        if sep(cand).kind == "in_y":
            return False

    out = cutting_plane(gp, sep, iteration_cap=iteration_cap)
    if out.kind == "aborted":
        raise InvariantError("partition separation cannot abort")
    return out.kind == "infeasible"


def maximal_partition(
    language: Language, *, iteration_cap: int = ITERATION_CAP
) -> Partition:
    """Greedy label merging: scan label pairs once in lexicographic order,
    accepting a merge whenever the merged partition passes the test.  A pair
    rejected once stays rejected for all coarser partitions, so one pass
    reaches a maximal accepted partition in at most d(d-1)/2 tests."""
    d = language.domain_size
    part = Partition.singletons(d)
    for a in range(d):
        for b in range(a + 1, d):
            if part.block_of[a] == part.block_of[b]:
                continue
            cand = part.merge_labels(a, b)
            if partition_test(language, cand, iteration_cap=iteration_cap):
                part = cand
    return part


# ---------------------------------------------------------------------------
# Conditional core


def enumerate_candidate_cores(partition: Partition) -> Iterator[tuple[int, ...]]:
    """All transversals (one label per block), lexicographic, streamed."""
    for combo in itertools.product(*partition.blocks):
        yield tuple(sorted(combo))


@dataclass(frozen=True)
class CoreResult:
    core: tuple[int, ...]  # empty = "not solvable" was asserted along the way
    omega1: FractionalOperation | None
    partition: Partition
    diagnostics: dict = field(default_factory=dict)


def conditional_core(
    language: Language, partition: Partition, *, iteration_cap: int = ITERATION_CAP
) -> CoreResult:
    """Search the partition's transversals for a core of the language.

    Any produced distribution whose support maps the domain onto
    transversals yields the core B = image of the first support operation.
    Every other outcome asserts the language is not solvable (empty core)."""
    out = candidate_core_search(
        language, enumerate_candidate_cores(partition), iteration_cap=iteration_cap
    )
    diag = {
        "iterations": out.iterations,
        "dead_candidates": out.dead_candidates,
        "outcome": out.kind,
        "cuts": len(out.cuts) if out.cuts is not None else 0,
    }
    if out.kind != "omega":
        return CoreResult((), None, partition, diag)

    blocks = partition.block_of
    for g in out.omega.operations():
        image = sorted(g.image())
        hit = {blocks[a] for a in image}
        if len(image) != partition.num_blocks or len(hit) != partition.num_blocks:
            diag["non_transversal_op"] = g.table
            return CoreResult((), None, partition, diag)
    first = out.omega.operations()[0]
    return CoreResult(tuple(sorted(first.image())), out.omega, partition, diag)


# ---------------------------------------------------------------------------
# Core solvability


@dataclass(frozen=True)
class SolvOutcome:
    kind: str  # "omega" | "conditional_fail"
    omega: FractionalOperation | None = None
    reason: str = ""
    iterations: int = 0
    cuts: int = 0


def core_solvability_test(
    core_language: Language,
    finite_valued: bool | None = None,
    *,
    iteration_cap: int = ITERATION_CAP,
) -> SolvOutcome:
    """Solvability of a language assumed to be a core.

    Finite-valued: searches for a binary symmetric idempotent fractional
    polymorphism.  General-valued: quaternary idempotent with at least one
    Siggers operation in the support; domain capped at 3 (the instances probed
    have d^4 variables)."""
    if finite_valued is None:
        finite_valued = core_language.is_finite_valued
    d = core_language.domain_size
    m = 2 if finite_valued else 4
    if m == 4 and d > M4_DOMAIN_CAP:
        raise BudgetError(
            "quaternary_domain",
            f"general-valued solvability capped at domain {M4_DOMAIN_CAP}, got {d}",
            needed=d,
        )
    gp = gamma_plus(core_language, m)
    quotient = symmetry_partition(d, m)

    def sep(y):
        hy = _h(gp, y)
        qinst, _ = build_separation_instance(
            core_language, gp, SeparationInstanceSpec("solvability_quotient", tuple(y), quotient)
        )
        qres = lp_probe(qinst, range(d))
        if qres.kind in ("fail", "empty"):
            return abort(f"quotient probe {qres.kind}: not solvable or not a core")
        if qres.value < hy + 1:
            table = tuple(qres.labeling[quotient.block_of[i]] for i in range(d**m))
            g = Operation(m, d, table)
            return cut(hyperplane_for_op(core_language, gp, g, True), OpCut(g, True))
        if m == 4:
            inst, _ = build_separation_instance(
                core_language, gp, SeparationInstanceSpec("solvability", tuple(y))
            )
            res = lp_probe(inst, range(d))
            if res.kind in ("fail", "empty"):
                return abort(f"full probe {res.kind}: not solvable or not a core")
            if res.value < hy:
                g = Operation(m, d, tuple(res.labeling))
                minus = op_predicate(g, "siggers")
                return cut(hyperplane_for_op(core_language, gp, g, minus), OpCut(g, minus))
        return in_y()

    out = cutting_plane(gp, sep, iteration_cap=iteration_cap)
    if out.kind == "feasible":
        return SolvOutcome(
            "conditional_fail", reason="weight vector survived separation",
            iterations=out.iterations, cuts=len(out.cuts),
        )
    if out.kind == "aborted":
        return SolvOutcome(
            "conditional_fail", reason=str(out.reason),
            iterations=out.iterations, cuts=len(out.cuts),
        )
    omega = farkas_extract(core_language, gp, out.cuts.op_cuts())
    if omega is None:
        raise InvariantError("infeasible cut system but no fractional polymorphism")
    return SolvOutcome("omega", omega=omega, iterations=out.iterations, cuts=len(out.cuts))


# ---------------------------------------------------------------------------
# Pipeline


@dataclass(frozen=True)
class SolvabilityVerdict:
    solvable: bool
    partition: Partition
    core: tuple[int, ...]  # original labels, sorted
    omega1: FractionalOperation | None
    omega2: FractionalOperation | None  # over the relabeled core language
    trace: dict = field(default_factory=dict)


def _check_omega2_shape(omega: FractionalOperation, finite_valued: bool) -> None:
    ops = omega.operations()
    if not all(op_predicate(g, "idempotent") for g in ops):
        raise InvariantError("solvability certificate contains a non-idempotent operation")
    if finite_valued:
        if omega.arity != 2 or not all(op_predicate(g, "symmetric") for g in ops):
            raise InvariantError("finite-valued certificate must be binary symmetric")
    else:
        if omega.arity != 4 or not any(op_predicate(g, "siggers") for g in ops):
            raise InvariantError("general-valued certificate needs a Siggers operation")


def is_solvable(
    language: Language, *, iteration_cap: int = ITERATION_CAP
) -> SolvabilityVerdict:
    """Decide solvability, with verified certificates on the positive side.

    The result carries the maximal partition, the core (as original labels),
    a unary fractional polymorphism exposing it, and — when solvable — a
    fractional polymorphism of the restricted core language whose shape
    witnesses solvability.  Both certificates are re-verified against the
    defining inequalities before the verdict is returned."""
    part = maximal_partition(language, iteration_cap=iteration_cap)
    core_res = conditional_core(language, part, iteration_cap=iteration_cap)
    trace = {"partition_blocks": part.blocks, "core": dict(core_res.diagnostics)}
    if not core_res.core:
        return SolvabilityVerdict(False, part, (), None, None, trace)

    omega1 = core_res.omega1
    if not is_fractional_polymorphism(omega1, language):
        raise InvariantError("core certificate failed verification")

    core_language = language.restrict(core_res.core)
    finite = core_language.is_finite_valued
    solv = core_solvability_test(core_language, finite, iteration_cap=iteration_cap)
    trace["solvability"] = {
        "mode": "binary-symmetric" if finite else "quaternary-siggers",
        "outcome": solv.kind,
        "reason": solv.reason,
        "iterations": solv.iterations,
        "cuts": solv.cuts,
    }
    if solv.kind != "omega":
        return SolvabilityVerdict(False, part, core_res.core, omega1, None, trace)

    if not is_fractional_polymorphism(solv.omega, core_language):
        raise InvariantError("solvability certificate failed verification")
    _check_omega2_shape(solv.omega, finite)
    return SolvabilityVerdict(True, part, core_res.core, omega1, solv.omega, trace)


# ---------------------------------------------------------------------------
# Brute-force core oracle


def brute_core(
    language: Language, *, budget: int = BRUTE_CORE_BUDGET
) -> tuple[int, tuple[int, ...], FractionalOperation]:
    """Exact core size by trying every unary operation as a forced support
    member, in ascending image-size order.  Small domains only."""
    d = language.domain_size
    count = d**d
    if count > budget:
        raise BudgetError(
            "unary_ops",
            f"refusing to enumerate {count} unary operations (budget {budget})",
            needed=count,
        )
    gp = gamma_plus(language, 1)
    ops = [unary_op(d, t) for t in all_tuples(d, d)]
    ops.sort(key=lambda g: (len(g.image()), g.table))
    for g in ops:
        omega = farkas_extract(
            language, gp, [(g, True)] + [(h, False) for h in ops if h.table != g.table]
        )
        if omega is not None:
            image = tuple(sorted(g.image()))
            return len(image), image, omega
    raise InvariantError("identity operation must always extract")
