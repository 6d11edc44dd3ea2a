"""Weighted-tuple index space, hyperplanes, and the cutting-plane driver.

For a language Gamma and an arity m, the index space (`GammaPlus`) collects
every pair (f, xbar) of a cost function and an ordered m-tuple of dom-f rows.
An m-ary operation g turns each pair into a number f(g(xbar)) - mean(f over
the rows), giving a hyperplane over the index space.  A nonnegative vector y
satisfying all hyperplanes of a set of operations is a witness that no
fractional polymorphism lives on that set; conversely, when no such y exists,
`farkas_extract` recovers an explicit fractional polymorphism with support in
the set, as a vertex of a small LP, which bounds the support size by
1 + |index space|.

`cutting_plane` searches for such a y against a caller-supplied separation
oracle, accumulating violated hyperplanes until either a vertex survives
separation (Feasible) or the accumulated system has no nonnegative solution
(Infeasible).  It is driven purely by exact rational LP solves, so a repeated
cut can only mean a broken oracle and is reported as such.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import (
    CostFunction,
    FractionalOperation,
    Language,
    Operation,
    apply_op,
    tuple_index,
)
from .errors import BudgetError, InputError, InvariantError, IterationCapError
from .ratlp import LinearProgram, constraint, lp_solve

ITERATION_CAP = 400
BRUTE_OP_BUDGET = 100_000


@dataclass(frozen=True)
class GammaPlusEntry:
    func_index: int
    xbar: tuple[tuple[int, ...], ...]  # m rows, each a dom-f tuple
    mean: Fraction  # average cost of the rows
    cols: tuple[tuple[int, ...], ...]  # per argument position, the column m-tuple


@dataclass(frozen=True)
class GammaPlus:
    language: Language
    arity: int
    entries: tuple[GammaPlusEntry, ...]


def gamma_plus(language: Language, m: int) -> GammaPlus:
    """All (function, m rows from dom f) pairs, functions in language order,
    rows in lexicographic order."""
    if m < 1:
        raise InputError("tuple-family arity must be >= 1")
    entries = []
    for fi, f in enumerate(language.functions):
        for xbar in itertools.product(f.dom, repeat=m):
            mean = sum(f.entries[x] for x in xbar) / Fraction(m)
            cols = tuple(tuple(row[j] for row in xbar) for j in range(f.arity))
            entries.append(GammaPlusEntry(fi, xbar, mean, cols))
    return GammaPlus(language, m, tuple(entries))


@dataclass(frozen=True)
class Hyperplane:
    """Sparse row ⟨coeffs, y⟩ + constant >= 0 over the index space."""

    coeffs: dict[int, Fraction]
    constant: Fraction

    def value_at(self, y: Sequence[Fraction]) -> Fraction:
        return sum((c * y[i] for i, c in self.coeffs.items()), self.constant)


@dataclass(frozen=True)
class OpCut:
    op: Operation
    in_minus: bool


@dataclass(frozen=True)
class BlpCut:
    case: str  # "instance" or "quotient"


@dataclass(frozen=True)
class NonNeg:
    index: int


@dataclass(frozen=True)
class Cut:
    hyperplane: Hyperplane
    provenance: object


@dataclass
class CutSet:
    cuts: list[Cut] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cuts)

    def op_cuts(self) -> list[tuple[Operation, bool]]:
        return [
            (c.provenance.op, c.provenance.in_minus)
            for c in self.cuts
            if isinstance(c.provenance, OpCut)
        ]


def hyperplane_for_op(
    language: Language, gp: GammaPlus, g: Operation, in_minus: bool
) -> Hyperplane:
    """The hyperplane of an operation: coefficient f(g(xbar)) - mean at each
    entry, constant -1 when the operation must carry weight."""
    if g.arity != gp.arity or g.domain_size != language.domain_size:
        raise InputError("operation arity/domain does not match the index space")
    coeffs: dict[int, Fraction] = {}
    for i, e in enumerate(gp.entries):
        f = language.functions[e.func_index]
        gx = apply_op(g, e.xbar)
        val = f.entries.get(gx)
        if val is None:
            raise InputError(
                f"operation maps rows {e.xbar} of function {language.names[e.func_index]} "
                "outside its domain; filter by polymorphism first"
            )
        c = val - e.mean
        if c != 0:
            coeffs[i] = c
    return Hyperplane(coeffs, Fraction(-1 if in_minus else 0))


def farkas_extract(
    language: Language,
    gp: GammaPlus,
    op_cuts: Iterable[tuple[Operation, bool]],
) -> FractionalOperation | None:
    """Distribution over the given operations acting as a fractional
    polymorphism with positive mass on the marked ops, or None.

    Solves: maximize the marked mass subject to per-entry improvement rows
    sum_g w(g) f(g(xbar)) <= mean and sum_g w(g) = 1, w >= 0.  The optimum is
    taken at a vertex, so the support has at most 1 + |entries| operations.
    Operations leaving some dom are dropped up front (they can never carry
    positive weight).
    """
    merged: dict[tuple[int, ...], tuple[Operation, bool]] = {}
    for g, minus in op_cuts:
        if g.arity != gp.arity or g.domain_size != language.domain_size:
            raise InputError("operation arity/domain does not match the index space")
        old = merged.get(g.table)
        merged[g.table] = (g, minus or (old is not None and old[1]))
    if not merged:
        raise InputError("no operations to extract from")

    ops: list[tuple[Operation, bool]] = []
    values: list[list[Fraction]] = []  # per kept op, f(g(xbar)) at every entry
    for table in sorted(merged):
        g, minus = merged[table]
        vals = []
        for e in gp.entries:
            v = language.functions[e.func_index].entries.get(apply_op(g, e.xbar))
            if v is None:
                break
            vals.append(v)
        else:
            ops.append((g, minus))
            values.append(vals)
    if not ops or not any(minus for _, minus in ops):
        return None

    rows: dict[tuple, None] = {}
    cons = []
    for i, e in enumerate(gp.entries):
        coeffs = {j: values[j][i] - e.mean for j in range(len(ops)) if values[j][i] != e.mean}
        key = tuple(sorted(coeffs.items()))
        if key in rows:
            continue
        rows[key] = None
        cons.append(constraint(coeffs, "<=", 0))
    cons.append(constraint({j: 1 for j in range(len(ops))}, "=", 1))
    objective = {j: Fraction(1) for j, (_, minus) in enumerate(ops) if minus}
    res = lp_solve(
        LinearProgram(len(ops), cons, objective, "max", frozenset(range(len(ops))))
    )
    if res.status != "optimal" or res.value == 0:
        return None
    weights = {ops[j][0]: w for j, w in enumerate(res.primal) if w != 0}
    if len(weights) > 1 + len(gp.entries):
        raise InvariantError(
            f"support size {len(weights)} exceeds 1 + {len(gp.entries)} entries"
        )
    return FractionalOperation.from_weights(weights)


@dataclass(frozen=True)
class SepResult:
    kind: str  # "in_y" | "cut" | "abort"
    hyperplane: Hyperplane | None = None
    provenance: object = None
    reason: object = None


def in_y() -> SepResult:
    return SepResult("in_y")


def cut(hyperplane: Hyperplane, provenance) -> SepResult:
    return SepResult("cut", hyperplane=hyperplane, provenance=provenance)


def abort(reason) -> SepResult:
    return SepResult("abort", reason=reason)


@dataclass(frozen=True)
class CutOutcome:
    kind: str  # "feasible" | "infeasible" | "aborted"
    y: tuple[Fraction, ...] | None = None
    cuts: CutSet | None = None
    reason: object = None
    iterations: int = 0


def cutting_plane(
    gp: GammaPlus,
    separation: Callable[[tuple[Fraction, ...]], SepResult],
    *,
    iteration_cap: int = ITERATION_CAP,
) -> CutOutcome:
    """Find a nonnegative vector over the index space satisfying every cut
    the oracle produces, or report that the accumulated cuts admit none.

    The master works on groups of entries that share a coefficient in every
    recorded cut: mass moves freely inside such a group, so a representative
    entry carries all of it and the LP stays small however large the index
    space is.  Instead of an arbitrary vertex it queries a point maximizing
    the worst margin over the positive-threshold cuts, normalized onto the
    unit simplex; extreme but shallow vertices stall the loop for hundreds
    of rounds, while the margin point keeps the cuts deep.  Neither device
    moves the target: grouped mass concentrates without changing any cut
    value, every cut scales with its threshold, and a surviving point
    rescales to satisfy the thresholds outright.  A zero best margin means
    the plain system is empty, which is re-checked by a direct solve whose
    Farkas certificate lp_solve verifies internally."""
    n = len(gp.entries)
    cutset = CutSet()
    members: list[list[int]] = [list(range(n))]
    cut_cols: list[list[Fraction]] = []  # per cut, its coefficient on each group
    thresholds: list[Fraction] = []  # per cut, the required value -constant
    zero, one = Fraction(0), Fraction(1)

    for it in range(iteration_cap):
        ng = len(members)
        if not cut_cols:
            y = (zero,) * n
        else:
            sigma = ng  # index of the margin variable
            cons = [
                constraint({g: one for g in range(ng)}, "<=", 1),
                constraint({sigma: one}, "<=", 1),
            ]
            rows = []
            for cols, b in zip(cut_cols, thresholds):
                coeffs = {g: c for g, c in enumerate(cols) if c != 0}
                if b > 0:
                    coeffs[sigma] = -b
                rows.append(coeffs)
                cons.append(constraint(coeffs, ">=", 0))
            res = lp_solve(
                LinearProgram(ng + 1, cons, {sigma: one}, "max", frozenset(range(ng + 1)))
            )
            if res.status != "optimal":
                raise InvariantError("margin master LP must have an optimum")
            if res.value == 0:
                plain = [
                    constraint({g: c for g, c in enumerate(cols) if c != 0}, ">=", b)
                    for cols, b in zip(cut_cols, thresholds)
                ]
                check = lp_solve(LinearProgram(ng, plain, {}, "min", frozenset(range(ng))))
                if check.status != "infeasible":
                    raise InvariantError("zero margin on a feasible cut system")
                return CutOutcome("infeasible", cuts=cutset, iterations=it)
            scale = res.value
            # among the maximum-margin points, take a minimum-mass one: the
            # query stays sparse and ignores coordinates no cut looks at
            cons2 = [constraint(dict(r), ">=", 0) for r in rows]
            cons2.append(constraint({sigma: one}, "=", scale))
            res2 = lp_solve(
                LinearProgram(
                    ng + 1,
                    cons2,
                    {g: one for g in range(ng)},
                    "min",
                    frozenset(range(ng + 1)),
                )
            )
            if res2.status != "optimal":
                raise InvariantError("margin restriction LP must have an optimum")
            yfull = [zero] * n
            for g, mem in enumerate(members):
                if res2.primal[g] != 0:
                    yfull[mem[0]] = res2.primal[g] / scale
            y = tuple(yfull)
        sep = separation(y)
        if sep.kind == "in_y":
            return CutOutcome("feasible", y=y, cuts=cutset, iterations=it + 1)
        if sep.kind == "abort":
            return CutOutcome("aborted", reason=sep.reason, cuts=cutset, iterations=it + 1)
        h = sep.hyperplane
        if h.constant > 0:
            raise InvariantError("separation returned a cut with positive constant")
        if h.value_at(y) >= 0:
            # the queried point satisfies every recorded cut, so a duplicate
            # always lands here rather than in a separate check
            if any(c.hyperplane == h for c in cutset.cuts):
                raise InvariantError("separation repeated an existing cut")
            raise InvariantError("separation returned a cut the current vertex satisfies")
        cutset.cuts.append(Cut(h, sep.provenance))
        # split every group by the new cut's coefficient
        parents: list[int] = []
        new_members: list[list[int]] = []
        new_cols: list[Fraction] = []
        for gidx, mem in enumerate(members):
            seen: dict[Fraction, int] = {}
            for i in mem:
                c = h.coeffs.get(i, zero)
                at = seen.get(c)
                if at is None:
                    seen[c] = len(new_members)
                    new_members.append([i])
                    parents.append(gidx)
                    new_cols.append(c)
                else:
                    new_members[at].append(i)
        for k in range(len(cut_cols)):
            cut_cols[k] = [cut_cols[k][p] for p in parents]
        cut_cols.append(new_cols)
        thresholds.append(-h.constant)
        members = new_members
    raise IterationCapError(iteration_cap, "cutting-plane loop")


def symmetric_binary_ops(d: int) -> Iterable[Operation]:
    """All symmetric binary operations on {0..d-1}, in lexicographic order of
    their values on the d(d+1)/2 unordered pairs."""
    pairs = [(a, b) for a in range(d) for b in range(a, d)]
    for assignment in itertools.product(range(d), repeat=len(pairs)):
        table = [0] * (d * d)
        for (a, b), v in zip(pairs, assignment):
            table[tuple_index((a, b), d)] = v
            table[tuple_index((b, a), d)] = v
        yield Operation(2, d, tuple(table))


def brute_solvable_finite(
    language: Language, *, budget: int = BRUTE_OP_BUDGET
) -> tuple[bool, FractionalOperation | None]:
    """Ground-truth solvability for finite-valued languages: one LP over all
    symmetric binary operations."""
    if not language.is_finite_valued:
        raise InputError("brute solvability oracle handles finite-valued languages only")
    d = language.domain_size
    count = d ** (d * (d + 1) // 2)
    if count > budget:
        raise BudgetError(
            "symmetric_ops",
            f"refusing to enumerate {count} symmetric operations (budget {budget})",
            needed=count,
        )
    gp = gamma_plus(language, 2)
    omega = farkas_extract(language, gp, ((g, True) for g in symmetric_binary_ops(d)))
    return (omega is not None, omega)
