"""Instances, the basic LP relaxation, and the pinning probe.

An instance is a weighted sum of cost-function applications.  A term with
weight zero contributes as a *crisp constraint*: cost 0 when the scope tuple
lies in dom f, infinite otherwise.  That convention lets a single term list
express both the objective and hard feasibility structure without ever
multiplying zero by infinity.

`blp_solve` is the basic LP relaxation: per-term distributions mu_t over
dom f_t, per-variable distributions alpha_v, marginal consistency between
them, minimizing the expected cost.  The implementation presolves
aggressively (label-mask propagation, vacuous-term elimination, unary
folding, merging of repeated (function, scope) pairs) but reconstructs the
full per-term mu and per-variable alpha of the unreduced relaxation, so
callers can rely on the textbook semantics.

`lp_probe` pins variables one label at a time, keeping the relaxation value
unchanged, and returns an exact minimizer when it succeeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import INF, CostFunction, ExtRational, as_rational, unary_crisp
from .errors import BudgetError, InputError, InvariantError
from .ratlp import LinearProgram, constraint, lp_solve

EXHAUSTIVE_BUDGET = 2_000_000
FEAS_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class Term:
    function: CostFunction
    scope: tuple[int, ...]
    weight: Fraction

    def __post_init__(self):
        if len(self.scope) != self.function.arity:
            raise InputError(
                f"scope length {len(self.scope)} != function arity {self.function.arity}"
            )
        if not isinstance(self.weight, Fraction) or self.weight < 0:
            raise InputError("term weight must be a nonnegative rational")


def term(function: CostFunction, scope: Sequence[int], weight=1) -> Term:
    return Term(function, tuple(scope), as_rational(weight))


@dataclass(frozen=True)
class Instance:
    num_vars: int
    domain_size: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.num_vars < 1 or self.domain_size < 1:
            raise InputError("instance needs num_vars >= 1 and domain_size >= 1")
        for t in self.terms:
            if t.function.domain_size != self.domain_size:
                raise InputError("term function has mismatched domain size")
            if any(not (0 <= v < self.num_vars) for v in t.scope):
                raise InputError(f"term scope {t.scope} out of range")

    def with_terms(self, extra: Iterable[Term]) -> "Instance":
        return Instance(self.num_vars, self.domain_size, self.terms + tuple(extra))

    def pinned(self, var: int, label: int) -> "Instance":
        return self.with_terms([pin_term(self.domain_size, var, label)])


def pin_term(domain_size: int, var: int, label: int) -> Term:
    return Term(unary_crisp(domain_size, (label,)), (var,), Fraction(0))


def restrict_terms(instance: Instance, labels: Iterable[int]) -> Instance:
    """I[B]: force every variable into the label set B (via crisp pins)."""
    u = unary_crisp(instance.domain_size, labels)
    return instance.with_terms(
        Term(u, (v,), Fraction(0)) for v in range(instance.num_vars)
    )


def eval_instance(instance: Instance, labeling: Sequence[int]) -> ExtRational:
    if len(labeling) != instance.num_vars:
        raise InputError("labeling length mismatch")
    total = Fraction(0)
    for t in instance.terms:
        x = tuple(labeling[v] for v in t.scope)
        if t.weight == 0:
            if x not in t.function.entries:
                return INF
        else:
            v = t.function.entries.get(x)
            if v is None:
                return INF
            total += t.weight * v
    return total


def solve_exhaustive(
    instance: Instance, *, budget: int = EXHAUSTIVE_BUDGET
) -> tuple[ExtRational, tuple[int, ...] | None]:
    """Exact minimum by enumeration; argmin is None when everything is inf."""
    count = instance.domain_size**instance.num_vars
    if count > budget:
        raise BudgetError(
            "exhaustive_labelings",
            f"refusing to enumerate {count} labelings (budget {budget})",
            needed=count,
        )
    best: ExtRational = INF
    best_x: tuple[int, ...] | None = None
    for x in itertools.product(range(instance.domain_size), repeat=instance.num_vars):
        v = eval_instance(instance, x)
        if v < best:
            best, best_x = v, x
    return best, best_x


# ---------------------------------------------------------------------------
# Feas+: positive-feasibility unaries


def _hard_relations(instance: Instance) -> list[tuple[tuple[int, ...], CostFunction]]:
    """Terms that can evaluate to infinity, as (scope, function) relations."""
    rels = []
    for t in instance.terms:
        if t.weight == 0 or not t.function.is_finite_valued:
            rels.append((t.scope, t.function))
    return rels


def feas_plus(instance: Instance, *, node_budget: int = FEAS_NODE_BUDGET) -> Instance:
    """The unary instance collecting, per variable, the labels that occur in
    some finite-cost labeling.  Exact: uses backtracking when non-unary hard
    terms are present, a pure mask intersection otherwise."""
    nv, d = instance.num_vars, instance.domain_size
    masks = [set(range(d)) for _ in range(nv)]
    nary = []
    for scope, f in _hard_relations(instance):
        if len(scope) == 1:
            masks[scope[0]] &= {x[0] for x in f.dom}
        else:
            nary.append((scope, f))

    if not nary:
        dv = masks
    else:
        dv = _feasible_labels(nv, d, masks, nary, node_budget)

    return Instance(
        nv, d, tuple(Term(unary_crisp(d, sorted(dv[v])), (v,), Fraction(0)) for v in range(nv))
    )


def _feasible_labels(nv, d, masks, relations, node_budget):
    """For each variable the labels extendable to a full assignment
    satisfying every relation.  Each found assignment certifies one label per
    variable, which keeps the number of searches small."""
    budget = [node_budget]
    certified: list[set[int]] = [set() for _ in range(nv)]
    rel_at: list[list[tuple[tuple[int, ...], CostFunction]]] = [[] for _ in range(nv)]
    for scope, f in relations:
        for v in set(scope):
            rel_at[v].append((scope, f))

    def consistent(assign, v):
        # every relation touching v must still admit a completion
        for scope, f in rel_at[v]:
            ok = False
            for x in f.dom:
                good = True
                for pos, w in enumerate(scope):
                    aw = assign[w]
                    if aw is not None:
                        if x[pos] != aw:
                            good = False
                            break
                    elif x[pos] not in masks[w]:
                        good = False
                        break
                if good:
                    ok = True
                    break
            if not ok:
                return False
        return True

    def search(assign, order, pos):
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetError(
                "feasibility_nodes",
                f"feasibility search exceeded its node budget ({node_budget})",
            )
        if pos == len(order):
            return dict(assign_items(assign))
        v = order[pos]
        for a in sorted(masks[v]):
            assign[v] = a
            if consistent(assign, v):
                got = search(assign, order, pos + 1)
                if got is not None:
                    return got
            assign[v] = None
        return None

    def assign_items(assign):
        return [(v, a) for v, a in enumerate(assign) if a is not None]

    for v in range(nv):
        for a in sorted(masks[v]):
            if a in certified[v]:
                continue
            assign: list[int | None] = [None] * nv
            assign[v] = a
            if not consistent(assign, v):
                continue
            order = [v] + [w for w in range(nv) if w != v]
            got = search(assign, order, 1)
            if got is not None:
                for w, b in got.items():
                    certified[w].add(b)
    return certified


# ---------------------------------------------------------------------------
# Basic LP relaxation


@dataclass(frozen=True)
class BlpSolution:
    """Optimal value of the relaxation plus one optimal (mu, alpha) pair.

    `alpha[v]` maps labels to their probability (zeros omitted); `mu[t]`
    maps dom-f tuples likewise, one entry per term of the instance, in term
    order.  Both are None when the relaxation is infeasible (value inf).
    """

    value: ExtRational
    alpha: tuple[dict[int, Fraction], ...] | None
    mu: tuple[dict[tuple[int, ...], Fraction], ...] | None


def _propagate_masks(instance: Instance) -> list[set[int]] | None:
    """Generalized arc consistency over every term's domain; None = wipeout."""
    nv, d = instance.num_vars, instance.domain_size
    masks = [set(range(d)) for _ in range(nv)]
    dirty = True
    while dirty:
        dirty = False
        for t in instance.terms:
            scope = t.scope
            sup = [x for x in t.function.dom if all(x[k] in masks[scope[k]] for k in range(len(scope)))]
            if not sup:
                return None
            for k, v in enumerate(scope):
                proj = {x[k] for x in sup}
                if not masks[v].issubset(proj):
                    masks[v] &= proj
                    if not masks[v]:
                        return None
                    dirty = True
    return masks


def blp_solve(instance: Instance, *, want_mu: bool = True) -> BlpSolution:
    nv, d = instance.num_vars, instance.domain_size
    masks = _propagate_masks(instance)
    if masks is None:
        return BlpSolution(INF, None, None)

    # classify terms
    blocks: dict[tuple, dict] = {}  # (scope, id(f)) -> {support, weight, f}
    mu_source: list[tuple] = []
    alpha_obj: dict[int, dict[int, Fraction]] = {}
    involved: set[int] = set()
    for t in instance.terms:
        scope = t.scope
        sup = [
            x
            for x in t.function.dom
            if all(x[k] in masks[scope[k]] for k in range(len(scope)))
        ]
        if not sup:
            return BlpSolution(INF, None, None)
        full = 1
        for v in scope:
            full *= len(masks[v])
        if t.weight == 0 and len(sup) == full:
            mu_source.append(("product", scope, t.function))
            continue
        if len(scope) == 1:
            v = scope[0]
            if t.weight != 0:
                acc = alpha_obj.setdefault(v, {})
                for (a,) in sup:
                    acc[a] = acc.get(a, Fraction(0)) + t.weight * t.function.entries[(a,)]
                involved.add(v)
            mu_source.append(("alpha", v))
            continue
        key = (scope, id(t.function))
        blk = blocks.setdefault(
            key, {"support": tuple(sup), "weight": Fraction(0), "function": t.function}
        )
        blk["weight"] += t.weight
        involved.update(scope)
        mu_source.append(("block", key))

    # assemble the LP
    ivars = sorted(involved)
    col = 0
    acol: dict[int, dict[int, int]] = {}
    for v in ivars:
        acol[v] = {a: col + i for i, a in enumerate(sorted(masks[v]))}
        col += len(masks[v])
    mcol: dict[tuple, dict[tuple[int, ...], int]] = {}
    block_order = sorted(blocks, key=lambda k: (k[0], blocks[k]["function"].arity))
    for key in block_order:
        sup = blocks[key]["support"]
        mcol[key] = {x: col + i for i, x in enumerate(sup)}
        col += len(sup)

    cons = []
    for v in ivars:
        cons.append(constraint({c: 1 for c in acol[v].values()}, "=", 1))
    for key in block_order:
        blk = blocks[key]
        scope = key[0]
        for k, v in enumerate(scope):
            for a in sorted(masks[v]):
                coeffs = {mcol[key][x]: Fraction(1) for x in blk["support"] if x[k] == a}
                coeffs[acol[v][a]] = coeffs.get(acol[v][a], Fraction(0)) - 1
                cons.append(constraint(coeffs, "=", 0))

    objective: dict[int, Fraction] = {}
    for v, acc in alpha_obj.items():
        for a, w in acc.items():
            if w != 0:
                objective[acol[v][a]] = objective.get(acol[v][a], Fraction(0)) + w
    for key in block_order:
        blk = blocks[key]
        if blk["weight"] == 0:
            continue
        f = blk["function"]
        for x, c in mcol[key].items():
            w = blk["weight"] * f.entries[x]
            if w != 0:
                objective[c] = objective.get(c, Fraction(0)) + w

    if col == 0:
        res_value: Fraction = Fraction(0)
        primal: tuple[Fraction, ...] = ()
    else:
        res = lp_solve(
            LinearProgram(col, cons, objective, "min", frozenset(range(col)))
        )
        if res.status == "infeasible":
            return BlpSolution(INF, None, None)
        if res.status != "optimal":
            raise InvariantError("relaxation LP cannot be unbounded")
        res_value = res.value
        primal = res.primal

    alpha: list[dict[int, Fraction]] = []
    for v in range(nv):
        if v in involved:
            alpha.append({a: primal[c] for a, c in acol[v].items() if primal[c] != 0})
        else:
            alpha.append({min(masks[v]): Fraction(1)})

    if not want_mu:
        return BlpSolution(res_value, tuple(alpha), None)

    mu: list[dict[tuple[int, ...], Fraction]] = []
    for src in mu_source:
        if src[0] == "block":
            key = src[1]
            mu.append({x: primal[c] for x, c in mcol[key].items() if primal[c] != 0})
        elif src[0] == "alpha":
            v = src[1]
            mu.append({(a,): w for a, w in alpha[v].items()})
        else:
            _, scope, f = src
            dist: dict[tuple[int, ...], Fraction] = {}
            supports = [sorted(alpha[v].items()) for v in scope]
            for combo in itertools.product(*supports):
                x = tuple(a for a, _ in combo)
                w = Fraction(1)
                for _, p in combo:
                    w *= p
                if w != 0:
                    if x not in f.entries:
                        raise InvariantError("vacuous term reconstruction left dom f")
                    dist[x] = dist.get(x, Fraction(0)) + w
            mu.append(dist)
    return BlpSolution(res_value, tuple(alpha), tuple(mu))


# ---------------------------------------------------------------------------
# The probe


@dataclass(frozen=True)
class ProbeResult:
    kind: str  # "labeling" | "empty" | "fail"
    labeling: tuple[int, ...] | None = None
    value: ExtRational | None = None


def _needs_feas(instance: Instance) -> bool:
    return any(
        (t.weight == 0 or not t.function.is_finite_valued) and len(t.scope) > 1
        for t in instance.terms
    )


def lp_probe(
    instance: Instance,
    labels: Iterable[int],
    *,
    node_budget: int = FEAS_NODE_BUDGET,
) -> ProbeResult:
    """Pin every variable to a label in `labels` without raising the
    relaxation value of instance + Feas+.

    Returns a labeling (a global minimizer over the full domain when the pins
    succeed), "empty" when the initial relaxation is already infeasible, or
    "fail" when some variable accepts no label.
    """
    nv, d = instance.num_vars, instance.domain_size
    B = sorted(set(labels))
    if any(not (0 <= a < d) for a in B):
        raise InputError("probe labels out of range")

    needs = _needs_feas(instance)

    def relax(terms, want_mu=False):
        inst = Instance(nv, d, tuple(terms))
        if needs:
            inst = inst.with_terms(feas_plus(inst, node_budget=node_budget).terms)
        return blp_solve(inst, want_mu=want_mu)

    base = relax(instance.terms)
    lpstar = base.value
    if lpstar == INF:
        return ProbeResult("empty")
    if not B:
        return ProbeResult("fail")

    cur = list(instance.terms) + [
        Term(unary_crisp(d, B), (v,), Fraction(0)) for v in range(nv)
    ]
    cursol = relax(cur)
    if cursol.value != lpstar:
        return ProbeResult("fail")

    pins: list[int] = []
    for v in range(nv):
        accepted = None
        for a in B:
            if not needs and cursol.alpha is not None and cursol.alpha[v] == {a: Fraction(1)}:
                # current optimum already sits on this label; the pin keeps
                # it feasible and the value cannot drop below lpstar
                accepted = a
                cur.append(pin_term(d, v, a))
                break
            trial = cur + [pin_term(d, v, a)]
            sol = relax(trial)
            if sol.value == lpstar:
                accepted = a
                cur = trial
                cursol = sol
                break
        if accepted is None:
            return ProbeResult("fail")
        pins.append(accepted)

    got = eval_instance(instance, pins)
    if got != lpstar:
        raise InvariantError(
            f"probe labeling evaluates to {got}, expected the relaxation value {lpstar}"
        )
    return ProbeResult("labeling", tuple(pins), lpstar)
