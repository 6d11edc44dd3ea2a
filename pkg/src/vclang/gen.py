"""Language and instance generators.

Three families feed the test harness and the CLI:

* graph 3-coloring instances and the tag-lifting construction, which turns a
  crisp instance over variables V into a language over the domain V x [c]
  (label (v, a) encoded as v*c + a) whose solvability mirrors feasibility of
  the instance;
* an encoding of k-CNF formulas as crisp CSP instances over domain 3, packing
  p Boolean variables into q ternary variables through a fixed injection;
* seeded random finite-valued languages and random instances for the
  oracle-equivalence corpora.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import CostFunction, Language, cost_function, is_fractional_polymorphism, unary_crisp
from .errors import InputError
from .meta import conditional_core, maximal_partition
from .vcsp import Instance, Term, eval_instance, solve_exhaustive, term


@dataclass(frozen=True)
class Graph:
    """Undirected graph on nodes 0..num_nodes-1 without self-loops."""

    num_nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.num_nodes < 1:
            raise InputError("graph needs at least one node")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise InputError(f"edge ({u},{v}) references a missing node")
            if u == v:
                raise InputError(f"self-loop at node {u}")
            if (u, v) in seen:
                raise InputError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            seen.add((v, u))


def graph(num_nodes: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Normalize an edge list (orient low-high, sort, deduplicate)."""
    norm = sorted({(min(u, v), max(u, v)) for u, v in edges})
    return Graph(num_nodes, tuple(norm))


def complete_graph(n: int) -> Graph:
    return graph(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("cycle needs at least three nodes")
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


COLORS = 3


def coloring_instance(g: Graph) -> Instance:
    """3-coloring of a graph as a crisp instance: one disequality per edge."""
    neq = cost_function(
        2, COLORS, {(a, b): 0 for a in range(COLORS) for b in range(COLORS) if a != b}
    )
    return Instance(g.num_nodes, COLORS, tuple(term(neq, e) for e in g.edges))


# ---------------------------------------------------------------------------
# Lifting


def _check_liftable(instance: Instance) -> None:
    for t in instance.terms:
        if not t.function.is_crisp:
            raise InputError("lifting expects a crisp instance (all finite values 0)")


def lift_language(instance: Instance, L) -> Language:
    """Lift a crisp instance to a language over the tagged domain V x [c].

    Label (v, a) becomes v*c + a.  Each term contributes one function that
    charges L whenever an argument carries the wrong variable tag (or the
    underlying tuple is not in the term's relation); each variable contributes
    a unary function charging L outside its tag block.  With L = 1 every
    table is finite and full; with L = infinity only the zero entries exist.
    """
    if L != 1 and L != math.inf:
        raise InputError("lift level must be 1 or infinity")
    _check_liftable(instance)
    c = instance.domain_size
    nv = instance.num_vars
    d = nv * c

    def tag(v: int, a: int) -> int:
        return v * c + a

    functions: list[CostFunction] = []
    names: list[str] = []
    for i, t in enumerate(instance.terms):
        k = t.function.arity
        if L == 1:
            entries = {}
            for y in itertools.product(range(d), repeat=k):
                tags = tuple(lbl // c for lbl in y)
                raw = tuple(lbl % c for lbl in y)
                good = tags == t.scope and raw in t.function.entries
                entries[y] = Fraction(0) if good else Fraction(1)
        else:
            entries = {
                tuple(tag(v, a) for v, a in zip(t.scope, x)): Fraction(0)
                for x in t.function.dom
            }
        functions.append(cost_function(k, d, entries))
        names.append(f"t{i}")

    for v in range(nv):
        block = range(tag(v, 0), tag(v, c))
        if L == 1:
            functions.append(
                cost_function(
                    1, d, {(y,): Fraction(0 if y in block else 1) for y in range(d)}
                )
            )
        else:
            functions.append(unary_crisp(d, block))
        names.append(f"u{v}")

    return Language(d, tuple(functions), tuple(names))


def lifted_instance(instance: Instance, language: Language) -> Instance:
    """The companion instance over the lifted language: original scopes with
    the per-term lifted functions, plus every variable's tag unary."""
    nv = instance.num_vars
    terms = [
        Term(language.functions[i], t.scope, Fraction(1))
        for i, t in enumerate(instance.terms)
    ]
    terms += [
        Term(language.functions[len(instance.terms) + v], (v,), Fraction(1))
        for v in range(nv)
    ]
    return Instance(nv, language.domain_size, tuple(terms))


def decide_zero_min_L1(instance: Instance) -> bool:
    """Does a crisp instance have a zero-cost labeling?

    Decided through the L=1 lift: the lifted language has a core carrying one
    tagged label per variable exactly when a zero-cost labeling exists, and
    such a core spells the labeling out.  When the core search certifies that
    shape — a verified unary fractional polymorphism onto num_vars labels,
    which forces every support operation onto the same retraction — the named
    labeling is evaluated directly, so the positive answer is unconditional.
    Every other outcome is one-sided and the question falls back to
    enumeration."""
    _check_liftable(instance)
    language = lift_language(instance, 1)
    part = maximal_partition(language)
    res = conditional_core(language, part)
    c = instance.domain_size
    if (
        res.omega1 is not None
        and len(res.core) == instance.num_vars
        and is_fractional_polymorphism(res.omega1, language)
    ):
        tags = {lbl // c: lbl % c for lbl in res.core}
        if sorted(tags) == list(range(instance.num_vars)):
            labeling = tuple(tags[v] for v in range(instance.num_vars))
            if eval_instance(instance, labeling) == 0:
                return True
    return solve_exhaustive(instance)[0] == 0


# ---------------------------------------------------------------------------
# k-CNF to CSP


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables 1..num_vars; clauses are tuples of signed indices."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise InputError("formula needs at least one variable")
        for cl in self.clauses:
            if not cl:
                raise InputError("empty clause")
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InputError(f"literal {lit} out of range")


def _sigma(bits: Sequence[int], q: int) -> tuple[int, ...]:
    """Lexicographic-rank injection {0,1}^p -> {0,1,2}^q."""
    rank = 0
    for b in bits:
        rank = rank * 2 + b
    digits = []
    for _ in range(q):
        rank, r = divmod(rank, 3)
        digits.append(r)
    return tuple(reversed(digits))


def kcnf_to_csp(formula: CnfFormula, p: int, q: int) -> Instance:
    """Encode satisfiability as feasibility of a crisp instance over domain 3.

    Boolean variables are packed into ceil(n/p) groups of p; each group is
    represented by q ternary variables through the injection sigma.  A clause
    becomes one crisp term over the blocks of the groups it touches, allowing
    exactly the sigma-images of group assignments that satisfy it.
    """
    if p < 1 or q < 1:
        raise InputError("p and q must be positive")
    if 2**p > 3**q:
        raise InputError(f"2^{p} > 3^{q}: sigma cannot be injective")
    n = formula.num_vars
    r = -(-n // p)  # groups, padding the last with dummy variables

    terms = []
    for cl in formula.clauses:
        groups = sorted({(abs(lit) - 1) // p for lit in cl})
        scope = tuple(
            v for g in groups for v in range(g * q, (g + 1) * q)
        )
        entries = {}
        for combo in itertools.product(
            itertools.product(range(2), repeat=p), repeat=len(groups)
        ):
            sat = False
            for lit in cl:
                v = abs(lit) - 1
                bit = combo[groups.index(v // p)][v % p]
                if bool(bit) == (lit > 0):
                    sat = True
                    break
            if sat:
                key = tuple(x for bits in combo for x in _sigma(bits, q))
                entries[key] = Fraction(0)
        terms.append(term(cost_function(len(scope), 3, entries), scope))
    return Instance(r * q, 3, tuple(terms))


# ---------------------------------------------------------------------------
# Seeded random families


def random_finite_language(rng: random.Random) -> Language:
    """A small random finite-valued language: domain 2 or 3, up to three
    functions of arity at most 2, full tables with small rational values.
    Roughly 40% of draws come from families solvable by construction
    (unary-only, or Boolean submodular) so corpora exercise both verdicts."""
    if rng.random() < 0.4:
        if rng.random() < 0.5:
            d = rng.choice((2, 3))
            fns = tuple(
                _random_table(rng, 1, d) for _ in range(rng.randint(1, 3))
            )
        else:
            d = 2
            fns = tuple(
                _random_submodular2(rng) for _ in range(rng.randint(1, 2))
            ) + tuple(_random_table(rng, 1, 2) for _ in range(rng.randint(0, 1)))
            # a unary table never breaks the min/max mix on a chain
    else:
        d = rng.choice((2, 3))
        fns = tuple(
            _random_table(rng, rng.randint(1, 2), d)
            for _ in range(rng.randint(1, 3))
        )
    return Language(d, fns, tuple(f"f{i}" for i in range(len(fns))))


def _random_value(rng: random.Random) -> Fraction:
    v = Fraction(rng.randint(0, 5))
    if rng.random() < 0.25:
        v += Fraction(1, 2)
    return v


def _random_table(rng: random.Random, arity: int, d: int) -> CostFunction:
    entries = {
        x: _random_value(rng) for x in itertools.product(range(d), repeat=arity)
    }
    return cost_function(arity, d, entries)


def _random_submodular2(rng: random.Random) -> CostFunction:
    # f(0,0) + f(1,1) <= f(0,1) + f(1,0) guarantees the half min + half max mix
    b, c = rng.randint(0, 5), rng.randint(0, 5)
    a = rng.randint(0, b + c)
    dd = rng.randint(0, b + c - a)
    return cost_function(
        2, 2, {(0, 0): Fraction(a), (0, 1): Fraction(b), (1, 0): Fraction(c), (1, 1): Fraction(dd)}
    )


def random_instance(
    rng: random.Random, language: Language, *, max_vars: int = 4, max_terms: int = 4
) -> Instance:
    nv = rng.randint(1, max_vars)
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        f = rng.choice(language.functions)
        scope = tuple(rng.randrange(nv) for _ in range(f.arity))
        weight = rng.choice((Fraction(1), Fraction(1), Fraction(2), Fraction(1, 2)))
        terms.append(Term(f, scope, weight))
    return Instance(nv, language.domain_size, tuple(terms))


def random_cnf(
    rng: random.Random, *, num_vars: int, num_clauses: int, width: int = 3
) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        k = min(width, num_vars)
        chosen = rng.sample(range(1, num_vars + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return CnfFormula(num_vars, tuple(clauses))
