"""Core objects: operations, cost functions, languages, partitions.

Everything downstream (LP relaxations, separation oracles, the solvability
pipeline) is phrased in terms of the types here.  All numeric data is exact:
finite costs are `fractions.Fraction`, infinite costs are `math.inf`, and the
only arithmetic ever performed on the extended values is addition of
nonnegative-weighted terms and comparisons, so the two undefined forms
(0 * inf, inf - inf) cannot arise.

Conventions used throughout the package:

* A domain of size d is the label set {0, ..., d-1}.
* Operation tables are stored densely in lexicographic order of the argument
  tuple, with the *first* argument most significant:
  index(x_1, ..., x_m) = sum x_i * d**(m-i).
* A cost function stores only its finite entries; absent tuples cost inf.
  `dom f` is the set of finite-cost tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import InputError, InvariantError

Rational = Fraction
ExtRational = Union[Fraction, float]  # float is only ever math.inf
INF: float = math.inf


def is_finite(v: ExtRational) -> bool:
    return v is not INF and v != INF


def as_rational(v) -> Fraction:
    """Coerce ints/strings/Fractions to Fraction; reject floats and inf."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"not a rational: {v!r}") from e
    raise InputError(f"not a rational: {v!r} (floats are not accepted)")


# ---------------------------------------------------------------------------
# tuple <-> index helpers (lexicographic, first coordinate most significant)


def tuple_index(x: Sequence[int], d: int) -> int:
    idx = 0
    for a in x:
        idx = idx * d + a
    return idx


def index_tuple(idx: int, d: int, m: int) -> tuple[int, ...]:
    out = [0] * m
    for pos in range(m - 1, -1, -1):
        idx, out[pos] = divmod(idx, d)
    return tuple(out)


def all_tuples(d: int, m: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(d), repeat=m)


# ---------------------------------------------------------------------------
# Operations


@dataclass(frozen=True)
class Operation:
    """A finitary operation g: D^m -> D as a dense lexicographic table."""

    arity: int
    domain_size: int
    table: tuple[int, ...]

    def __post_init__(self):
        m, d = self.arity, self.domain_size
        if m < 1 or d < 1:
            raise InputError("operation needs arity >= 1 and domain_size >= 1")
        if len(self.table) != d**m:
            raise InputError(
                f"operation table has {len(self.table)} entries, expected {d**m}"
            )
        if any(not (0 <= v < d) for v in self.table):
            raise InputError("operation table value out of range")

    def __call__(self, x: Sequence[int]) -> int:
        return self.table[tuple_index(x, self.domain_size)]

    def image(self) -> frozenset[int]:
        return frozenset(self.table)

    def sort_key(self) -> tuple:
        return (self.arity, self.domain_size, self.table)


def op_from_callable(arity: int, domain_size: int, fn: Callable[..., int]) -> Operation:
    table = tuple(fn(*x) for x in all_tuples(domain_size, arity))
    return Operation(arity, domain_size, table)


def identity_op(d: int) -> Operation:
    return Operation(1, d, tuple(range(d)))


def constant_op(d: int, a: int, arity: int = 1) -> Operation:
    return Operation(arity, d, (a,) * (d**arity))


def unary_op(d: int, mapping: Sequence[int]) -> Operation:
    return Operation(1, d, tuple(mapping))


def min_op(d: int) -> Operation:
    return op_from_callable(2, d, min)


def max_op(d: int) -> Operation:
    return op_from_callable(2, d, max)


def apply_op(g: Operation, rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Apply g componentwise to m argument rows of equal length n.

    rows[i] is the i-th argument tuple x^i; the result has coordinate
    g(x^1_j, ..., x^m_j) at position j.
    """
    if len(rows) != g.arity:
        raise InputError(f"need {g.arity} rows, got {len(rows)}")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise InputError("argument rows must have equal length")
    table, d = g.table, g.domain_size
    out = []
    for j in range(n):
        idx = 0
        for r in rows:
            idx = idx * d + r[j]
        out.append(table[idx])
    return tuple(out)


def op_predicate(g: Operation, kind: str) -> bool:
    """Test a named identity of the operation.

    Supported kinds: "idempotent", "cyclic", "symmetric", "siggers".
    "cyclic" and "symmetric" require arity >= 2; "siggers" requires arity 4
    and is the non-idempotent form g(r,a,r,e) = g(a,r,e,a).
    """
    m, d = g.arity, g.domain_size
    if kind == "idempotent":
        return all(g.table[tuple_index((a,) * m, d)] == a for a in range(d))
    if kind == "cyclic":
        if m < 2:
            raise InputError("cyclic requires arity >= 2")
        for x in all_tuples(d, m):
            if g(x) != g(x[1:] + x[:1]):
                return False
        return True
    if kind == "symmetric":
        if m < 2:
            raise InputError("symmetric requires arity >= 2")
        for x in all_tuples(d, m):
            if g(x) != g(tuple(sorted(x))):
                return False
        return True
    if kind == "siggers":
        if m != 4:
            raise InputError("siggers requires arity 4")
        for r in range(d):
            for a in range(d):
                for e in range(d):
                    if g((r, a, r, e)) != g((a, r, e, a)):
                        return False
        return True
    raise InputError(f"unknown operation predicate: {kind!r}")


# ---------------------------------------------------------------------------
# Fractional operations


@dataclass(frozen=True)
class FractionalOperation:
    """A probability distribution over operations of one arity and domain.

    Support pairs are kept sorted by operation table so two equal
    distributions compare equal; weights are positive rationals summing to 1.
    """

    arity: int
    domain_size: int
    support: tuple[tuple[Operation, Fraction], ...]

    def __post_init__(self):
        seen = set()
        total = Fraction(0)
        for g, w in self.support:
            if g.arity != self.arity or g.domain_size != self.domain_size:
                raise InputError("support operation has mismatched arity/domain")
            if g.table in seen:
                raise InputError("duplicate operation in fractional-operation support")
            seen.add(g.table)
            if not isinstance(w, Fraction) or w <= 0:
                raise InputError("fractional-operation weights must be positive rationals")
            total += w
        if total != 1:
            raise InputError(f"fractional-operation weights sum to {total}, not 1")
        object.__setattr__(
            self, "support", tuple(sorted(self.support, key=lambda p: p[0].table))
        )

    @staticmethod
    def from_weights(weights: Mapping[Operation, Fraction]) -> "FractionalOperation":
        items = [(g, w) for g, w in weights.items() if w != 0]
        if not items:
            raise InputError("empty fractional operation")
        g0 = items[0][0]
        return FractionalOperation(g0.arity, g0.domain_size, tuple(items))

    def operations(self) -> tuple[Operation, ...]:
        return tuple(g for g, _ in self.support)

    def weight(self, g: Operation) -> Fraction:
        for h, w in self.support:
            if h.table == g.table:
                return w
        return Fraction(0)


def chi(g: Operation) -> FractionalOperation:
    """The characteristic distribution putting all mass on one operation."""
    return FractionalOperation(g.arity, g.domain_size, ((g, Fraction(1)),))


def compose_unary(
    first: FractionalOperation, second: FractionalOperation
) -> FractionalOperation:
    """Compose unary fractional operations: apply `first`, then `second`.

    The result puts mass sum{ first(h) * second(k) : k o h = g } on g.
    Fractional polymorphisms of a language are closed under this product.
    """
    if first.arity != 1 or second.arity != 1:
        raise InputError("compose_unary needs unary fractional operations")
    if first.domain_size != second.domain_size:
        raise InputError("compose_unary domain mismatch")
    d = first.domain_size
    acc: dict[tuple[int, ...], Fraction] = {}
    for h, wh in first.support:
        for k, wk in second.support:
            table = tuple(k.table[h.table[a]] for a in range(d))
            acc[table] = acc.get(table, Fraction(0)) + wh * wk
    return FractionalOperation.from_weights(
        {Operation(1, d, t): w for t, w in acc.items()}
    )


# ---------------------------------------------------------------------------
# Cost functions and languages


@dataclass(frozen=True, eq=False)
class CostFunction:
    """A cost function D^n -> Q u {inf}, stored as its finite entries only."""

    arity: int
    domain_size: int
    entries: dict[tuple[int, ...], Fraction]

    def __post_init__(self):
        n, d = self.arity, self.domain_size
        if n < 1 or d < 1:
            raise InputError("cost function needs arity >= 1 and domain_size >= 1")
        for x, v in self.entries.items():
            if len(x) != n or any(not (0 <= a < d) for a in x):
                raise InputError(f"cost-function tuple {x} out of range")
            if not isinstance(v, Fraction):
                raise InputError("cost-function values must be Fraction")
        object.__setattr__(self, "_dom", tuple(sorted(self.entries)))

    def value(self, x: Sequence[int]) -> ExtRational:
        return self.entries.get(tuple(x), INF)

    @property
    def dom(self) -> tuple[tuple[int, ...], ...]:
        """Finite-cost tuples, in lexicographic order."""
        return self._dom  # type: ignore[attr-defined]

    @property
    def is_finite_valued(self) -> bool:
        return len(self.entries) == self.domain_size**self.arity

    @property
    def is_crisp(self) -> bool:
        return all(v == 0 for v in self.entries.values())

    def min_finite(self) -> Fraction:
        if not self.entries:
            raise InputError("cost function with empty domain has no finite minimum")
        return min(self.entries.values())

    def __eq__(self, other):
        return (
            isinstance(other, CostFunction)
            and self.arity == other.arity
            and self.domain_size == other.domain_size
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.arity, self.domain_size, frozenset(self.entries.items())))


def cost_function(arity: int, domain_size: int, entries) -> CostFunction:
    """Convenience constructor coercing entry values to Fraction."""
    coerced = {tuple(x): as_rational(v) for x, v in dict(entries).items()}
    return CostFunction(arity, domain_size, coerced)


def unary_crisp(domain_size: int, allowed: Iterable[int]) -> CostFunction:
    """u_A: cost 0 on A, inf elsewhere."""
    return CostFunction(
        1, domain_size, {(a,): Fraction(0) for a in sorted(set(allowed))}
    )


@dataclass(frozen=True)
class Language:
    """A finite list of named cost functions over one domain."""

    domain_size: int
    functions: tuple[CostFunction, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.domain_size < 1:
            raise InputError("language needs domain_size >= 1")
        names = self.names
        if not names:
            names = tuple(f"f{i}" for i in range(len(self.functions)))
            object.__setattr__(self, "names", names)
        if len(names) != len(self.functions):
            raise InputError("language has mismatched names/functions")
        if len(set(names)) != len(names):
            raise InputError("duplicate function name in language")
        for name, f in zip(names, self.functions):
            if f.domain_size != self.domain_size:
                raise InputError(f"function {name} has mismatched domain size")
            if not f.entries:
                raise InputError(f"function {name} has empty domain")

    @property
    def is_finite_valued(self) -> bool:
        return all(f.is_finite_valued for f in self.functions)

    def function_named(self, name: str) -> CostFunction:
        try:
            return self.functions[self.names.index(name)]
        except ValueError:
            raise InputError(f"language has no function named {name!r}") from None

    def restrict(self, labels: Iterable[int]) -> "Language":
        """The sublanguage on a label subset, relabeled to 0..|B|-1.

        Labels are taken in increasing order; tuples with any coordinate
        outside the subset are discarded.  A function whose domain dies
        entirely is rejected, because restriction is only meaningful here for
        subsets arising as images of unary polymorphisms (those always leave
        every domain inhabited).
        """
        order = sorted(set(labels))
        if not order:
            raise InputError("cannot restrict a language to the empty label set")
        if order[0] < 0 or order[-1] >= self.domain_size:
            raise InputError("restriction label out of range")
        rank = {a: i for i, a in enumerate(order)}
        keep = set(order)
        new_functions = []
        for name, f in zip(self.names, self.functions):
            entries = {
                tuple(rank[a] for a in x): v
                for x, v in f.entries.items()
                if keep.issuperset(x)
            }
            if not entries:
                raise InputError(
                    f"restriction to {order} empties the domain of function {name}"
                )
            new_functions.append(CostFunction(f.arity, len(order), entries))
        return Language(len(order), tuple(new_functions), self.names)


# ---------------------------------------------------------------------------
# Polymorphism checks


def preserves(g: Operation, f: CostFunction) -> bool:
    """Does g map every m-tuple of dom-f tuples back into dom f?"""
    if g.domain_size != f.domain_size:
        raise InputError("operation/function domain mismatch")
    dom = f.dom
    for rows in itertools.product(dom, repeat=g.arity):
        if apply_op(g, rows) not in f.entries:
            return False
    return True


def is_polymorphism(g: Operation, language: Language) -> bool:
    return all(preserves(g, f) for f in language.functions)


def is_fractional_polymorphism(
    omega: FractionalOperation, language: Language
) -> bool:
    """Exact check of the defining inequality of a fractional polymorphism.

    For every function f and every m-tuple of domain tuples x^1..x^m:
        sum_g omega(g) f(g(x^1..x^m))  <=  (f(x^1)+...+f(x^m)) / m.
    An infinite value on the left with positive weight fails the check.
    """
    if omega.domain_size != language.domain_size:
        raise InputError("fractional operation/domain mismatch")
    m = omega.arity
    for f in language.functions:
        dom = f.dom
        for rows in itertools.product(dom, repeat=m):
            rhs = sum(f.entries[r] for r in rows) / m
            lhs = Fraction(0)
            ok = True
            for g, w in omega.support:
                img = apply_op(g, rows)
                v = f.entries.get(img)
                if v is None:
                    ok = False
                    break
                lhs += w * v
            if not ok or lhs > rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# Partitions


@dataclass(frozen=True)
class Partition:
    """A partition of {0..size-1}; blocks sorted internally and by minimum."""

    size: int
    blocks: tuple[tuple[int, ...], ...]
    block_of: tuple[int, ...] = field(compare=False)

    @staticmethod
    def from_blocks(size: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        norm = tuple(sorted(tuple(sorted(b)) for b in blocks))
        seen: list[int] = []
        for b in norm:
            if not b:
                raise InputError("partition block is empty")
            seen.extend(b)
        if sorted(seen) != list(range(size)):
            raise InputError("blocks do not partition the ground set")
        block_of = [0] * size
        for i, b in enumerate(norm):
            for a in b:
                block_of[a] = i
        return Partition(size, norm, tuple(block_of))

    @staticmethod
    def singletons(size: int) -> "Partition":
        return Partition.from_blocks(size, [(a,) for a in range(size)])

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def merge_labels(self, a: int, b: int) -> "Partition":
        ia, ib = self.block_of[a], self.block_of[b]
        if ia == ib:
            return self
        merged = tuple(self.blocks[ia] + self.blocks[ib])
        rest = [blk for i, blk in enumerate(self.blocks) if i not in (ia, ib)]
        return Partition.from_blocks(self.size, rest + [merged])

    def is_refinement_of(self, other: "Partition") -> bool:
        """True when every block of self lies inside a block of other."""
        if self.size != other.size:
            return False
        return all(
            len({other.block_of[a] for a in blk}) == 1 for blk in self.blocks
        )


def symmetry_partition(domain_size: int, arity: int) -> Partition:
    """Partition of the tuple space D^m whose respecting operations are
    exactly the symmetric (m=2) or Siggers (m=4) ones.

    For m=2 the blocks are the orbit pairs {(x,y),(y,x)}.  For m=4 they are
    the connected components of the identification (r,a,r,e) ~ (a,r,e,a)
    taken over all r, a, e; an operation constant on every component
    satisfies the Siggers identity and vice versa.
    """
    d = domain_size
    if arity == 2:
        parent = list(range(d * d))
        for x in range(d):
            for y in range(x + 1, d):
                parent[tuple_index((y, x), d)] = tuple_index((x, y), d)
        return _partition_from_parents(d * d, parent)
    if arity == 4:
        uf = list(range(d**4))

        def find(i):
            while uf[i] != i:
                uf[i] = uf[uf[i]]
                i = uf[i]
            return i

        for r in range(d):
            for a in range(d):
                for e in range(d):
                    i = find(tuple_index((r, a, r, e), d))
                    j = find(tuple_index((a, r, e, a), d))
                    if i != j:
                        uf[max(i, j)] = min(i, j)
        roots = [0] * (d**4)
        for i in range(d**4):
            roots[i] = find(i)
        return _partition_from_parents(d**4, roots)
    raise InputError(f"symmetry_partition supports arity 2 or 4, not {arity}")


def _partition_from_parents(size: int, root: Sequence[int]) -> Partition:
    groups: dict[int, list[int]] = {}
    for i in range(size):
        groups.setdefault(root[i], []).append(i)
    return Partition.from_blocks(size, groups.values())


def quotient_respecting_op(
    partition: Partition, block_values: Sequence[int], arity: int, domain_size: int
) -> Operation:
    """Expand a per-block value assignment into a full operation table."""
    if len(block_values) != partition.num_blocks:
        raise InvariantError("block value vector has wrong length")
    table = tuple(block_values[partition.block_of[i]] for i in range(partition.size))
    if len(table) != domain_size**arity:
        raise InvariantError("partition size does not match the tuple space")
    return Operation(arity, domain_size, table)
