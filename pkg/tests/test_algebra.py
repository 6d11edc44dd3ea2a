import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vclang.algebra import (
    INF,
    CostFunction,
    FractionalOperation,
    Language,
    Operation,
    Partition,
    apply_op,
    chi,
    compose_unary,
    constant_op,
    cost_function,
    identity_op,
    is_fractional_polymorphism,
    is_polymorphism,
    max_op,
    min_op,
    op_predicate,
    preserves,
    quotient_respecting_op,
    symmetry_partition,
    tuple_index,
    unary_crisp,
    unary_op,
)
from vclang.errors import InputError


def test_tuple_index_is_lexicographic_first_coordinate_major():
    # (x1, x2) -> x1*d + x2
    assert tuple_index((1, 0), 3) == 3
    assert tuple_index((1, 2), 3) == 5
    assert tuple_index((2, 1, 0), 3) == 2 * 9 + 3


def test_operation_call_and_table_order():
    g = min_op(3)
    assert g((2, 1)) == 1
    assert g.table == (0, 0, 0, 0, 1, 1, 0, 1, 2)


def test_apply_op_uses_rows_as_arguments_and_columns_as_positions():
    g = min_op(2)
    # rows x^1=(0,1,1), x^2=(1,1,0); columns are (0,1),(1,1),(1,0)
    assert apply_op(g, [(0, 1, 1), (1, 1, 0)]) == (0, 1, 0)


def test_apply_op_rejects_ragged_rows():
    with pytest.raises(InputError):
        apply_op(min_op(2), [(0, 1), (1,)])


def test_op_predicates_min_max():
    for g in (min_op(3), max_op(3)):
        assert op_predicate(g, "idempotent")
        assert op_predicate(g, "symmetric")
        assert op_predicate(g, "cyclic")  # for arity 2 same as symmetric


def test_op_predicate_siggers_constant_and_projection():
    assert op_predicate(constant_op(2, 0, arity=4), "siggers")
    # first projection: g(r,a,r,e) = r vs g(a,r,e,a) = a; fails
    proj1 = Operation(4, 2, tuple(x[0] for x in itertools.product(range(2), repeat=4)))
    assert not op_predicate(proj1, "siggers")
    with pytest.raises(InputError):
        op_predicate(min_op(2), "siggers")


def test_op_predicate_cyclic_vs_symmetric_arity3():
    # g(x,y,z) = x xor y xor z is totally symmetric hence cyclic
    xor3 = Operation(
        3, 2, tuple(x ^ y ^ z for x, y, z in itertools.product(range(2), repeat=3))
    )
    assert op_predicate(xor3, "symmetric")
    assert op_predicate(xor3, "cyclic")
    # g(x,y,z) = x is neither
    p1 = Operation(3, 2, tuple(x for x, y, z in itertools.product(range(2), repeat=3)))
    assert not op_predicate(p1, "cyclic")
    assert not op_predicate(p1, "symmetric")


def test_cost_function_dom_and_values():
    f = cost_function(2, 2, {(0, 1): 0, (1, 0): "1/2"})
    assert f.value((0, 1)) == 0
    assert f.value((1, 1)) == INF
    assert f.dom == ((0, 1), (1, 0))
    assert not f.is_finite_valued
    assert not f.is_crisp
    assert f.min_finite() == 0


def test_language_rejects_empty_domain_function():
    with pytest.raises(InputError):
        Language(2, (CostFunction(1, 2, {}),))


def test_language_restrict_relabels(gamma_gradient):
    sub = gamma_gradient.restrict({0, 2})
    assert sub.domain_size == 2
    assert sub.functions[0].entries == {(0,): Fraction(0), (1,): Fraction(2)}


def test_language_restrict_rejects_emptying(gamma_crisp_neq2):
    with pytest.raises(InputError):
        gamma_crisp_neq2.restrict({0})  # neq has no tuple inside {0}^2


def test_preserves_unary_crisp():
    u0 = unary_crisp(2, (0,))
    assert preserves(constant_op(2, 0), u0)
    assert not preserves(constant_op(2, 1), u0)
    assert preserves(identity_op(2), u0)


def test_is_polymorphism_crisp_neq(gamma_crisp_neq2):
    # On the disequality relation, negation preserves, constants do not.
    assert is_polymorphism(unary_op(2, (1, 0)), gamma_crisp_neq2)
    assert not is_polymorphism(constant_op(2, 0), gamma_crisp_neq2)
    # min maps ((0,1),(1,0)) -> (0,0), outside the relation
    assert not is_polymorphism(min_op(2), gamma_crisp_neq2)


def test_half_min_half_max_is_fpol_of_submodular(gamma_submod):
    w = FractionalOperation(
        2, 2, ((min_op(2), Fraction(1, 2)), (max_op(2), Fraction(1, 2)))
    )
    assert is_fractional_polymorphism(w, gamma_submod)


def test_half_min_half_max_fails_on_soft_neq(gamma_softneq):
    # at rows (0,1),(1,0): lhs = (f(0,0)+f(1,1))/2 = 1 > rhs = 0
    w = FractionalOperation(
        2, 2, ((min_op(2), Fraction(1, 2)), (max_op(2), Fraction(1, 2)))
    )
    assert not is_fractional_polymorphism(w, gamma_softneq)


def test_chi_identity_is_always_fpol(gamma_softneq, gamma_submod, gamma_crisp_neq2):
    for gamma in (gamma_softneq, gamma_submod, gamma_crisp_neq2):
        assert is_fractional_polymorphism(chi(identity_op(gamma.domain_size)), gamma)


def test_mixing_constants_is_fpol_of_gradient(gamma_gradient):
    # const_0 improves the gradient pointwise.
    assert is_fractional_polymorphism(chi(constant_op(3, 0)), gamma_gradient)
    assert not is_fractional_polymorphism(chi(constant_op(3, 2)), gamma_gradient)


def test_fractional_operation_validation():
    with pytest.raises(InputError):
        FractionalOperation(1, 2, ((identity_op(2), Fraction(1, 2)),))  # sums to 1/2
    with pytest.raises(InputError):
        FractionalOperation(
            1, 2, ((identity_op(2), Fraction(1, 2)), (identity_op(2), Fraction(1, 2)))
        )  # duplicate support


def test_compose_unary_order_and_weights():
    g = unary_op(3, (1, 2, 0))  # +1 mod 3
    h = unary_op(3, (0, 0, 2))
    # apply g first, then h: x -> h(g(x)) = (h(1),h(2),h(0)) = (0,2,0)
    comp = compose_unary(chi(g), chi(h))
    assert comp.support[0][0].table == (0, 2, 0)
    mix = compose_unary(
        FractionalOperation(1, 3, ((g, Fraction(1, 2)), (identity_op(3), Fraction(1, 2)))),
        chi(h),
    )
    tables = {op.table: w for op, w in mix.support}
    assert tables == {(0, 2, 0): Fraction(1, 2), (0, 0, 2): Fraction(1, 2)}


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_compose_unary_preserves_fpol_property(d, data):
    # Closure under composition: mixtures of improving maps of the gradient
    # stay improving.  Oracle: direct inequality check.
    f = cost_function(1, d, {(a,): a for a in range(d)})
    gamma = Language(d, (f,))
    maps = [
        unary_op(d, tuple(data.draw(st.integers(0, a)) for a in range(d)))
        for _ in range(2)
    ]  # g(a) <= a pointwise => improving for the gradient
    w1, w2 = chi(maps[0]), chi(maps[1])
    assert is_fractional_polymorphism(w1, gamma)
    comp = compose_unary(w1, w2)
    assert is_fractional_polymorphism(comp, gamma)


def test_partition_from_blocks_canonicalizes():
    p = Partition.from_blocks(4, [(3, 1), (2,), (0,)])
    assert p.blocks == ((0,), (1, 3), (2,))
    assert p.block_of == (0, 1, 2, 1)
    assert p.num_blocks == 3


def test_partition_merge_and_refinement():
    p = Partition.singletons(3)
    q = p.merge_labels(0, 2)
    assert q.blocks == ((0, 2), (1,))
    assert p.is_refinement_of(q)
    assert not q.is_refinement_of(p)
    assert q.merge_labels(0, 2) is q


def test_partition_rejects_bad_blocks():
    with pytest.raises(InputError):
        Partition.from_blocks(3, [(0, 1)])
    with pytest.raises(InputError):
        Partition.from_blocks(3, [(0, 1), (1, 2)])


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_symmetry_partition_pairs_count(d):
    p = symmetry_partition(d, 2)
    assert p.size == d * d
    assert p.num_blocks == d * (d + 1) // 2


def test_symmetry_partition_quaternary_d2_frozen():
    # Independently derived by closing (r,a,r,e) ~ (a,r,e,a) over {0,1}^3.
    p = symmetry_partition(2, 4)
    assert p.num_blocks == 10


@pytest.mark.parametrize("d", [2, 3])
def test_symmetry_partition_quaternary_matches_graph_oracle(d):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(d**4))
    for r in range(d):
        for a in range(d):
            for e in range(d):
                G.add_edge(
                    tuple_index((r, a, r, e), d), tuple_index((a, r, e, a), d)
                )
    expected = sorted(
        tuple(sorted(c)) for c in nx.connected_components(G)
    )
    got = sorted(symmetry_partition(d, 4).blocks)
    assert [tuple(b) for b in got] == expected


@pytest.mark.parametrize("d", [2, 3])
def test_quotient_respecting_ops_are_exactly_symmetric(d):
    part = symmetry_partition(d, 2)
    some = quotient_respecting_op(part, tuple(min(b) % d for b in part.blocks), 2, d)
    assert op_predicate(some, "symmetric")
    # and every symmetric op is constant on blocks
    g = min_op(d)
    for blk in part.blocks:
        vals = {g.table[i] for i in blk}
        assert len(vals) == 1


def test_quotient_respecting_ops_are_exactly_siggers():
    part = symmetry_partition(2, 4)
    vals = tuple((i * 7 + 3) % 2 for i in range(part.num_blocks))
    g = quotient_respecting_op(part, vals, 4, 2)
    assert op_predicate(g, "siggers")


def test_unary_crisp_helper():
    u = unary_crisp(3, (2, 0))
    assert u.dom == ((0,), (2,))
    assert u.is_crisp
