"""Partition testing, core search, solvability pipeline.

Expectations are anchored by hand-derivations in comments and by the
brute-force oracles (`brute_core`, `brute_solvable_finite`); nothing below is
a frozen output of the code under test.
"""

from fractions import Fraction

import pytest

from vclang.algebra import (
    Language,
    Operation,
    Partition,
    chi,
    constant_op,
    cost_function,
    is_fractional_polymorphism,
    max_op,
    min_op,
    op_predicate,
    unary_crisp,
    unary_op,
)
from vclang.errors import BudgetError, InputError
from vclang.fpoly import OpCut, brute_solvable_finite, gamma_plus
from vclang.meta import (
    SeparationInstanceSpec,
    brute_core,
    build_separation_instance,
    candidate_core_search,
    conditional_core,
    core_solvability_test,
    enumerate_candidate_cores,
    is_solvable,
    maximal_partition,
    partition_test,
    separation_core,
)
from vclang.vcsp import eval_instance


@pytest.fixture
def gamma_u0() -> Language:
    return Language(2, (unary_crisp(2, (0,)),), ("u0",))


@pytest.fixture
def gamma_u0u1() -> Language:
    return Language(2, (unary_crisp(2, (0,)), unary_crisp(2, (1,))), ("u0", "u1"))


@pytest.fixture
def gamma_softeq_pinned() -> Language:
    # Soft equality plus the two soft pins.  A core: the swap raises u'_0 at 0,
    # each constant raises the opposite pin, and no strict mix fixes both.
    softeq = cost_function(2, 2, {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0})
    u0 = cost_function(1, 2, {(0,): 0, (1,): 1})
    u1 = cost_function(1, 2, {(0,): 1, (1,): 0})
    return Language(2, (softeq, u0, u1), ("feq", "p0", "p1"))


# ---------------------------------------------------------------------------
# Separation-instance construction


def test_build_core_search_keeps_crisp_terms(gamma_crisp_neq2):
    gp = gamma_plus(gamma_crisp_neq2, 1)
    inst, entry_term = build_separation_instance(
        gamma_crisp_neq2, gp, SeparationInstanceSpec("core_search", (Fraction(0), Fraction(0)))
    )
    assert inst.num_vars == 2
    assert [t.scope for t in inst.terms] == [(0, 1), (1, 0)]
    assert all(t.weight == 0 for t in inst.terms)
    assert entry_term == (0, 1)
    # the identity labeling respects the disequality at both scopes
    assert eval_instance(inst, (0, 1)) == 0


def test_build_core_search_skips_vacuous_finite_terms(gamma_submod):
    gp = gamma_plus(gamma_submod, 1)
    zero = (Fraction(0),) * 4
    inst, entry_term = build_separation_instance(
        gamma_submod, gp, SeparationInstanceSpec("core_search", zero)
    )
    assert inst.terms == ()
    assert entry_term == (None, None, None, None)

    one = (Fraction(0), Fraction(1), Fraction(0), Fraction(0))
    inst, entry_term = build_separation_instance(
        gamma_submod, gp, SeparationInstanceSpec("core_search", one)
    )
    assert len(inst.terms) == 1
    assert inst.terms[0].scope == (0, 1)  # the x̄ = (0,1) row itself
    assert inst.terms[0].weight == 1
    assert entry_term == (None, 0, None, None)


def test_build_solvability_adds_diagonal_pins(gamma_submod):
    gp = gamma_plus(gamma_submod, 2)
    zero = (Fraction(0),) * len(gp.entries)
    inst, _ = build_separation_instance(
        gamma_submod, gp, SeparationInstanceSpec("solvability", zero)
    )
    # 4 variables for the tuple space {0,1}^2; only the two pins survive at y=0
    assert inst.num_vars == 4
    assert len(inst.terms) == 2
    assert inst.terms[0].scope == (0,) and inst.terms[0].function.entries == {(0,): Fraction(0)}
    assert inst.terms[1].scope == (3,) and inst.terms[1].function.entries == {(1,): Fraction(0)}


def test_build_solvability_quotient_pins_land_in_diagonal_blocks(gamma_submod):
    from vclang.algebra import symmetry_partition

    gp = gamma_plus(gamma_submod, 2)
    part = symmetry_partition(2, 2)
    assert part.blocks == ((0,), (1, 2), (3,))
    zero = (Fraction(0),) * len(gp.entries)
    inst, _ = build_separation_instance(
        gamma_submod, gp, SeparationInstanceSpec("solvability_quotient", zero, part)
    )
    assert inst.num_vars == 3
    assert [(t.scope, sorted(t.function.entries)) for t in inst.terms] == [
        ((0,), [(0,)]),
        ((2,), [(1,)]),
    ]


def test_build_quotient_labeling_matches_collapsed_operation():
    # One-block quotient: every labeling (a,) stands for the constant map a,
    # and evaluating the instance must equal the weighted entry sum for it.
    f = cost_function(2, 2, {(0, 0): 5, (0, 1): 1, (1, 0): 2, (1, 1): 7})
    lang = Language(2, (f,), ("f",))
    gp = gamma_plus(lang, 1)
    part = Partition.from_blocks(2, [(0, 1)])
    y = (Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 4))
    inst, _ = build_separation_instance(
        lang, gp, SeparationInstanceSpec("partition_quotient", y, part)
    )
    assert inst.num_vars == 1
    for a in range(2):
        direct = sum(
            (
                y[i] * f.entries[tuple(a for _ in e.xbar[0])]
                for i, e in enumerate(gp.entries)
            ),
            Fraction(0),
        )
        assert eval_instance(inst, (a,)) == direct
    assert eval_instance(inst, (0,)) == Fraction(15, 4)
    assert eval_instance(inst, (1,)) == Fraction(21, 4)


def test_build_rejects_bad_weight_vectors(gamma_submod):
    gp = gamma_plus(gamma_submod, 1)
    with pytest.raises(InputError):
        build_separation_instance(
            gamma_submod, gp, SeparationInstanceSpec("core_search", (Fraction(0),))
        )
    with pytest.raises(InputError):
        build_separation_instance(
            gamma_submod,
            gp,
            SeparationInstanceSpec("core_search", (Fraction(0), Fraction(-1), Fraction(0), Fraction(0))),
        )
    with pytest.raises(InputError):
        SeparationInstanceSpec("partition_quotient", (Fraction(0),) * 4)
    with pytest.raises(InputError):
        SeparationInstanceSpec("bogus", ())


# ---------------------------------------------------------------------------
# Core-search separation


def test_separation_core_u0_at_origin_cuts_constant_zero(gamma_u0):
    gp = gamma_plus(gamma_u0, 1)
    got = separation_core(gamma_u0, gp, (0,), (Fraction(0),))
    assert got is not None and got.kind == "cut"
    assert isinstance(got.provenance, OpCut)
    assert got.provenance.op == constant_op(2, 0)
    assert got.provenance.in_minus
    # the op-cut row demands ⟨c,y⟩ ≥ 1 yet c is identically zero here
    assert got.hyperplane.coeffs == {}
    assert got.hyperplane.constant == -1


def test_separation_core_empty_candidate_asserts(gamma_submod):
    gp = gamma_plus(gamma_submod, 1)
    assert separation_core(gamma_submod, gp, (), (Fraction(0),) * 4) is None


def test_separation_core_softneq_candidate_zero(gamma_softneq):
    gp = gamma_plus(gamma_softneq, 1)
    # At the origin every labeling costs 0 = LP*, so the probe returns the
    # lexicographically first map into {0}: a Cut, not an assertion.
    got = separation_core(gamma_softneq, gp, (0,), (Fraction(0),) * 4)
    assert got is not None and got.provenance.op == constant_op(2, 0)
    # Any mass forces the restricted relaxation above LP* — candidate dead.
    mass = (Fraction(0), Fraction(1), Fraction(0), Fraction(0))
    assert separation_core(gamma_softneq, gp, (0,), mass) is None


# ---------------------------------------------------------------------------
# Candidate-core search


def test_candidate_search_gradient_singletons(gamma_gradient):
    out = candidate_core_search(gamma_gradient, [(0,), (1,), (2,)])
    assert out.kind == "omega"
    # constant-0 improves the gradient pointwise and alone suffices
    assert out.omega.support == ((constant_op(3, 0), Fraction(1)),)
    assert out.dead_candidates == 0
    assert is_fractional_polymorphism(out.omega, gamma_gradient)


def test_candidate_search_advances_past_dead_candidates(gamma_gradient):
    # {1} survives the origin (cut on constant-1) but dies as soon as the
    # master puts mass on the f-entries; {0} then closes the system.
    out = candidate_core_search(gamma_gradient, [(1,), (0,)])
    assert out.kind == "omega"
    assert out.dead_candidates == 1
    assert out.omega.support == ((constant_op(3, 0), Fraction(1)),)


def test_candidate_search_softneq_singletons_all_die(gamma_softneq):
    out = candidate_core_search(gamma_softneq, [(0,), (1,)])
    assert out.kind == "conditional_fail"
    assert out.dead_candidates == 2


def test_candidate_search_full_domain_of_a_core_yields_bijections(gamma_softneq):
    # soft not-equal is a core: brute says coresize 2, so any produced support
    # operation over candidate {0,1} must be a bijection.
    size, image, _ = brute_core(gamma_softneq)
    assert (size, image) == (2, (0, 1))
    out = candidate_core_search(gamma_softneq, [(0, 1)])
    assert out.kind == "omega"
    for g, _ in out.omega.support:
        assert sorted(g.table) == [0, 1]
    assert is_fractional_polymorphism(out.omega, gamma_softneq)


def test_candidate_search_requires_a_candidate(gamma_submod):
    with pytest.raises(InputError):
        candidate_core_search(gamma_submod, [])


# ---------------------------------------------------------------------------
# Partition testing


def test_partition_singletons_always_accepted(gamma_submod, gamma_softneq, gamma_one_in_three):
    for lang in (gamma_submod, gamma_softneq, gamma_one_in_three):
        assert partition_test(lang, Partition.singletons(lang.domain_size))


def test_partition_two_pins_reject_merge(gamma_u0u1):
    # No map constant on {0,1} preserves both crisp pins, so no unary
    # fractional polymorphism can carry mass on the collapse.
    merged = Partition.from_blocks(2, [(0, 1)])
    assert not partition_test(gamma_u0u1, merged)


def test_partition_single_pin_accepts_merge(gamma_u0):
    # const-0 preserves u_0 and χ_const0 improves it pointwise, so the
    # one-block partition is genuine (not merely conditional).
    assert is_fractional_polymorphism(chi(constant_op(2, 0)), gamma_u0)
    assert partition_test(gamma_u0, Partition.from_blocks(2, [(0, 1)]))


def test_partition_softneq_merge_conditionally_accepted(gamma_softneq):
    # Soft not-equal is not solvable, so a one-sided accept here is within
    # contract even though no actual collapsing polymorphism exists.
    assert partition_test(gamma_softneq, Partition.from_blocks(2, [(0, 1)]))


def test_maximal_partition_fixture_languages(gamma_u0u1, gamma_gradient):
    assert maximal_partition(gamma_u0u1).blocks == ((0,), (1,))

    # all three labels collapse for the gradient: χ_const0 improves it
    assert maximal_partition(gamma_gradient).blocks == ((0, 1, 2),)

    assert maximal_partition(Language(3, (), ())).blocks == ((0, 1, 2),)

    pins = Language(3, tuple(unary_crisp(3, (a,)) for a in range(3)), ("u0", "u1", "u2"))
    assert maximal_partition(pins).blocks == ((0,), (1,), (2,))

    plateau = Language(3, (cost_function(1, 3, {(0,): 0, (1,): 0, (2,): 1}),), ("f",))
    assert is_fractional_polymorphism(chi(constant_op(3, 0)), plateau)
    assert maximal_partition(plateau).blocks == ((0, 1, 2),)


# ---------------------------------------------------------------------------
# Transversal enumeration and the conditional core


def test_enumerate_candidate_cores_orders_and_counts():
    assert list(enumerate_candidate_cores(Partition.singletons(2))) == [(0, 1)]
    two = Partition.from_blocks(3, [(0, 1), (2,)])
    assert list(enumerate_candidate_cores(two)) == [(0, 2), (1, 2)]
    mixed = Partition.from_blocks(6, [(0, 3), (1, 4, 5), (2,)])
    got = list(enumerate_candidate_cores(mixed))
    assert len(got) == 6
    assert got[0] == (0, 1, 2)
    assert all(len(b) == 3 for b in got)


def test_conditional_core_gradient_matches_brute(gamma_gradient):
    size, image, _ = brute_core(gamma_gradient)
    assert (size, image) == (1, (0,))
    res = conditional_core(gamma_gradient, maximal_partition(gamma_gradient))
    assert res.core == image
    assert is_fractional_polymorphism(res.omega1, gamma_gradient)


def test_conditional_core_softneq_with_singletons(gamma_softneq):
    res = conditional_core(gamma_softneq, Partition.singletons(2))
    assert res.core == (0, 1)
    for g, _ in res.omega1.support:
        assert sorted(g.table) == [0, 1]


def test_conditional_core_softneq_with_merged_partition(gamma_softneq):
    # The pipeline's partition conditionally merges {0,1}; both transversal
    # candidates then die, which asserts (correctly) that Γ is not solvable.
    res = conditional_core(gamma_softneq, Partition.from_blocks(2, [(0, 1)]))
    assert res.core == ()
    assert res.omega1 is None


# ---------------------------------------------------------------------------
# Core solvability


def test_core_solvability_softeq_pinned_mixes_min_and_max(gamma_softeq_pinned):
    # p0 forces ω(max) ≤ 1/2 (entry x̄=(0,1)), p1 forces ω(min) ≤ 1/2, and
    # min/max are the only symmetric idempotent Boolean binary operations,
    # so the certificate is exactly the half/half mix.
    ok, _ = brute_solvable_finite(gamma_softeq_pinned)
    assert ok
    out = core_solvability_test(gamma_softeq_pinned, True)
    assert out.kind == "omega"
    assert dict(out.omega.support) == {min_op(2): Fraction(1, 2), max_op(2): Fraction(1, 2)}
    assert is_fractional_polymorphism(out.omega, gamma_softeq_pinned)


def test_core_solvability_crisp_neq_finds_siggers(gamma_crisp_neq2):
    out = core_solvability_test(gamma_crisp_neq2, False)
    assert out.kind == "omega"
    assert out.omega.arity == 4
    assert all(op_predicate(g, "idempotent") for g, _ in out.omega.support)
    assert any(op_predicate(g, "siggers") for g, _ in out.omega.support)
    assert is_fractional_polymorphism(out.omega, gamma_crisp_neq2)


def test_core_solvability_one_in_three_fails(gamma_one_in_three):
    out = core_solvability_test(gamma_one_in_three, False)
    assert out.kind == "conditional_fail"


def test_core_solvability_empty_language_trivially_solvable():
    out = core_solvability_test(Language(2, (), ()), True)
    assert out.kind == "omega"
    for g, _ in out.omega.support:
        assert op_predicate(g, "symmetric") and op_predicate(g, "idempotent")


def test_core_solvability_quaternary_domain_budget():
    big = Language(4, (unary_crisp(4, (0,)),), ("u0",))
    with pytest.raises(BudgetError):
        core_solvability_test(big, False)


def test_core_solvability_softneq_conditional_fail(gamma_softneq):
    ok, omega = brute_solvable_finite(gamma_softneq)
    assert not ok and omega is None
    out = core_solvability_test(gamma_softneq, True)
    assert out.kind == "conditional_fail"


# ---------------------------------------------------------------------------
# End-to-end pipeline


def test_is_solvable_verdicts_match_oracles(
    gamma_gradient, gamma_submod, gamma_softneq, gamma_crisp_neq2,
    gamma_one_in_three, gamma_u0u1, gamma_softeq_pinned,
):
    # finite-valued fixtures: cross-check against the symmetric-op LP oracle
    for lang, want in (
        (gamma_gradient, True),
        (gamma_submod, True),
        (gamma_softneq, False),
        (gamma_softeq_pinned, True),
    ):
        assert brute_solvable_finite(lang)[0] == want
        assert is_solvable(lang).solvable == want

    # crisp fixtures: verdicts backed by the re-verified certificates (and,
    # for one-in-three, by NP-hardness of the underlying relation)
    assert is_solvable(gamma_crisp_neq2).solvable
    assert is_solvable(gamma_u0u1).solvable
    assert not is_solvable(gamma_one_in_three).solvable


def test_is_solvable_cores_match_brute(
    gamma_gradient, gamma_submod, gamma_crisp_neq2, gamma_u0u1, gamma_softeq_pinned
):
    for lang in (gamma_gradient, gamma_submod, gamma_crisp_neq2, gamma_u0u1,
                 gamma_softeq_pinned):
        verdict = is_solvable(lang)
        size, _, _ = brute_core(lang)
        assert verdict.solvable
        assert len(verdict.core) == size


def test_is_solvable_certificates_verify(gamma_submod, gamma_crisp_neq2):
    v = is_solvable(gamma_submod)
    assert v.solvable and v.core == (0,)
    assert sum(w for _, w in v.omega1.support) == 1
    assert is_fractional_polymorphism(v.omega1, gamma_submod)
    core_lang = gamma_submod.restrict(v.core)
    assert v.omega2.arity == 2
    assert is_fractional_polymorphism(v.omega2, core_lang)

    v = is_solvable(gamma_crisp_neq2)
    assert v.solvable and v.core == (0, 1)
    assert v.omega2.arity == 4
    assert is_fractional_polymorphism(v.omega2, gamma_crisp_neq2.restrict(v.core))
    bound = 1 + len(gamma_plus(gamma_crisp_neq2.restrict(v.core), 4).entries)
    assert len(v.omega2.support) <= bound


def test_is_solvable_trace_reports_phases(gamma_softneq, gamma_crisp_neq2):
    v = is_solvable(gamma_softneq)
    assert not v.solvable
    assert v.trace["core"]["outcome"] == "conditional_fail"
    assert "solvability" not in v.trace

    v = is_solvable(gamma_crisp_neq2)
    assert v.trace["solvability"]["mode"] == "quaternary-siggers"
    assert v.trace["solvability"]["outcome"] == "omega"


# ---------------------------------------------------------------------------
# Brute-force core oracle


def test_brute_core_fixture_table(gamma_softneq, gamma_u0u1, gamma_gradient):
    two_point = Language(2, (cost_function(1, 2, {(0,): 0, (1,): 1}),), ("f",))
    assert brute_core(two_point)[:2] == (1, (0,))
    assert brute_core(gamma_softneq)[:2] == (2, (0, 1))
    assert brute_core(gamma_u0u1)[:2] == (2, (0, 1))
    size, image, omega = brute_core(gamma_gradient)
    assert (size, image) == (1, (0,))
    assert is_fractional_polymorphism(omega, gamma_gradient)
    assert any(g.image() == {0} for g, _ in omega.support)


def test_brute_core_domain_budget():
    big = Language(5, (unary_crisp(5, (0,)),), ("u0",))
    with pytest.raises(BudgetError):
        brute_core(big)
