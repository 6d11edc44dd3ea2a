from fractions import Fraction

import pytest

from vclang.algebra import CostFunction, Language, cost_function, unary_crisp


@pytest.fixture
def f_submod() -> CostFunction:
    # Bare-hands submodular table on {0,1}:
    # f(0,0)+f(1,1) = 0 <= f(0,1)+f(1,0) = 3
    return cost_function(2, 2, {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 0})


@pytest.fixture
def gamma_submod(f_submod) -> Language:
    return Language(2, (f_submod,), ("fsub",))


@pytest.fixture
def f_softneq() -> CostFunction:
    # Finite-valued "soft not-equal": cost 1 on the diagonal, 0 off it.
    return cost_function(2, 2, {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1})


@pytest.fixture
def gamma_softneq(f_softneq) -> Language:
    return Language(2, (f_softneq,), ("fneq",))


@pytest.fixture
def gamma_gradient() -> Language:
    # Single unary function with a strict gradient; core is {0}.
    return Language(3, (cost_function(1, 3, {(0,): 0, (1,): 1, (2,): 2}),), ("grad",))


@pytest.fixture
def gamma_crisp_neq2() -> Language:
    # Crisp disequality on {0,1}; solvable (affine), and a core.
    neq = cost_function(2, 2, {(0, 1): 0, (1, 0): 0})
    return Language(2, (neq,), ("neq",))


@pytest.fixture
def gamma_one_in_three() -> Language:
    # Crisp 1-in-3 positive SAT relation on {0,1}; NP-hard, so not solvable.
    r = cost_function(3, 2, {(0, 0, 1): 0, (0, 1, 0): 0, (1, 0, 0): 0})
    return Language(2, (r, unary_crisp(2, (0,)), unary_crisp(2, (1,))), ("oneinthree", "u0", "u1"))


def frac(a, b=1) -> Fraction:
    return Fraction(a, b)


@pytest.fixture
def check_blp():
    """Verify a relaxation solution by direct arithmetic: distributions sum
    to one, mu is supported on dom f, marginals match alpha, and the expected
    cost equals the reported value."""
    from vclang.algebra import INF

    def check(instance, sol):
        if sol.value == INF:
            assert sol.alpha is None and sol.mu is None
            return
        assert len(sol.alpha) == instance.num_vars
        for av in sol.alpha:
            assert all(p > 0 for p in av.values())
            assert sum(av.values()) == 1
            assert all(0 <= a < instance.domain_size for a in av)
        assert len(sol.mu) == len(instance.terms)
        total = Fraction(0)
        for t, m in zip(instance.terms, sol.mu):
            assert all(p > 0 for p in m.values())
            assert sum(m.values()) == 1
            for x in m:
                assert x in t.function.entries
            for k, v in enumerate(t.scope):
                for a in range(instance.domain_size):
                    lhs = sum(p for x, p in m.items() if x[k] == a)
                    assert lhs == sol.alpha[v].get(a, Fraction(0))
            if t.weight != 0:
                total += t.weight * sum(
                    p * t.function.entries[x] for x, p in m.items()
                )
        assert total == sol.value

    return check
