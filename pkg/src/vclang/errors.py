"""Exception types shared across the toolkit.

Two failure families are kept apart deliberately: refusing to start (or
continue) work that exceeds a configured budget, and detecting that an
internal invariant was violated.  The CLI maps them to distinct exit codes,
and nothing in the library ever converts a budget refusal into a wrong
answer.
"""

from __future__ import annotations


class VclangError(Exception):
    """Base class for all library-raised errors."""


class InputError(VclangError):
    """Malformed user input (files, labels out of range, bad weights...)."""


class BudgetError(VclangError):
    """A configured budget would be exceeded; work was refused, not botched.

    ``budget`` names the limit that tripped, ``needed`` the estimated demand
    when that is cheap to compute (may be None).
    """

    def __init__(self, budget: str, message: str, needed=None):
        super().__init__(message)
        self.budget = budget
        self.needed = needed


class IterationCapError(BudgetError):
    """Cutting-plane iteration cap reached without a decision."""

    def __init__(self, cap: int, context: str):
        super().__init__(
            "iteration_cap",
            f"cutting-plane loop hit the iteration cap ({cap}) in {context}; "
            f"raise the cap to continue — no verdict was produced",
            needed=cap + 1,
        )
        self.cap = cap
        self.context = context


class InvariantError(VclangError):
    """An internal invariant failed; indicates a bug, never bad input."""
