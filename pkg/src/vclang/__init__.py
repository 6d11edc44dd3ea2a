"""vclang: decide solvability of valued constraint languages, with certificates."""

from .algebra import (
    INF,
    CostFunction,
    FractionalOperation,
    Language,
    Operation,
    Partition,
    Rational,
    cost_function,
    unary_crisp,
)

__all__ = [
    "INF",
    "CostFunction",
    "FractionalOperation",
    "Language",
    "Operation",
    "Partition",
    "Rational",
    "cost_function",
    "unary_crisp",
]

__version__ = "0.1.0"
