"""Exact-arithmetic construction and verification of generalized blob
algebras: one-column multipartition combinatorics, cyclotomic Hecke algebra
models over a modular system, the diagrammatic quotient presentation, its
graded cellular basis, and a certified symbolic rewriting calculus."""

__all__ = [
    "combinatorics",
    "exactfield",
    "hecke",
    "blob",
    "klrcalc",
    "cli",
]
