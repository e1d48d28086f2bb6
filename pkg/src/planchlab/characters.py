"""Exact symmetric-group characters, dimensions and Plancherel weights.

Dimensions come from the hook-length formula; general character values from
the border-strip (Murnaghan-Nakayama) recursion, implemented on beta-sets so
that removing a strip of length k is a single bead move.  Everything is
arbitrary-precision integer arithmetic; Plancherel weights are exact
rationals.  The recursion memoizes on (diagram, class), which the exact
expectation engine re-queries heavily.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .partitions import YoungDiagram, conjugate_rows, sort_partition


@lru_cache(maxsize=None)
def _dimension_of_rows(rows: tuple[int, ...]) -> int:
    if not rows:
        return 1
    cols = conjugate_rows(rows)
    n = sum(rows)
    hook_product = 1
    for i, row in enumerate(rows):
        for j in range(row):
            hook_product *= row - j + cols[j] - i - 1
    dim, rem = divmod(factorial(n), hook_product)
    assert rem == 0
    return dim


def dimension(diagram: YoungDiagram) -> int:
    """Number of standard tableaux of the given shape."""
    return _dimension_of_rows(diagram.rows)


def _beta_set(rows: tuple[int, ...]) -> list[int]:
    ell = len(rows)
    return [rows[i] + (ell - 1 - i) for i in range(ell)]


def _rows_from_beta(beta: list[int]) -> tuple[int, ...]:
    beta = sorted(beta, reverse=True)
    ell = len(beta)
    rows = [beta[i] - (ell - 1 - i) for i in range(ell)]
    return tuple(r for r in rows if r > 0)


@lru_cache(maxsize=None)
def _character_rec(rows: tuple[int, ...], rho: tuple[int, ...]) -> int:
    if not rho:
        return 1
    k = rho[0]
    if k == 1:
        # remaining class is all fixed points
        return _dimension_of_rows(rows)
    rest = rho[1:]
    beta = _beta_set(rows)
    in_beta = set(beta)
    total = 0
    for i, b in enumerate(beta):
        target = b - k
        if target < 0 or target in in_beta:
            continue
        # number of beads jumped fixes the strip height sign
        height = sum(1 for c in beta if target < c < b)
        new_beta = beta[:i] + [target] + beta[i + 1:]
        term = _character_rec(_rows_from_beta(new_beta), rest)
        total += -term if height % 2 else term
    return total


def character(diagram: YoungDiagram, rho) -> int:
    """Character value of the irreducible indexed by the diagram on class rho."""
    rho = sort_partition(rho)
    if sum(rho) != diagram.n:
        raise ValueError(f"class size {sum(rho)} does not match diagram size {diagram.n}")
    return _character_rec(diagram.rows, rho)


def plancherel_weight(diagram: YoungDiagram) -> Fraction:
    """dim^2 / n!; the weights over all diagrams of a given size sum to 1."""
    dim = dimension(diagram)
    return Fraction(dim * dim, factorial(diagram.n))


def class_sign(rho) -> int:
    """Sign of any permutation of cycle type rho."""
    rho = sort_partition(rho)
    return -1 if (sum(rho) - len(rho)) % 2 else 1
