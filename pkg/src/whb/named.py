"""Small named algebras used throughout the test suites and the CLI."""
from __future__ import annotations

import numpy as np

from .algebra import ArrowAlgebra, algebra_from_names, make_algebra
from .lattice import FiniteBDL, boolean_lattice, chain, diamond, validate_bdl


def heyting_brouwer(L: FiniteBDL, name: str = "") -> ArrowAlgebra:
    """Relative pseudocomplement and its dual on a finite distributive lattice.

    ``x -> y`` is the largest ``z`` with ``z & x <= y``; ``x <- y`` is the least
    ``z`` with ``x <= y | z``.
    """
    n = L.n
    imp = np.zeros((n, n), dtype=np.int64)
    dif = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            imp[a, b] = L.join_all(z for z in range(n) if L.leq[L.meet[z, a], b])
            dif[a, b] = L.meet_all(z for z in range(n) if L.leq[a, L.join[b, z]])
    return make_algebra(L, imp, dif, name)


def trivial_arrows(L: FiniteBDL, name: str = "") -> ArrowAlgebra:
    """``x -> y = 1`` and ``x <- y = 0`` everywhere."""
    n = L.n
    return make_algebra(L, np.full((n, n), L.top), np.full((n, n), L.bottom), name)


def chain3_trivial() -> ArrowAlgebra:
    return trivial_arrows(chain(3), "chain3-trivial")


def chain3_hb() -> ArrowAlgebra:
    return heyting_brouwer(chain(3), "chain3-hb")


def diamond_example() -> ArrowAlgebra:
    """Four-element lattice with arrows whose frame has ``R = {([a), [b))}``, ``S = {([a), [a))}``."""
    imp = [
        ["1", "1", "1", "1"],
        ["1", "1", "1", "1"],
        ["b", "b", "1", "1"],
        ["b", "b", "1", "1"],
    ]
    dif = [
        ["0", "0", "0", "0"],
        ["a", "0", "a", "0"],
        ["0", "0", "0", "0"],
        ["a", "0", "a", "0"],
    ]
    return algebra_from_names(diamond(), imp, dif, "diamond-example")


def boolean_algebra(k: int) -> ArrowAlgebra:
    """Powerset of ``k`` atoms with ``x -> y = ~x | y`` and ``x <- y = x & ~y``."""
    return heyting_brouwer(boolean_lattice(k), f"boolean-{1 << k}")


def two_element_boolean() -> ArrowAlgebra:
    return heyting_brouwer(chain(2), "boolean-2")


def one_element() -> ArrowAlgebra:
    L = validate_bdl(["0"], np.ones((1, 1), dtype=bool))
    return make_algebra(L, [[0]], [[0]], "trivial")


NAMED = {
    "chain3-trivial": chain3_trivial,
    "chain3-hb": chain3_hb,
    "diamond-example": diamond_example,
    "boolean-2": two_element_boolean,
    "boolean-4": lambda: boolean_algebra(2),
    "trivial": one_element,
}
