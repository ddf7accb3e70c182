"""Duality on morphisms: homomorphisms to frame maps and back, and the unit ``epsilon``."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import ArrowAlgebra, NotAHomomorphism, hom_violations
from .frames import Frame, NotAMorphism, SpaceMorphism, check_morphism, complex_algebra, preimage
from .spectrum import canonical_frame, points


def dualize_hom(A: ArrowAlgebra, B: ArrowAlgebra, h: Sequence[int]) -> SpaceMorphism:
    """``X(h)``: the map ``Q -> h^-1(Q)`` from the frame of ``B`` to the frame of ``A``."""
    bad = hom_violations(A, B, h)
    if len(h) != A.n or bad:
        raise NotAHomomorphism(f"not a homomorphism: {bad[:1]}", tuple(bad))
    pa, pb = points(A), points(B)
    pos = {P: i for i, P in enumerate(pa)}
    image = []
    for Q in pb:
        P = preimage(h, Q)
        if P not in pos:
            raise RuntimeError("preimage of a prime filter is not prime")
        image.append(pos[P])
    return SpaceMorphism(canonical_frame(B).frame, canonical_frame(A).frame, tuple(image))


def dualize_map(mor: SpaceMorphism) -> tuple[ArrowAlgebra, ArrowAlgebra, list[int]]:
    """``D(f)``: ``U -> f^-1(U)`` from the upset algebra of the target to that of the source."""
    rep = check_morphism(mor)
    if not rep.ok:
        raise NotAMorphism(f"not a frame morphism: {rep.violations[0]}", rep.violations)
    CT = complex_algebra(mor.target)
    CS = complex_algebra(mor.source)
    ups_s = {U: i for i, U in enumerate(mor.source.upsets())}
    h = [ups_s[preimage(mor.map, U)] for U in mor.target.upsets()]
    bad = hom_violations(CT, CS, h)
    if bad:
        raise RuntimeError(f"dual of a frame morphism is not a homomorphism: {bad[0]}")
    return CT, CS, h


def epsilon(f: Frame) -> SpaceMorphism:
    """``x -> {U : x in U}`` into the canonical frame of the upset algebra."""
    C = complex_algebra(f)
    pos = {P: i for i, P in enumerate(points(C))}
    ups = f.upsets()
    image = []
    for x in range(f.m):
        flt = sum(1 << i for i, U in enumerate(ups) if (U >> x) & 1)
        if flt not in pos:
            raise RuntimeError(f"filter of upsets containing point {x} is not prime")
        image.append(pos[flt])
    return SpaceMorphism(f, canonical_frame(C).frame, tuple(image))


def is_frame_isomorphism(mor: SpaceMorphism) -> bool:
    """Bijective, and order, ``R``, ``S`` are preserved and reflected."""
    A, B = mor.source, mor.target
    f = np.asarray(mor.map, dtype=np.int64)
    if A.m != B.m or sorted(f.tolist()) != list(range(B.m)):
        return False
    ix = np.ix_(f, f)
    return bool(
        np.array_equal(A.leq, B.leq[ix])
        and np.array_equal(A.rel("R"), B.rel("R")[ix])
        and np.array_equal(A.rel("S"), B.rel("S")[ix])
    )


def compose(*maps: Sequence[int]) -> list[int]:
    """``compose(f, g)(x) = g(f(x))``: apply maps left to right."""
    out = list(range(len(maps[0])))
    for m in maps:
        out = [m[i] for i in out]
    return out
