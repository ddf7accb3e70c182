"""Brute-force reference implementations used as test oracles.

Everything here works straight from the definitions with Python loops and
sets, sharing no code with the package beyond the plain tables of an algebra.
"""
from __future__ import annotations

from itertools import combinations, permutations, product


def subsets(n: int):
    for k in range(n + 1):
        for c in combinations(range(n), k):
            yield frozenset(c)


def leq_of(L):
    return lambda a, b: bool(L.leq[a, b])


def filters(L) -> set[frozenset]:
    le = leq_of(L)
    out = set()
    for X in subsets(L.n):
        if L.top not in X:
            continue
        if any(le(a, b) and b not in X for a in X for b in range(L.n)):
            continue
        if any(int(L.meet[a, b]) not in X for a in X for b in X):
            continue
        out.add(X)
    return out


def prime_filters(L) -> set[frozenset]:
    out = set()
    for F in filters(L):
        if L.bottom in F:
            continue
        if all(a in F or b in F for a in range(L.n) for b in range(L.n) if int(L.join[a, b]) in F):
            out.add(F)
    return out


def to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def relation_R(alg, pts: list[frozenset]) -> set[tuple[int, int]]:
    n = alg.n
    out = set()
    for i, P in enumerate(pts):
        for j, Q in enumerate(pts):
            if all(
                not (int(alg.imp[a, b]) in P and a in Q) or b in Q
                for a in range(n)
                for b in range(n)
            ):
                out.add((i, j))
    return out


def relation_S(alg, pts: list[frozenset]) -> set[tuple[int, int]]:
    n = alg.n
    out = set()
    for i, P in enumerate(pts):
        for j, Q in enumerate(pts):
            if all(int(alg.dif[a, b]) in P for a in Q for b in range(n) if b not in Q):
                out.add((i, j))
    return out


def meet_of(L, Y) -> int:
    out = L.top
    for y in Y:
        out = int(L.meet[out, y])
    return out


def closure_D(alg, F: frozenset, X: frozenset) -> frozenset:
    L = alg.lattice
    return frozenset(
        b for b in range(alg.n) if any(int(alg.imp[meet_of(L, Y), b]) in F for Y in _subsets_of(X))
    )


def closure_F(alg, P: frozenset, X: frozenset) -> frozenset:
    L = alg.lattice
    return frozenset(
        a for a in range(alg.n) if any(int(alg.dif[meet_of(L, Y), a]) not in P for Y in _subsets_of(X))
    )


def _subsets_of(X):
    xs = sorted(X)
    for k in range(len(xs) + 1):
        yield from combinations(xs, k)


def equation_failures(fn_lhs, fn_rhs, n: int, nvars: int):
    """Assignments (lexicographic, first variable most significant) where two evaluators differ."""
    for env in product(range(n), repeat=nvars):
        if fn_lhs(*env) != fn_rhs(*env):
            yield env


def set_partitions(elems: list[int]):
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def congruences(alg, ops=("and", "or", "to", "from")) -> set[frozenset]:
    """Congruences as frozensets of blocks (each block a frozenset)."""
    tables = [alg.table(o) for o in ops]
    out = set()
    for part in set_partitions(list(range(alg.n))):
        block = {}
        for k, blk in enumerate(part):
            for x in blk:
                block[x] = k
        ok = True
        for T in tables:
            for a, b in product(range(alg.n), repeat=2):
                if block[a] != block[b]:
                    continue
                for c in range(alg.n):
                    if block[int(T[a, c])] != block[int(T[b, c])] or block[int(T[c, a])] != block[int(T[c, b])]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.add(frozenset(frozenset(b) for b in part))
    return out


def blocks_of(labels) -> frozenset:
    out: dict = {}
    for i, r in enumerate(labels):
        out.setdefault(r, set()).add(i)
    return frozenset(frozenset(b) for b in out.values())


def isomorphic(A, B) -> bool:
    """Search all bijections preserving order and both arrow tables."""
    if A.n != B.n:
        return False
    n = A.n
    for p in permutations(range(n)):
        if all(
            bool(A.lattice.leq[a, b]) == bool(B.lattice.leq[p[a], p[b]])
            and p[int(A.imp[a, b])] == int(B.imp[p[a], p[b]])
            and p[int(A.dif[a, b])] == int(B.dif[p[a], p[b]])
            for a in range(n)
            for b in range(n)
        ):
            return True
    return False


def upsets(leq) -> list[frozenset]:
    m = len(leq)
    return [
        U
        for U in subsets(m)
        if all(y in U for x in U for y in range(m) if leq[x][y])
    ]


def complex_ops(leq, R, S):
    """Upsets plus the two arrows, by the set-builder definitions."""
    m = len(leq)
    ups = upsets(leq)
    Rs = [frozenset(j for j in range(m) if R is not None and R[i][j]) for i in range(m)]
    Ss = [frozenset(j for j in range(m) if S is not None and S[i][j]) for i in range(m)]
    imp = {(U, V): frozenset(x for x in range(m) if Rs[x] & U <= V) for U in ups for V in ups}
    dif = {(U, V): frozenset(x for x in range(m) if Ss[x] & (U - V)) for U in ups for V in ups}
    return ups, imp, dif


def axiom_checks(L, imp, dif):
    """Each axiom as a predicate on (x, y, z), written directly against the tables."""
    m, j, le = L.meet, L.join, L.leq
    o, i = L.bottom, L.top
    T, D = imp, dif
    return {
        "wh1": lambda x, y, z: T[x, x] == i,
        "wh2": lambda x, y, z: T[x, m[y, z]] == m[T[x, y], T[x, z]],
        "wh3": lambda x, y, z: T[j[x, y], z] == m[T[x, z], T[y, z]],
        "wh4": lambda x, y, z: le[m[T[x, y], T[y, z]], T[x, z]],
        "wd1": lambda x, y, z: D[x, x] == o,
        "wd2": lambda x, y, z: D[j[x, y], z] == j[D[x, z], D[y, z]],
        "wd3": lambda x, y, z: D[x, m[y, z]] == j[D[x, y], D[x, z]],
        "wd4": lambda x, y, z: le[D[x, z], j[D[x, y], D[y, z]]],
        "r": lambda x, y, z: le[m[x, T[x, y]], y],
        "t": lambda x, y, z: le[T[x, y], T[z, T[x, y]]],
        "b": lambda x, y, z: le[x, T[i, x]],
        "rstar": lambda x, y, z: le[x, j[y, D[x, y]]],
        "tstar": lambda x, y, z: le[D[D[x, y], z], D[x, y]],
        "bstar": lambda x, y, z: le[D[x, o], x],
        "e1": lambda x, y, z: le[m[x, D[T[x, y], o]], y],
        "e2": lambda x, y, z: le[x, j[y, T[i, D[x, y]]]],
    }


def axiom_holds(L, imp, dif, ax: str) -> bool:
    f = axiom_checks(L, imp, dif)[ax]
    return all(f(x, y, z) for x, y, z in product(range(L.n), repeat=3))
