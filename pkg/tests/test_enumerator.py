from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from whb.algebra import batch_in_variety, make_algebra
from whb.catalog import catalog
from whb.enumerator import (
    algebra_key,
    canonical_algebra,
    enumerate_algebra_batch,
    enumerate_algebras,
    enumerate_bdls,
    lattice_code,
)
from whb.errors import SizeBound
from whb.lattice import chain, diamond, validate_bdl
from whb.named import diamond_example, heyting_brouwer

# OEIS A006982: distributive lattices with n elements
KNOWN_COUNTS = [1, 1, 1, 2, 3, 5, 8, 15, 26, 47]


def _count_by_size(ls):
    out = [0] * 10
    for L in ls:
        out[L.n - 1] += 1
    return out


def test_lattice_counts_downsets():
    assert _count_by_size(enumerate_bdls(10)) == KNOWN_COUNTS


def test_lattice_counts_tables():
    assert _count_by_size(enumerate_bdls(7, "tables"))[:7] == KNOWN_COUNTS[:7]


def test_routes_agree():
    a = [(L.n, lattice_code(L)) for L in enumerate_bdls(7)]
    b = [(L.n, lattice_code(L)) for L in enumerate_bdls(7, "tables")]
    assert a == b


def _oracle_lattice_count(n):
    """Distributive lattices on n elements up to isomorphism, from all order matrices."""
    if n == 1:
        return 1
    k = n - 2
    seen = set()
    for bits_ in product([False, True], repeat=k * k):
        mid = np.array(bits_, dtype=bool).reshape(k, k)
        leq = np.zeros((n, n), dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        leq[1 : n - 1, 1 : n - 1] = mid
        try:
            validate_bdl(None, leq)
        except ValueError:
            continue
        seen.add(min(leq[np.ix_(p, p)].tobytes() for p in permutations(range(n))))
    return len(seen)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_lattice_count_brute_force(n):
    assert _oracle_lattice_count(n) == KNOWN_COUNTS[n - 1]


def test_enumeration_bounds():
    with pytest.raises(SizeBound):
        enumerate_bdls(11)
    with pytest.raises(SizeBound):
        enumerate_bdls(8, "tables")
    with pytest.raises(ValueError):
        enumerate_bdls(3, "sideways")
    assert enumerate_bdls(0) == []
    with pytest.raises(SizeBound):
        enumerate_algebra_batch(chain(9), "WHB")
    with pytest.raises(KeyError):
        enumerate_algebra_batch(chain(2), "XYZ")


def test_enumerated_lattices_are_distributive():
    for L in enumerate_bdls(10):
        validate_bdl(L.names, L.leq)


def test_two_chain_whb_count():
    # [DERIVED] the Boolean structure and the trivial one (-> = 1, <- = 0)
    algs = enumerate_algebras(chain(2), "WHB")
    assert len(algs) == 2
    tables = {(tuple(A.imp.ravel()), tuple(A.dif.ravel())) for A in algs}
    assert ((1, 1, 1, 1), (0, 0, 0, 0)) in tables
    assert ((1, 1, 0, 1), (0, 0, 1, 0)) in tables


def test_two_chain_whb_by_brute_force():
    L = chain(2)
    count = 0
    for imp in product(range(2), repeat=4):
        for dif in product(range(2), repeat=4):
            I = np.array(imp).reshape(2, 2)
            D = np.array(dif).reshape(2, 2)
            if all(oracles.axiom_holds(L, I, D, a) for a in ("wh1", "wh2", "wh3", "wh4", "wd1", "wd2", "wd3", "wd4", "e1", "e2")):
                count += 1
    assert count == 2


def test_diamond_dwh_contains_example():
    keys = {algebra_key(A) for A in enumerate_algebras(diamond(), "DWH")}
    assert algebra_key(diamond_example()) in keys
    whb = {algebra_key(A) for A in enumerate_algebras(diamond(), "WHB")}
    assert algebra_key(diamond_example()) not in whb


def test_hb_structure_is_unique_per_lattice():
    for L in enumerate_bdls(6):
        algs = enumerate_algebras(L, "HB")
        assert len(algs) == 1
        assert algebra_key(algs[0]) == algebra_key(heyting_brouwer(L))


def test_whb_on_small_lattices_pairwise_non_isomorphic():
    for L in enumerate_bdls(5):
        algs = enumerate_algebras(L, "WHB")
        for i in range(len(algs)):
            for j in range(i + 1, len(algs)):
                assert not oracles.isomorphic(algs[i], algs[j])


def test_whb_on_three_chain_complete():
    L = chain(3)
    whb = enumerate_algebras(L, "WHB")
    for A in whb:
        assert all(oracles.axiom_holds(L, A.imp, A.dif, a) for a in ("e1", "e2"))
    assert len(whb) == 6


@given(st.integers(0, 406), st.randoms(use_true_random=False))
def test_canonical_key_invariant_under_relabelling(i, rnd):
    A = catalog("WHB").algebras()[i]
    p = list(range(A.n))
    rnd.shuffle(p)
    inv = np.argsort(p)
    # element p[k] of A becomes element k of the copy
    L = validate_bdl([A.names[j] for j in p], A.lattice.leq[np.ix_(p, p)])
    imp = inv[A.imp[np.ix_(p, p)]]
    dif = inv[A.dif[np.ix_(p, p)]]
    B = make_algebra(L, imp, dif)
    assert algebra_key(A) == algebra_key(B)
    can, key = canonical_algebra(B)
    assert oracles.isomorphic(can, A)



@pytest.mark.parametrize("target", ["HB", "BWHB", "TBA-reduct"])
def test_prefiltered_search_matches_filtered_dwh(target):
    for L in enumerate_bdls(4):
        full = enumerate_algebra_batch(L, "DWH")
        want = {algebra_key(full.algebra(i)) for i in np.flatnonzero(batch_in_variety(full, target))}
        got = {algebra_key(A) for A in enumerate_algebras(L, target)}
        assert got == want
