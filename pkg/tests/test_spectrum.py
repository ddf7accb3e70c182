import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from whb.algebra import family_holds
from whb.catalog import catalog
from whb.enumerator import enumerate_algebra_batch, enumerate_bdls
from whb.lattice import all_filters, bits, is_filter
from whb.named import NAMED, chain3_hb, chain3_trivial, diamond_example, heyting_brouwer
from whb.spectrum import (
    batch_relations,
    canonical_frame,
    closure_D,
    closure_F,
    filter_name,
    points,
    relation_R,
    relation_S,
    stone_map,
    stone_report,
    witness_R,
    witness_S,
)


def _pairs(M):
    return {(int(i), int(j)) for i, j in zip(*np.nonzero(M))}


def test_chain3_hb_frame():
    # [WORKED EXAMPLE] two prime filters, R = {(P1,P1), (P1,P2), (P2,P2)}, S = R^-1
    A = chain3_hb()
    assert [filter_name(A, P) for P in points(A)] == ["{1}", "{a,1}"]
    assert _pairs(relation_R(A)) == {(0, 0), (0, 1), (1, 1)}
    assert _pairs(relation_S(A)) == {(0, 0), (1, 0), (1, 1)}


def test_chain3_trivial_frame_is_empty():
    # [DERIVED] a -> b = 1 lies in every filter and a <- b = 0 in none
    A = chain3_trivial()
    assert not relation_R(A).any() and not relation_S(A).any()


def test_diamond_example_frame():
    # [WORKED EXAMPLE] R = {([a), [b))}, S = {([a), [a))}
    A = diamond_example()
    assert [filter_name(A, P) for P in points(A)] == ["{a,1}", "{b,1}"]
    assert _pairs(relation_R(A)) == {(0, 1)}
    assert _pairs(relation_S(A)) == {(0, 0)}


def _oracle_pts(A):
    return [oracles.to_set(P) for P in points(A)]


@pytest.mark.parametrize("name", sorted(NAMED))
def test_relations_match_oracle_named(name):
    A = NAMED[name]()
    pts = _oracle_pts(A)
    assert _pairs(relation_R(A)) == oracles.relation_R(A, pts)
    assert _pairs(relation_S(A)) == oracles.relation_S(A, pts)


def test_relations_match_oracle_on_catalog():
    for A in catalog("WHB").algebras(6):
        pts = _oracle_pts(A)
        assert _pairs(relation_R(A)) == oracles.relation_R(A, pts)
        assert _pairs(relation_S(A)) == oracles.relation_S(A, pts)


def test_batch_relations_match_single():
    for b in catalog("DWH").batches(5)[:40]:
        leq, R, S = batch_relations(b)
        for i in range(b.size):
            A = b.algebra(i)
            assert (R[i] == relation_R(A)).all() and (S[i] == relation_S(A)).all()
            assert (leq == canonical_frame(A).leq).all()


def test_heyting_brouwer_relations_are_inclusion():
    for L in enumerate_bdls(8):
        A = heyting_brouwer(L)
        leq = canonical_frame(A).leq
        assert (relation_R(A) == leq).all()
        assert (relation_S(A) == leq.T).all()


def _filter_rel(A, F, H, which):
    """The defining condition of R_A / S_A for arbitrary filters."""
    for a in range(A.n):
        for b in range(A.n):
            inside = (H >> a) & 1 and not (H >> b) & 1
            if which == "R" and (F >> int(A.imp[a, b])) & 1 and inside:
                return False
            if which == "S" and inside and not (F >> int(A.dif[a, b])) & 1:
                return False
    return True


def _wh_algebras(max_size):
    for L in enumerate_bdls(max_size):
        yield from enumerate_algebra_batch(L, "WH").algebras()


def _wd_algebras(max_size):
    for L in enumerate_bdls(max_size):
        yield from enumerate_algebra_batch(L, "WD").algebras()


def test_closure_D_examples():
    # [DERIVED] D_{1}(empty) on the 3-chain with x -> y = 1 is the whole carrier
    A = chain3_trivial()
    assert closure_D(A, 1 << A.lattice.top, 0) == 0b111


def test_closure_D_properties():
    # filter, extensive, (F, D_F(X)) in R, least such filter, idempotent
    for A in _wh_algebras(4):
        L = A.lattice
        filts = all_filters(L)
        for F in filts:
            for X in range(1 << A.n):
                D = closure_D(A, F, X)
                assert is_filter(L, D)
                assert X & ~D == 0
                assert _filter_rel(A, F, D, "R")
                for H in filts:
                    if X & ~H == 0 and _filter_rel(A, F, H, "R"):
                        assert D & ~H == 0
                assert closure_D(A, F, D) == D


def test_closure_D_matches_oracle():
    for A in _wh_algebras(4):
        for F in all_filters(A.lattice):
            for X in range(1 << A.n):
                assert oracles.to_set(closure_D(A, F, X)) == oracles.closure_D(A, oracles.to_set(F), oracles.to_set(X))


def test_closure_D_fixes_successors():
    for A in catalog("WHB").algebras(8):
        R = relation_R(A)
        pts = points(A)
        for i, P in enumerate(pts):
            for j, Q in enumerate(pts):
                assert (closure_D(A, P, Q) == Q) == bool(R[i, j])


def test_closure_F_properties():
    for A in _wd_algebras(4):
        L = A.lattice
        filts = all_filters(L)
        for P in points(A):
            for X in range(1 << A.n):
                Fx = closure_F(A, P, X)
                assert is_filter(L, Fx)
                assert X & ~Fx == 0
                assert _filter_rel(A, P, Fx, "S")
                for H in filts:
                    if X & ~H == 0 and _filter_rel(A, P, H, "S"):
                        assert Fx & ~H == 0
                assert closure_F(A, P, Fx) == Fx
                assert oracles.to_set(Fx) == oracles.closure_F(A, oracles.to_set(P), oracles.to_set(X))


def test_closure_F_fixes_successors():
    for A in catalog("WHB").algebras(8):
        S = relation_S(A)
        pts = points(A)
        for i, P in enumerate(pts):
            for j, Q in enumerate(pts):
                assert (closure_F(A, P, Q) == Q) == bool(S[i, j])


def test_closure_F_on_diamond_is_a_filter():
    A = diamond_example()
    for P in points(A):
        for X in range(1 << A.n):
            assert is_filter(A.lattice, closure_F(A, P, X))


def test_join_reading_of_closure_F_collapses():
    # 0 <- a is 0 in every WD algebra, so using joins with an empty join of 0
    # would put every element into the closure of every set
    for A in _wd_algebras(6):
        assert (A.dif[A.lattice.bottom, :] == A.lattice.bottom).all()


def test_witnesses_exist_exactly_when_needed():
    # a -> b not in P iff some Q with P R Q has a in Q, b not in Q; dually for S
    for A in catalog("WHB").algebras(6):
        for P in points(A):
            for a in range(A.n):
                for b in range(A.n):
                    q = witness_R(A, P, a, b)
                    assert (q is None) == bool((P >> int(A.imp[a, b])) & 1)
                    if q is not None:
                        assert (q >> a) & 1 and not (q >> b) & 1
                    q = witness_S(A, P, a, b)
                    assert (q is None) == (not (P >> int(A.dif[a, b])) & 1)
                    if q is not None:
                        assert (q >> a) & 1 and not (q >> b) & 1


def test_witness_rejects_non_prime():
    A = chain3_trivial()
    with pytest.raises(ValueError):
        witness_R(A, 0b111, 0, 0)


def test_stone_map_is_embedding_on_catalogs():
    for A in catalog("WHB").algebras():
        assert stone_report(A).ok


def test_stone_map_on_dwh_sample():
    for A in catalog("DWH").algebras(5)[::50]:
        assert stone_report(A).ok


@given(st.integers(0, 406))
def test_stone_map_members(i):
    A = catalog("WHB").algebras()[i]
    sigma = stone_map(A)
    pts = points(A)
    for a in range(A.n):
        assert bits(sigma[a]) == [j for j, P in enumerate(pts) if (P >> a) & 1]


def test_reflexive_R_iff_axiom_r():
    # spot-check: R reflexive iff r holds, on the WHB catalog
    for A in catalog("WHB").algebras():
        assert bool(np.diag(relation_R(A)).all()) == family_holds(A, "R")
