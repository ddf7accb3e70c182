import pytest

from whb.algebra import batch_in_variety
from whb.catalog import SOURCES, CatalogConfig, build_catalog, catalog
from whb.enumerator import algebra_key
from whb.errors import SizeBound
from whb.named import heyting_brouwer


def test_whb_catalog_counts():
    # [DERIVED] merged from frames <= 3 points, tables on lattices <= 5, HB on lattices <= 8
    c = catalog("WHB")
    assert c.counts() == {1: 1, 2: 2, 3: 6, 4: 30, 5: 130, 6: 112, 7: 8, 8: 118}
    assert len(c) == 407


def test_dwh_catalog_counts():
    c = catalog("DWH")
    assert c.counts() == {1: 1, 2: 4, 3: 81, 4: 4232, 5: 15851, 6: 46660, 7: 8, 8: 44238}


@pytest.mark.parametrize("variety", ["WHB", "DWH"])
def test_catalog_members_belong(variety):
    for b in catalog(variety).batches():
        assert batch_in_variety(b, variety).all()


def test_sources_recorded():
    c = catalog("WHB")
    seen = set()
    for _, src in c.entries():
        assert src and src <= set(SOURCES)
        seen |= src
    assert seen == set(SOURCES)


def test_table_algebras_with_few_join_irreducibles_come_from_frames():
    # finite algebras are complex algebras of their canonical frames; the
    # frame source starts at one point, so the one-element algebra is skipped
    for variety in ("WHB", "DWH"):
        for A, src in catalog(variety).entries():
            if "tables" in src and 1 <= len(A.lattice.join_irreducibles()) <= 3:
                assert "frames" in src, A


def test_every_hb_algebra_present():
    c = catalog("WHB")
    keys = {algebra_key(A) for A in c.algebras()}
    from whb.enumerator import enumerate_bdls

    for L in enumerate_bdls(8):
        assert algebra_key(heyting_brouwer(L)) in keys


def test_catalog_entries_distinct():
    for variety in ("WHB",):
        keys = [algebra_key(A) for A in catalog(variety).algebras()]
        assert len(keys) == len(set(keys))


def test_small_config_and_bound():
    c = build_catalog(CatalogConfig("WHB", 4, 2, 3, 4))
    assert sum(c.counts().values()) == len(c)
    assert max(c.counts()) <= 4
    with pytest.raises(SizeBound):
        build_catalog(CatalogConfig("WHB", 9))
    with pytest.raises(KeyError):
        catalog("XYZ")


def test_max_size_filter():
    c = catalog("WHB")
    assert all(A.n <= 4 for A in c.algebras(4))
    assert len(c.algebras(4)) == 1 + 2 + 6 + 30
