import pytest

from conftest import load
from hka.algebra import check_interchange, dia, run_all
from hka.cells import identity_cell, make_cell, tile_cell
from hka.errors import NotInvertible, SphereError
from hka.pathalgebra import Bounds, CellSet, PathModel, literal_cell
from hka.polygraph import Sphere


@pytest.fixture(scope="module")
def kite():
    return load("kite")


@pytest.fixture(scope="module")
def m4(kite):
    return PathModel(kite, Bounds(4, 3))


def ids(m, *texts):
    P = m.P
    return CellSet(identity_cell(P.parse_zigzag(t.split())) for t in texts)


def names(m, cs):
    return sorted(m.P.fmt_zigzag(c.src) for c in cs)


def test_construction(m4):
    assert len(m4.unit(0)) == 4
    assert all(not c.tiles for c in m4.unit(1))


def test_empty_extension_has_only_identities():
    m = PathModel(load("kite_bare"), Bounds(4, 3))
    assert len(m.gamma_steps()) == 0
    assert all(not c.tiles for c in m.star(1, m.gamma_steps()))


def test_non_parallel_sphere_is_rejected(kite):
    f, h = kite.parse_zigzag(["f"]), kite.parse_zigzag(["h"])
    with pytest.raises(SphereError):
        PathModel(kite.with_extension((Sphere("bad", f, h),)), Bounds(2, 1))


def test_composition_examples(m4):
    alpha = CellSet([tile_cell(m4.P, (), 0, ())])
    assert m4.eq(m4.mul(1, alpha, m4.unit(1)), alpha)
    assert m4.eq(m4.mul(0, m4.unit(0), alpha), alpha)
    assert m4.mul(0, ids(m4, "f"), ids(m4, "h")) == ids(m4, "f h")
    assert m4.mul(1, alpha, ids(m4, "h k-")) == alpha
    assert len(m4.mul(1, alpha, ids(m4, "f- g"))) == 0


def test_domain_examples(m4):
    alpha = CellSet([tile_cell(m4.P, (), 0, ())])
    assert m4.dom(1, alpha) == ids(m4, "f- g")
    assert m4.cod(1, alpha) == ids(m4, "h k-")
    assert m4.dom(0, m4.unit(0)) == m4.unit(0)
    b, c = m4.P.object_of("b"), m4.P.object_of("c")
    assert {x.src.start for x in m4.dom(0, alpha)} == {b}
    assert {x.src.start for x in m4.cod(0, alpha)} == {c}


def test_antidomain_examples(m4):
    assert m4.adom(0, CellSet()) == m4.unit(0)
    rest = m4.adom(0, ids(m4, "f"))
    assert sorted(m4.P.objects[c.src.start] for c in rest) == ["b", "c", "d"]
    assert len(m4.adom(1, m4.unit(1))) == 0


def test_star_examples(m4):
    assert m4.star(0, CellSet()) == m4.unit(0)
    assert m4.star(1, CellSet()) == m4.unit(1)
    s = m4.star(0, ids(m4, "f"))
    assert s == m4.unit(0) | ids(m4, "f")
    s = m4.star(0, ids(m4, "f") | ids(m4, "h"))
    assert s == m4.unit(0) | ids(m4, "f", "h", "f h")
    assert not s.clipped


def test_gamma_steps_examples(kite):
    m0 = PathModel(kite, Bounds(2, 1))
    bare = {c for c in m0.gamma_steps() if not c.tiles[0].l and not c.tiles[0].r}
    assert {c.tiles[0].gen for c in bare} == {0, 1}
    m = PathModel(kite, Bounds(4, 3))
    t = literal_cell(m, "h- f- g k", [(["h-"], "alpha", ["k"])])
    assert t in m.gamma_steps().cells


def test_converse_examples(m4):
    assert m4.conv(0, ids(m4, "f- g")) == ids(m4, "g- f")
    assert m4.conv(0, m4.unit(0)) == m4.unit(0)
    with pytest.raises(NotInvertible):
        m4.conv(1, CellSet([tile_cell(m4.P, (), 0, ())]))
    steps = m4.steps()
    assert names(m4, m4.conv(0, steps)) == ["f-", "g-", "h-", "k-"]


def test_truncation_is_flagged(kite):
    m = PathModel(kite, Bounds(2, 1))
    s = m.star(0, m.add(m.steps(), m.conv(0, m.steps())))
    assert s.clipped
    many = m.star(1, m.gamma_steps())
    assert many.clipped


def test_unclipped_results_are_stable_under_larger_bounds(kite):
    small, big = PathModel(kite, Bounds(4, 2)), PathModel(kite, Bounds(5, 3))
    for build in (lambda m: m.star(0, m.steps()),
                  lambda m: m.mul(0, m.steps(), m.steps()),
                  lambda m: m.dom(1, CellSet([tile_cell(m.P, (), 0, ())]))):
        a, b = build(small), build(big)
        if not a.clipped:
            assert a.cells == b.cells


def test_gamma_star_matches_chain_enumeration(kite):
    for L in (1, 2, 3):
        for T in (0, 1, 2):
            m = PathModel(kite, Bounds(L, T))
            G = m.gamma_steps()
            by_src = {}
            for c in G:
                by_src.setdefault(c.src, []).append(c)
            found = set()

            def walk(z, seq, cur):
                found.add(make_cell(kite, z, seq))
                if len(seq) < T:
                    for c in by_src.get(cur, ()):
                        walk(z, seq + c.tiles, c.tgt)
            for z in m.zigzags:
                walk(z, (), z)
            S = m.star(1, G)
            assert S.cells == found, (L, T)


def test_dia_star_agrees_with_materialized_star(kite):
    m = PathModel(kite, Bounds(3, 2))
    G = m.gamma_steps()
    S = m.star(1, G)
    for z in m.zigzags:
        q = m.cell_of(z)
        assert dia(m, "fwd", S, 1, q).cells <= m.dia_star(G, q).cells


def test_kite_laws_small_budget(kite):
    m = PathModel(kite, Bounds(4, 3))
    for r in run_all(m, budget=20, seed=5):
        assert r.passed, (r.law, r.failures[:1])


@pytest.mark.parametrize("mutation", ["drop-interchange", "wrong-antidomain", "star-no-unit", "cod-dom-swap"])
def test_mutants_are_caught(kite, mutation):
    m = PathModel(kite, Bounds(4, 3), mutation)
    reports = [check_interchange(m, 100, 0)] if mutation == "drop-interchange" else run_all(m, 100, 0)
    assert any(not r.passed for r in reports)
