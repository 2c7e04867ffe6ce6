import itertools

import pytest

from conftest import load
from hka.cells import (
    Normalizer,
    Tile,
    _swap,
    _unswap,
    boundaries,
    default_reach,
    hcomp,
    identity_cell,
    make_cell,
    normalize_cell,
    tile_cell,
    tile_source,
    tile_target,
    vcomp,
    whisker,
)
from hka.errors import ChainError


def zz(P, text, at=None):
    return P.parse_zigzag(text.split(), start=at)


@pytest.fixture(scope="module")
def kite():
    return load("kite")


def test_tile_boundaries(kite):
    a = tile_cell(kite, (), 0, ())
    assert kite.fmt_zigzag(a.src) == "f- g"
    assert kite.fmt_zigzag(a.tgt) == "h k-"
    w = tile_cell(kite, zz(kite, "h-").word, 0, zz(kite, "k").word)
    assert kite.fmt_zigzag(w.src) == "h- f- g k"
    assert w.tgt.word == () and w.tgt.start == w.tgt.end == kite.object_of("d")


def test_tile_chaining_is_checked(kite):
    with pytest.raises(ChainError):
        tile_cell(kite, zz(kite, "g").word, 0, ())
    a = tile_cell(kite, (), 0, ())
    with pytest.raises(ChainError):
        make_cell(kite, zz(kite, "g- f"), a.tiles)


def _tiles(P, L):
    out = []
    for g, sp in enumerate(P.extension):
        for l in P.zigzags(L):
            if l.end != sp.src.start:
                continue
            for r in P.zigzags(L):
                if r.start == sp.src.end:
                    out.append(Tile(l.word, g, r.word))
    return out


def test_exchange_moves_preserve_the_composite(kite):
    checked = 0
    tiles = _tiles(kite, 1)
    for t1, t2 in itertools.product(tiles, repeat=2):
        if tile_target(kite, t1) != tile_source(kite, t2):
            continue
        for move in (_swap, _unswap):
            a, b = move(kite, t1, t2)
            assert tile_source(kite, a) == tile_source(kite, t1)
            assert tile_target(kite, a) == tile_source(kite, b)
            assert tile_target(kite, b) == tile_target(kite, t2)
            assert a.gen == t2.gen and b.gen == t1.gen
        a, b = _swap(kite, t1, t2)
        assert _unswap(kite, a, b) == (t1, t2)
        checked += 1
    assert checked > 0


def test_normalizer_is_idempotent_and_constant_on_orbits(kite):
    nz = Normalizer(kite, default_reach(kite))
    a = tile_cell(kite, (), 0, ())
    b = tile_cell(kite, (), 1, ())
    c = hcomp(kite, a, b, normalize=False)
    form = nz(c.tiles)
    assert nz(form) == form
    for ts in nz.orbit(c.tiles):
        assert nz(ts) == form


def test_disjoint_tiles_scheduled_either_way_agree(kite):
    a = tile_cell(kite, (), 0, ())
    b = tile_cell(kite, (), 1, ())
    left_first = hcomp(kite, a, b, normalize=False)
    # the same composite with the right tile applied first
    right_first = vcomp(kite, hcomp(kite, identity_cell(a.src), b, normalize=False),
                        hcomp(kite, a, identity_cell(b.tgt), normalize=False), normalize=False)
    assert left_first.src == right_first.src and left_first.tgt == right_first.tgt
    assert left_first.tiles != right_first.tiles
    assert normalize_cell(kite, left_first) == normalize_cell(kite, right_first)


def test_identity_padding_disappears(kite):
    a = tile_cell(kite, (), 0, ())
    assert vcomp(kite, identity_cell(a.src), a) == a
    assert vcomp(kite, a, identity_cell(a.tgt)) == a
    assert normalize_cell(kite, a) == a


def test_vertical_composition_needs_matching_boundary(kite):
    a = tile_cell(kite, (), 0, ())
    with pytest.raises(ChainError):
        vcomp(kite, a, a)
    with pytest.raises(ChainError):
        hcomp(kite, a, a)


def test_horizontal_composition_of_identities_is_concatenation(kite):
    f = identity_cell(zz(kite, "f"))
    h = identity_cell(zz(kite, "h"))
    assert hcomp(kite, f, h) == identity_cell(zz(kite, "f h"))


def test_whisker_and_boundaries(kite):
    a = tile_cell(kite, (), 0, ())
    w = whisker(kite, zz(kite, "f"), a, zz(kite, "k"))
    assert kite.fmt_zigzag(w.src) == "g k"
    assert kite.fmt_zigzag(w.tgt) == "f h"
    assert boundaries(kite, w) == [w.src.word, w.tgt.word]


def test_interchange_in_the_free_category(kite):
    """(a *0 b) *1 (c *0 d) and (a *1 c) *0 (b *1 d) give one normal form."""
    a = tile_cell(kite, (), 0, ())
    b = tile_cell(kite, (), 1, ())
    ia, ib = identity_cell(a.tgt), identity_cell(b.tgt)
    lhs = vcomp(kite, hcomp(kite, a, b), hcomp(kite, ia, ib))
    rhs = hcomp(kite, vcomp(kite, a, ia), vcomp(kite, b, ib))
    assert lhs == rhs
