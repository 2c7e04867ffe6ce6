"""2-cells of the free 2-category generated by a cellular extension of a free groupoid.

A 2-cell is a vertical sequence of whiskered generators ``(l, gamma, r)``.
Because every 1-cell is invertible, two consecutive tiles can always be
exchanged: for ``T1 = (l1, a, r1)`` followed by ``T2 = (l2, b, r2)`` put
``m = s(b)^- l2^- l1``; then ``T1 ; T2 = (l2, b, m s(a) r1) ; (l2 t(b) m, a, r1)``.
A mirrored move keeps the right whisker instead.  Sequences related by
these moves denote the same cell; ``Normalizer`` picks one representative
per (bounded) orbit.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import ChainError
from .polygraph import ZigZag, inverse_word, reduce_tagged, reduce_word


class Tile(NamedTuple):
    l: tuple
    gen: int
    r: tuple


class TwoCell(NamedTuple):
    src: ZigZag
    tgt: ZigZag
    tiles: tuple

    @property
    def is_identity(self):
        return not self.tiles


def identity_cell(z):
    return TwoCell(z, z, ())


def sphere_words(P, gen):
    sp = P.extension[gen]
    return sp.src.word, sp.tgt.word


def tile_source(P, t):
    s, _ = sphere_words(P, t.gen)
    return reduce_word(t.l + s + t.r)


def tile_target(P, t):
    _, d = sphere_words(P, t.gen)
    return reduce_word(t.l + d + t.r)


def _start_of(P, t):
    if t.l:
        return P.lsrc(t.l[0])
    return P.extension[t.gen].src.start


def _end_of(P, t):
    if t.r:
        return P.ltgt(t.r[-1])
    return P.extension[t.gen].src.end


def tile_cell(P, l, gen, r):
    """The single-tile cell ``l * gen * r`` (whiskers are reduced first)."""
    t = Tile(reduce_word(tuple(l)), gen, reduce_word(tuple(r)))
    s0, t0 = _start_of(P, t), _end_of(P, t)
    if t.l and P.ltgt(t.l[-1]) != P.extension[gen].src.start:
        raise ChainError("left whisker does not end at the sphere's start")
    if t.r and P.lsrc(t.r[0]) != P.extension[gen].src.end:
        raise ChainError("right whisker does not start at the sphere's end")
    return TwoCell(ZigZag(s0, t0, tile_source(P, t)), ZigZag(s0, t0, tile_target(P, t)), (t,))


def _swap(P, t1, t2):
    """Move ``t2`` in front of ``t1`` keeping the left whisker of ``t2``."""
    s1, _ = sphere_words(P, t1.gen)
    s2, d2 = sphere_words(P, t2.gen)
    m = reduce_word(inverse_word(s2) + inverse_word(t2.l) + t1.l)
    return Tile(t2.l, t2.gen, reduce_word(m + s1 + t1.r)), Tile(reduce_word(t2.l + d2 + m), t1.gen, t1.r)


def _unswap(P, t1, t2):
    """Move ``t2`` in front of ``t1`` keeping the right whisker of ``t2``; inverse of ``_swap``."""
    s2, d2 = sphere_words(P, t2.gen)
    m = reduce_word(t1.r + inverse_word(t2.r) + inverse_word(s2))
    s1, _ = sphere_words(P, t1.gen)
    return Tile(reduce_word(t1.l + s1 + m), t2.gen, t2.r), Tile(t1.l, t1.gen, reduce_word(m + d2 + t2.r))


class Normalizer:
    """Canonical representatives of tile sequences up to exchange.

    Two sequences denote the same cell when one is reached from the other by
    exchanges of adjacent tiles.  The exchange moves generate an action of the
    braid group whose orbits may be infinite, so the search only visits tiles
    whose whiskers and targets are no longer than ``reach`` or than the largest
    tile of the starting sequence, whichever is bigger.  The representative is
    the least visited sequence: shortest total whisker length first, then the
    positions where the tiles act, then the tiles themselves.
    """

    def __init__(self, P, reach):
        self.P = P
        self.reach = reach
        self.cache = {}
        self._moves = {}
        self._sizes = {}
        self._tkeys = {}

    def _tile_size(self, t):
        n = self._sizes.get(t)
        if n is None:
            n = self._sizes[t] = max(len(t.l), len(t.r), len(tile_target(self.P, t)))
        return n

    def _tile_key(self, t):
        k = self._tkeys.get(t)
        if k is None:
            s, _ = sphere_words(self.P, t.gen)
            k = self._tkeys[t] = (len(t.l) + len(t.r), reduce_tagged(t.l, s, t.r)[1])
        return k

    def _key(self, tiles):
        ks = [self._tile_key(t) for t in tiles]
        return (sum(k[0] for k in ks), tuple(k[1] for k in ks), tiles)

    def _size(self, tiles):
        return max((self._tile_size(t) for t in tiles), default=0)

    def _exchanges(self, t1, t2):
        pair = (t1, t2)
        out = self._moves.get(pair)
        if out is None:
            out = self._moves[pair] = tuple(move(self.P, t1, t2) for move in (_swap, _unswap))
        return out

    def orbit(self, tiles):
        """All sequences reachable from ``tiles`` by exchanges within reach."""
        tiles = tuple(tiles)
        R = max(self.reach, self._size(tiles))
        size = self._tile_size
        seen = {tiles}
        todo = [tiles]
        while todo:
            cur = todo.pop()
            for i in range(len(cur) - 1):
                for a, b in self._exchanges(cur[i], cur[i + 1]):
                    if size(a) > R or size(b) > R:
                        continue
                    nxt = cur[:i] + (a, b) + cur[i + 2:]
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
        return seen

    def __call__(self, tiles):
        tiles = tuple(tiles)
        if len(tiles) < 2:
            return tiles
        hit = self.cache.get(tiles)
        if hit is not None:
            return hit
        seen = self.orbit(tiles)
        best = min(seen, key=self._key)
        for ts in seen:
            self.cache[ts] = best
        return best


_NORMALIZERS = {}


def default_reach(P, extra=2):
    size = max((len(sp.src.word) + len(sp.tgt.word) for sp in P.extension), default=0)
    return size + extra


def normalizer(P, reach=None):
    if reach is None:
        reach = default_reach(P)
    key = (id(P), reach)
    nz = _NORMALIZERS.get(key)
    if nz is None or nz.P is not P:
        nz = _NORMALIZERS[key] = Normalizer(P, reach)
    return nz


def normalize_tiles(P, tiles, disabled=False, reach=None):
    if disabled:
        return tuple(tiles)
    return normalizer(P, reach)(tiles)


def make_cell(P, src, tiles, normalize=True):
    """Check that ``tiles`` chain from ``src`` and return the (normalized) cell."""
    cur = src.word
    start, end = src.start, src.end
    for t in tiles:
        if tile_source(P, t) != cur:
            raise ChainError("tile source does not match the current boundary")
        if (t.l or t.r or cur) and (_start_of(P, t) != start or _end_of(P, t) != end):
            raise ChainError("tile endpoints do not match")
        cur = tile_target(P, t)
    tiles = normalize_tiles(P, tiles) if normalize else tuple(tiles)
    return TwoCell(src, ZigZag(start, end, cur), tiles)


def normalize_cell(P, cell):
    return TwoCell(cell.src, cell.tgt, normalize_tiles(P, cell.tiles))


def boundaries(P, cell):
    """The chain of 1-cells ``s1, ..., t1`` traversed by the tile sequence."""
    out = [cell.src.word]
    for t in cell.tiles:
        out.append(tile_target(P, t))
    return out


def vcomp(P, a, b, normalize=True):
    if a.tgt != b.src:
        raise ChainError("vertical composition needs t1(a) = s1(b)")
    if not a.tiles:
        return b
    if not b.tiles:
        return a
    tiles = a.tiles + b.tiles
    return TwoCell(a.src, b.tgt, normalize_tiles(P, tiles, disabled=not normalize))


def hcomp(P, a, b, normalize=True):
    """Horizontal composite, scheduling the left factor's tiles first."""
    if a.src.end != b.src.start:
        raise ChainError("horizontal composition needs t0(a) = s0(b)")
    bs, at = b.src.word, a.tgt.word
    tiles = tuple(Tile(t.l, t.gen, reduce_word(t.r + bs)) for t in a.tiles)
    tiles += tuple(Tile(reduce_word(at + t.l), t.gen, t.r) for t in b.tiles)
    src = ZigZag(a.src.start, b.src.end, reduce_word(a.src.word + bs))
    tgt = ZigZag(a.src.start, b.src.end, reduce_word(at + b.tgt.word))
    return TwoCell(src, tgt, normalize_tiles(P, tiles, disabled=not normalize))


def whisker(P, left, cell, right):
    """``left * cell * right`` for 1-cells ``left`` and ``right`` given as zig-zags."""
    if left is not None:
        cell = hcomp(P, identity_cell(left), cell)
    if right is not None:
        cell = hcomp(P, cell, identity_cell(right))
    return cell
