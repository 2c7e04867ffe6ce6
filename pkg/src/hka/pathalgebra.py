"""The bounded power-set model K(P, Gamma) over a 1-polygraph with a cellular extension.

Elements are finite sets of 2-cells.  The carrier is cut to the universe of
cells whose source and target zig-zags have length at most ``L`` and that
use at most ``T`` tiles; every operation that has to discard a result lying
outside this universe marks its output as ``clipped``.
"""

from __future__ import annotations

import random
from collections import defaultdict
from typing import NamedTuple

from .cells import (Normalizer, TwoCell, default_reach, hcomp, identity_cell, make_cell,
                    normalize_tiles, tile_cell, vcomp)
from .errors import DimensionError, NotInvertible, SphereError
from .polygraph import Polygraph, ZigZag


WIDE_EXTRA = 6


class Bounds(NamedTuple):
    L: int = 6
    T: int = 4


class CellSet:
    """A finite set of 2-cells with a sticky truncation flag."""

    __slots__ = ("cells", "clipped")

    def __init__(self, cells=(), clipped=False):
        self.cells = frozenset(cells)
        self.clipped = bool(clipped)

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell):
        return cell in self.cells

    def __eq__(self, other):
        return isinstance(other, CellSet) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __le__(self, other):
        return self.cells <= other.cells

    def __or__(self, other):
        return CellSet(self.cells | other.cells, self.clipped or other.clipped)

    def __and__(self, other):
        return CellSet(self.cells & other.cells, self.clipped or other.clipped)

    def __sub__(self, other):
        return CellSet(self.cells - other.cells, self.clipped or other.clipped)

    def __repr__(self):
        flag = ", clipped" if self.clipped else ""
        return f"CellSet({len(self.cells)} cells{flag})"

    def sorted(self):
        return sorted(self.cells)


def _unit_key(c):
    return c


class PathModel:
    """K(P, Gamma) as a 2-dimensional globular modal Kleene algebra with 0-converse.

    ``mutation`` switches on deliberately broken variants used to check that
    the law suites are able to notice a fault.
    """

    n = 2
    boolean_dims = (0, 1)
    conv_dims = {0: 1, 1: 1}
    name = "kpg"

    def __init__(self, P: Polygraph, bounds=Bounds(), mutation=None):
        if P.dim != 1:
            raise ValueError("K(P, Gamma) is built over a 1-polygraph")
        for sp in P.extension:
            if (sp.src.start, sp.src.end) != (sp.tgt.start, sp.tgt.end):
                raise SphereError(f"sphere {sp.name} has non-parallel boundaries")
        self.P = P
        self.bounds = Bounds(*bounds)
        self.mutation = mutation
        L = self.bounds.L
        self.zigzags = P.zigzags(L)
        self._units = (
            CellSet(identity_cell(ZigZag(o, o, ())) for o in range(len(P.objects))),
            CellSet(identity_cell(z) for z in self.zigzags),
        )
        self._pool = None
        self._forms = {}
        self._wide = Normalizer(P, default_reach(P, WIDE_EXTRA))

    # -- universe --------------------------------------------------------

    def fits(self, cell):
        L, T = self.bounds
        return len(cell.src.word) <= L and len(cell.tgt.word) <= L and len(cell.tiles) <= T

    def _collect(self, produced, clipped):
        keep = []
        for c in produced:
            if self.fits(c):
                keep.append(c)
            else:
                clipped = True
        return CellSet(keep, clipped)

    # -- semiring structure ---------------------------------------------

    def zero(self):
        return CellSet()

    def add(self, x, y):
        return x | y

    def _member(self, cell, y):
        if cell in y.cells:
            return True
        if len(cell.tiles) < 2 or not self._normalizing():
            return False
        forms = self._forms.get(cell)
        if forms is None:
            forms = frozenset(TwoCell(cell.src, cell.tgt, normalize_tiles(self.P, ts))
                              for ts in self._wide.orbit(cell.tiles))
            self._forms[cell] = forms
        return not forms.isdisjoint(y.cells)

    def leq(self, x, y):
        return all(self._member(c, y) for c in x.cells)

    def eq(self, x, y):
        return self.leq(x, y) and self.leq(y, x)

    def unit(self, i):
        return self._units[i]

    def _normalizing(self):
        return self.mutation != "drop-interchange"

    def mul(self, i, x, y):
        clipped = x.clipped or y.clipped
        out = []
        norm = self._normalizing()
        P = self.P
        if i == 0:
            by_start = defaultdict(list)
            for b in y:
                by_start[b.src.start].append(b)
            L = self.bounds.L
            T = self.bounds.T
            for a in x:
                for b in by_start.get(a.src.end, ()):
                    if len(a.tiles) + len(b.tiles) > T:
                        clipped = True
                        continue
                    c = hcomp(P, a, b, normalize=norm)
                    if len(c.src.word) > L or len(c.tgt.word) > L:
                        clipped = True
                        continue
                    out.append(c)
        elif i == 1:
            by_src = defaultdict(list)
            for b in y:
                by_src[b.src].append(b)
            T = self.bounds.T
            for a in x:
                for b in by_src.get(a.tgt, ()):
                    if len(a.tiles) + len(b.tiles) > T:
                        clipped = True
                        continue
                    out.append(vcomp(P, a, b, normalize=norm))
        else:
            raise IndexError(f"dimension {i} out of range")
        return CellSet(out, clipped)

    def whisker(self, left, x, right):
        """``left .0 x .0 right`` for 1-dimensional ``left`` and ``right``.

        Unlike two calls to ``mul`` this applies the bounds to the final
        cells only, so a whisker may cancel against the other side.
        """
        for w in (left, right):
            if any(c.tiles for c in w):
                raise DimensionError("whiskers must be 1-dimensional")
        lefts, rights = defaultdict(list), defaultdict(list)
        for c in left:
            lefts[c.src.end].append(c.src)
        for c in right:
            rights[c.src.start].append(c.src)
        out, clipped = [], left.clipped or x.clipped or right.clipped
        norm = self._normalizing()
        for a in x:
            for lz in lefts.get(a.src.start, ()):
                for rz in rights.get(a.src.end, ()):
                    c = hcomp(self.P, hcomp(self.P, identity_cell(lz), a, normalize=False),
                              identity_cell(rz), normalize=norm)
                    if self.fits(c):
                        out.append(c)
                    else:
                        clipped = True
        return CellSet(out, clipped)

    # -- (anti)domain -----------------------------------------------------

    def dom(self, i, x):
        if i == 0:
            return CellSet((identity_cell(ZigZag(c.src.start, c.src.start, ())) for c in x), x.clipped)
        if i == 1:
            if self.mutation == "cod-dom-swap":
                return CellSet((identity_cell(c.tgt) for c in x), x.clipped)
            return CellSet((identity_cell(c.src) for c in x), x.clipped)
        raise IndexError(i)

    def cod(self, i, x):
        if i == 0:
            return CellSet((identity_cell(ZigZag(c.src.end, c.src.end, ())) for c in x), x.clipped)
        if i == 1:
            if self.mutation == "cod-dom-swap":
                return CellSet((identity_cell(c.src) for c in x), x.clipped)
            return CellSet((identity_cell(c.tgt) for c in x), x.clipped)
        raise IndexError(i)

    def adom(self, i, x):
        d = self.dom(i, x)
        if self.mutation == "wrong-antidomain":
            return CellSet(self._units[i].cells - d.cells - {min(self._units[i].cells)}, x.clipped)
        return CellSet(self._units[i].cells - d.cells, x.clipped)

    def acod(self, i, x):
        return CellSet(self._units[i].cells - self.cod(i, x).cells, x.clipped)

    # -- star ---------------------------------------------------------------

    def star(self, i, x):
        """Least fixpoint of ``S -> 1_i + x S`` inside the bounded universe."""
        unit = self._units[i]
        if self.mutation == "star-no-unit":
            current = CellSet(x.cells, x.clipped)
            frontier = current
        else:
            current = unit
            frontier = unit
        clipped = x.clipped
        while frontier.cells:
            step = self.mul(i, x, frontier)
            clipped = clipped or step.clipped
            new = step.cells - current.cells
            current = CellSet(current.cells | new, clipped)
            frontier = CellSet(new)
        return CellSet(current.cells, clipped)

    # -- converse -----------------------------------------------------------

    def conv(self, j, x):
        out = []
        for c in x:
            if c.tiles:
                raise NotInvertible(f"cell with {len(c.tiles)} tile(s) has no {j}-converse")
            out.append(identity_cell(self.P.inverse(c.src)) if j == 0 else c)
        return CellSet(out, x.clipped)

    # -- distinguished elements --------------------------------------------

    def gamma(self):
        """The generating spheres as bare single-tile cells."""
        return CellSet(self._collect([tile_cell(self.P, (), g, ()) for g in range(len(self.P.extension))], False))

    def gamma_steps(self):
        """All tiles ``(l, gamma, r)`` with ``|l|, |r| <= L`` and both boundaries of length ``<= L``."""
        P, L = self.P, self.bounds.L
        if self.bounds.T < 1:
            return CellSet((), bool(P.extension))
        # Whiskers are bounded too: conjugating a tile by a loop that commutes
        # with its sphere keeps both boundaries short, so without this bound
        # there would be infinitely many tiles.
        by_end = defaultdict(list)
        by_start = defaultdict(list)
        for z in self.zigzags:
            by_end[z.end].append(z)
            by_start[z.start].append(z)
        out, clipped = [], False
        for g, sp in enumerate(P.extension):
            for l in by_end[sp.src.start]:
                for r in by_start[sp.src.end]:
                    c = tile_cell(P, l.word, g, r.word)
                    if len(c.src.word) <= L and len(c.tgt.word) <= L:
                        out.append(c)
                    else:
                        clipped = True
        return CellSet(out, clipped)

    def steps(self):
        """Identities on the single-step zig-zags ``f`` of the polygraph."""
        P = self.P
        return CellSet(identity_cell(P.make_zigzag((2 * g,))) for g in range(len(P.gens1)))

    def cell_of(self, zigzag):
        return CellSet([identity_cell(zigzag)])

    def ids(self, zigzags):
        return CellSet(identity_cell(z) for z in zigzags)

    # -- sampling -------------------------------------------------------------

    def _sample_pool(self):
        if self._pool is None:
            P = self.P
            short = [z for z in self.zigzags if len(z.word) <= 2]
            cells = [identity_cell(z) for z in short]
            tiles = []
            for g, sp in enumerate(P.extension):
                base = tile_cell(P, (), g, ())
                tiles.append(base)
                cells += [identity_cell(base.src), identity_cell(base.tgt)]
                for z in short:
                    if len(z.word) == 1:
                        for l, r in (((z.word), ()), ((), z.word)):
                            try:
                                tiles.append(tile_cell(P, l, g, r))
                            except Exception:
                                pass
            tiles = [t for t in tiles if self.fits(t)]
            pairs = [vcomp(P, a, b) for a in tiles for b in tiles if a.tgt == b.src]
            pool = sorted(set(cells)) + sorted(set(tiles)) + sorted(set(c for c in pairs if self.fits(c)))[:20]
            self._pool = pool
        return self._pool

    def sample(self, rng: random.Random):
        pool = self._sample_pool()
        k = rng.randint(0, min(6, len(pool)))
        return CellSet(rng.sample(pool, k))

    def sample_dim(self, rng: random.Random, i):
        units = sorted(self._units[i].cells)
        k = rng.randint(0, min(4 if i == 1 else len(units), len(units)))
        return CellSet(rng.sample(units, k))

    def elements(self):
        return None

    def clipped(self, x):
        return x.clipped

    # -- convenience ---------------------------------------------------------

    def dia_star(self, a, q):
        """``<a^{*1}>_1 q`` as the least fixpoint of ``X -> q + <a>_1 X``.

        The fixpoint runs over boundaries only, so the powers of ``a`` are
        never materialized and no tile bound applies to the chains.
        """
        by_tgt = defaultdict(set)
        for c in a:
            by_tgt[c.tgt].add(c.src)
        reached = {c.src for c in q}
        layer = set(reached)
        while layer:
            nxt = set()
            for z in layer:
                nxt |= by_tgt.get(z, set())
            layer = nxt - reached
            reached |= layer
        return CellSet((identity_cell(z) for z in reached), a.clipped or q.clipped)


def build_model(P, bounds=Bounds(), mutation=None):
    return PathModel(P, bounds, mutation)


def make_cellset(model, cells):
    return CellSet(cells)


def literal_cell(model, src_tokens, tiles, start=None):
    """Build a cell from a source zig-zag literal and ``(l, gen name, r)`` tile literals."""
    P = model.P
    src = P.parse_zigzag(src_tokens, start=start)
    names = {sp.name: i for i, sp in enumerate(P.extension)}
    raw = []
    from .cells import Tile
    from .polygraph import reduce_word
    for l, g, r in tiles:
        raw.append(Tile(reduce_word(tuple(P.letter(t) for t in l)), names[g], reduce_word(tuple(P.letter(t) for t in r))))
    return make_cell(P, src, raw)
