"""The full relation algebra on a finite set, relations packed into integers.

A relation ``R`` on ``{0, ..., k-1}`` is an int whose bit ``i*k + j`` is set
when ``(i, j)`` is in ``R``; row ``i`` is therefore ``(R >> i*k) & (2**k - 1)``.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from .errors import OracleMismatch


class RelationAlgebra:
    """Boolean modal Kleene algebra with converse of all relations on ``k`` points."""

    n = 1
    boolean_dims = (0,)
    conv_dims = {0: None}
    name = "rel"

    def __init__(self, k, mutation=None):
        if not 1 <= k <= 8:
            raise ValueError("carrier size must be between 1 and 8 for the packed representation")
        self.k = k
        self.mutation = mutation
        self.row = (1 << k) - 1
        self.full = (1 << (k * k)) - 1
        self.ident = sum(1 << (i * k + i) for i in range(k))

    # -- conversions -------------------------------------------------------

    def from_pairs(self, pairs):
        r = 0
        for i, j in pairs:
            if not (0 <= i < self.k and 0 <= j < self.k):
                raise ValueError(f"pair {(i, j)} outside carrier of size {self.k}")
            r |= 1 << (i * self.k + j)
        return r

    def pairs(self, r):
        k = self.k
        return sorted((b // k, b % k) for b in range(k * k) if r >> b & 1)

    def rows(self, r):
        k, m = self.k, self.row
        return [(r >> (i * k)) & m for i in range(k)]

    def from_rows(self, rows):
        k = self.k
        return sum(row << (i * k) for i, row in enumerate(rows))

    def subid(self, points):
        return sum(1 << (i * self.k + i) for i in range(self.k) if points >> i & 1)

    def points(self, p):
        return sum(1 << i for i in range(self.k) if p >> (i * self.k + i) & 1)

    def to_matrix(self, r):
        k = self.k
        return np.array([[bool(r >> (i * k + j) & 1) for j in range(k)] for i in range(k)], dtype=bool)

    def from_matrix(self, a):
        k = self.k
        return sum(1 << (i * k + j) for i in range(k) for j in range(k) if a[i, j])

    def fmt(self, r):
        return "{" + ", ".join(f"({i},{j})" for i, j in self.pairs(r)) + "}"

    # -- operations ----------------------------------------------------------

    def zero(self):
        return 0

    def add(self, x, y):
        return x | y

    def leq(self, x, y):
        return x & ~y == 0

    def eq(self, x, y):
        return x == y

    def unit(self, i=0):
        self._dim(i)
        return self.ident

    def _dim(self, i):
        if i != 0:
            raise IndexError(f"dimension {i} out of range for a model with 1 multiplication")

    def compose(self, x, y):
        k = self.k
        ry = self.rows(y)
        out = 0
        for i, row in enumerate(self.rows(x)):
            acc = 0
            j = 0
            while row:
                if row & 1:
                    acc |= ry[j]
                row >>= 1
                j += 1
            out |= acc << (i * k)
        return out

    def mul(self, i, x, y):
        self._dim(i)
        if self.mutation == "mul-is-union":
            return x | y
        return self.compose(x, y)

    def dom(self, i, x):
        self._dim(i)
        if self.mutation == "dom-is-one":
            return self.ident
        return self.subid(sum(1 << a for a, row in enumerate(self.rows(x)) if row))

    def cod(self, i, x):
        self._dim(i)
        pts = 0
        for row in self.rows(x):
            pts |= row
        return self.subid(pts)

    def adom(self, i, x):
        if self.mutation == "wrong-antidomain":
            return self.ident & ~self.dom(i, x) & ~1
        return self.ident & ~self.dom(i, x)

    def acod(self, i, x):
        return self.ident & ~self.cod(i, x)

    def star(self, i, x):
        self._dim(i)
        s = rel_star(self, x)
        if self.mutation == "star-no-unit":
            return self.compose(x, s)
        return s

    def conv(self, j, x):
        self._dim(j)
        k = self.k
        out = 0
        for a, b in self.pairs(x):
            out |= 1 << (b * k + a)
        return out

    def clipped(self, x):
        return False

    # -- enumeration and sampling ------------------------------------------

    def elements(self):
        if self.k * self.k <= 12:
            return list(range(self.full + 1))
        return None

    def dim_elements(self, i):
        self._dim(i)
        return [self.subid(p) for p in range(1 << self.k)]

    def sample(self, rng: random.Random):
        density = rng.choice((0.1, 0.2, 0.3, 0.5))
        r = 0
        for b in range(self.k * self.k):
            if rng.random() < density:
                r |= 1 << b
        return r

    def sample_dim(self, rng: random.Random, i):
        self._dim(i)
        return self.subid(rng.getrandbits(self.k))

    def dia_points(self, x, pts):
        """Forward diamond on point sets: states with an ``x``-successor in ``pts``."""
        return sum(1 << a for a, row in enumerate(self.rows(x)) if row & pts)


# ---------------------------------------------------------------------------
# closure, modalities, termination


def rel_star(alg, r):
    """Reflexive-transitive closure as the union of powers, iterated to a fixpoint."""
    acc = alg.ident
    power = alg.ident
    while True:
        power = alg.compose(power, r)
        nxt = acc | power
        if nxt == acc:
            return acc
        acc = nxt


def rel_star_warshall(alg, r):
    """Independent closure oracle on a boolean matrix."""
    a = alg.to_matrix(r) | np.eye(alg.k, dtype=bool)
    for m in range(alg.k):
        a = a | (a[:, [m]] & a[[m], :])
    return alg.from_matrix(a)


def rel_modalities(alg, r):
    return alg.dom(0, r), alg.cod(0, r), alg.adom(0, r), alg.acod(0, r)


def _has_cycle(alg, r):
    colour = [0] * alg.k
    rows = alg.rows(r)

    def visit(v):
        colour[v] = 1
        for w in range(alg.k):
            if rows[v] >> w & 1:
                if colour[w] == 1 or (colour[w] == 0 and visit(w)):
                    return True
        colour[v] = 2
        return False
    return any(colour[v] == 0 and visit(v) for v in range(alg.k))


def rel_noetherian(alg, r):
    """Emptiness of the greatest ``p`` with ``p <= <r>p``, cross-checked by cycle search."""
    pts = alg.row
    while True:
        nxt = pts & alg.dia_points(r, pts)
        if nxt == pts:
            break
        pts = nxt
    result = pts == 0
    if result == _has_cycle(alg, r):
        raise OracleMismatch("fixpoint Noethericity disagrees with cycle detection")
    return result


def verify_cr_equivalence(alg, x, y):
    """``x* y* <= y* x*`` and ``(x+y)* <= y* x*``; the two must coincide."""
    sx, sy = rel_star(alg, x), rel_star(alg, y)
    yx = alg.compose(sy, sx)
    semi = alg.leq(alg.compose(sx, sy), yx)
    cr = alg.leq(rel_star(alg, x | y), yx)
    if semi != cr:
        raise OracleMismatch(f"Church-Rosser equivalence broken on x={alg.fmt(x)}, y={alg.fmt(y)}")
    return semi, cr


def verify_newman(alg, x, y):
    """Local versus global modal commutation, compared when ``x + y`` is Noetherian."""
    sx, sy = rel_star(alg, x), rel_star(alg, y)
    applicable = rel_noetherian(alg, x | y)
    local = glob = True
    for p in range(1 << alg.k):
        rhs = alg.dia_points(sy, alg.dia_points(sx, p))
        if alg.dia_points(x, alg.dia_points(y, p)) & ~rhs:
            local = False
        if alg.dia_points(sx, alg.dia_points(sy, p)) & ~rhs:
            glob = False
    if applicable and local != glob:
        raise OracleMismatch(f"Newman equivalence broken on x={alg.fmt(x)}, y={alg.fmt(y)}")
    return local, glob, applicable


# ---------------------------------------------------------------------------
# exhaustive sweeps with lookup tables


class _Tables:
    def __init__(self, alg):
        k = alg.k
        size = alg.full + 1
        self.alg = alg
        self.rows = [alg.rows(r) for r in range(size)]
        # image[y][m]: union of the rows of y selected by the point set m
        self.image = []
        for y in range(size):
            ry = self.rows[y]
            self.image.append([_or_rows(ry, m) for m in range(1 << k)])
        self.star = [rel_star(alg, r) for r in range(size)]
        self.dia = [[sum(1 << a for a, row in enumerate(self.rows[r]) if row & p) for p in range(1 << k)]
                    for r in range(size)]

    def compose(self, x, y):
        img = self.image[y]
        k = self.alg.k
        out = 0
        for i, row in enumerate(self.rows[x]):
            out |= img[row] << (i * k)
        return out


def _or_rows(rows, m):
    acc = 0
    j = 0
    while m:
        if m & 1:
            acc |= rows[j]
        m >>= 1
        j += 1
    return acc


@lru_cache(maxsize=4)
def _tables(k):
    return _Tables(RelationAlgebra(k))


def cr_sweep(k=3):
    """All pairs on ``k`` points; returns (pairs checked, mismatches)."""
    t = _tables(k)
    size = t.alg.full + 1
    mismatches = []
    for x in range(size):
        sx = t.star[x]
        for y in range(size):
            sy = t.star[y]
            yx = t.compose(sy, sx)
            semi = t.compose(sx, sy) & ~yx == 0
            cr = t.star[x | y] & ~yx == 0
            if semi != cr:
                mismatches.append((x, y))
    return size * size, mismatches


def newman_sweep(k=3):
    """All pairs with ``x + y`` Noetherian; returns (applicable pairs, mismatches)."""
    t = _tables(k)
    alg = t.alg
    size = alg.full + 1
    noeth = [_gfp_empty(t, r) for r in range(size)]
    np_ = 1 << k
    checked, mismatches = 0, []
    for x in range(size):
        dx, dsx = t.dia[x], t.dia[t.star[x]]
        for y in range(size):
            if not noeth[x | y]:
                continue
            checked += 1
            dy, dsy = t.dia[y], t.dia[t.star[y]]
            local = glob = True
            for p in range(np_):
                rhs = dsy[dsx[p]]
                if dx[dy[p]] & ~rhs:
                    local = False
                if dsx[dsy[p]] & ~rhs:
                    glob = False
            if local != glob:
                mismatches.append((x, y))
    return checked, mismatches


def _gfp_empty(t, r):
    pts = t.alg.row
    while True:
        nxt = pts & t.dia[r][pts]
        if nxt == pts:
            return pts == 0
        pts = nxt
