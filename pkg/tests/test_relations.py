"""Relation model checked against naive set-of-pairs computations."""

import itertools
import random

import pytest

from hka.algebra import box, dia, power
from hka.errors import OracleMismatch
from hka.relations import (
    RelationAlgebra,
    cr_sweep,
    newman_sweep,
    rel_modalities,
    rel_noetherian,
    rel_star,
    rel_star_warshall,
    verify_cr_equivalence,
    verify_newman,
)


def naive_compose(r, s):
    return {(a, c) for a, b in r for b2, c in s if b == b2}


def naive_star(r, k):
    acc = {(i, i) for i in range(k)}
    while True:
        nxt = acc | naive_compose(acc, r)
        if nxt == acc:
            return acc
        acc = nxt


def rel(alg, *pairs):
    return alg.from_pairs(pairs)


@pytest.fixture
def r3():
    return RelationAlgebra(3)


def test_pack_unpack_round_trip(r3):
    rng = random.Random(1)
    for _ in range(50):
        r = r3.sample(rng)
        assert r3.from_pairs(r3.pairs(r)) == r
        assert r3.from_matrix(r3.to_matrix(r)) == r
        assert r3.from_rows(r3.rows(r)) == r


def test_compose_matches_pairs(r3):
    rng = random.Random(2)
    for _ in range(200):
        x, y = r3.sample(rng), r3.sample(rng)
        assert set(r3.pairs(r3.compose(x, y))) == naive_compose(r3.pairs(x), r3.pairs(y))


def test_star_three_ways(r3):
    for r in range(r3.full + 1):
        expected = r3.from_pairs(naive_star(r3.pairs(r), 3))
        assert rel_star(r3, r) == expected == rel_star_warshall(r3, r)


def test_star_examples():
    r3 = RelationAlgebra(3)
    assert rel_star(r3, 0) == r3.ident
    x = rel(r3, (0, 1), (1, 2))
    assert r3.pairs(rel_star(r3, x)) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    r2 = RelationAlgebra(2)
    assert rel_star(r2, rel(r2, (0, 1), (1, 0))) == r2.full


def test_modalities_examples(r3):
    d, c, a, ac = rel_modalities(r3, 0)
    assert d == 0 and a == r3.ident and c == 0 and ac == r3.ident
    d, c, _, _ = rel_modalities(r3, rel(r3, (0, 1), (1, 2)))
    assert r3.pairs(d) == [(0, 0), (1, 1)]
    assert r3.pairs(c) == [(1, 1), (2, 2)]
    assert rel_modalities(r3, r3.ident)[:2] == (r3.ident, r3.ident)


def test_converse_is_transpose(r3):
    for r in range(0, r3.full + 1, 7):
        assert set(r3.pairs(r3.conv(0, r))) == {(b, a) for a, b in r3.pairs(r)}


def test_diamond_and_box_examples():
    r3 = RelationAlgebra(3)
    assert r3.pairs(dia(r3, "fwd", rel(r3, (0, 1)), 0, rel(r3, (1, 1)))) == [(0, 0)]
    assert dia(r3, "fwd", 0, 0, rel(r3, (1, 1))) == 0
    p = rel(r3, (2, 2))
    assert dia(r3, "fwd", r3.ident, 0, p) == p
    r2 = RelationAlgebra(2)
    assert r2.pairs(box(r2, "fwd", rel(r2, (0, 1)), 0, rel(r2, (1, 1)))) == [(0, 0), (1, 1)]
    assert r2.pairs(box(r2, "fwd", rel(r2, (0, 1)), 0, rel(r2, (0, 0)))) == [(1, 1)]
    assert box(r2, "fwd", 0, 0, 0) == r2.ident


def test_diamond_against_kripke_semantics(r3):
    for x in range(0, r3.full + 1, 5):
        for pts in range(8):
            p = r3.subid(pts)
            expected = {a for a, b in r3.pairs(x) if pts >> b & 1}
            got = r3.points(dia(r3, "fwd", x, 0, p))
            assert got == sum(1 << a for a in expected)
            back = {b for a, b in r3.pairs(x) if pts >> a & 1}
            assert r3.points(dia(r3, "bwd", x, 0, p)) == sum(1 << b for b in back)


def test_power_examples(r3):
    assert power(r3, rel(r3, (0, 1)), 0, 0) == r3.ident
    assert r3.pairs(power(r3, rel(r3, (0, 1), (1, 2)), 0, 2)) == [(0, 2)]
    assert power(r3, rel(r3, (0, 1)), 0, 2) == 0


def test_noetherian_examples(r3):
    assert rel_noetherian(r3, 0)
    assert not rel_noetherian(r3, rel(r3, (0, 0)))
    assert rel_noetherian(r3, rel(r3, (0, 1), (1, 2)))
    assert not rel_noetherian(r3, rel(r3, (0, 1), (1, 2), (2, 0)))


def test_cr_equivalence_examples(r3):
    assert verify_cr_equivalence(r3, rel(r3, (0, 1)), rel(r3, (0, 2))) == (True, True)
    assert verify_cr_equivalence(r3, rel(r3, (1, 0)), rel(r3, (0, 2))) == (False, False)
    assert verify_cr_equivalence(r3, 0, 0) == (True, True)


def test_newman_examples():
    r4 = RelationAlgebra(4)
    assert verify_newman(r4, 0, 0) == (True, True, True)
    local, glob, applicable = verify_newman(r4, rel(r4, (0, 1)), rel(r4, (0, 2), (1, 3), (2, 3)))
    assert applicable and local == glob
    assert verify_newman(r4, rel(r4, (0, 0)), 0)[2] is False


def test_noetherian_oracle_mismatch_is_raised(monkeypatch):
    import hka.relations as mod
    r2 = RelationAlgebra(2)
    monkeypatch.setattr(mod, "_has_cycle", lambda alg, r: True)
    with pytest.raises(OracleMismatch):
        rel_noetherian(r2, 0)


def test_small_sweeps_have_no_mismatch():
    checked, bad = cr_sweep(2)
    assert checked == 256 and bad == []
    checked, bad = newman_sweep(2)
    assert checked > 0 and bad == []


def test_newman_sweep_agrees_with_single_checks():
    r2 = RelationAlgebra(2)
    applicable = 0
    for x, y in itertools.product(range(16), repeat=2):
        local, glob, app = verify_newman(r2, x, y)
        applicable += app
    assert newman_sweep(2)[0] == applicable


def test_carrier_limits():
    with pytest.raises(ValueError):
        RelationAlgebra(0)
    with pytest.raises(ValueError):
        RelationAlgebra(2).from_pairs([(0, 2)])
