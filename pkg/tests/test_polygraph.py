import pytest

from conftest import fixture_path, load, spec
from hka.errors import BoundRequired, ChainError, DimensionError, ParseError
from hka.polygraph import (
    Polygraph,
    Step,
    critical_branchings,
    critical_branchings_bruteforce,
    inverse_word,
    is_terminating,
    load_spec,
    local_branchings,
    longest_distance,
    normalize,
    reduce_tagged,
    reduce_word,
    rewriting_steps,
    validate,
    zigzag_reduce,
)


def test_kite_is_valid(kite):
    assert validate(spec("kite")) == []
    assert list(kite.objects) == ["a", "b", "c", "d"]
    assert [g[0] for g in kite.gens1] == ["f", "g", "h", "k"]
    assert [sp.name for sp in kite.extension] == ["alpha", "alpha'"]


def test_dangling_target_is_one_violation():
    bad = {"objects": ["a"], "gens1": [{"name": "f", "src": "a", "tgt": "z"}]}
    problems = validate(bad)
    assert len(problems) == 1 and "unknown tgt" in problems[0]
    with pytest.raises(ParseError):
        Polygraph.from_spec(bad)


def test_empty_polygraph_is_valid():
    assert validate({"objects": [], "gens1": []}) == []
    assert len(load("empty").objects) == 0


def test_malformed_json_raises():
    with pytest.raises(ParseError):
        load_spec("{not json")
    with pytest.raises(ParseError):
        load_spec("/nonexistent/file.json")


@pytest.mark.parametrize("mutation, fragment", [
    ({"src_zigzag": ["f-", "g"], "tgt_zigzag": ["h"]}, "not parallel"),
    ({"src_zigzag": ["f", "k"], "tgt_zigzag": []}, "does not compose"),
    ({"src_zigzag": ["zz"], "tgt_zigzag": []}, "unknown generators"),
])
def test_bad_spheres(mutation, fragment):
    s = spec("kite")
    s["extension"] = [dict(name="bad", **mutation)]
    problems = validate(s)
    assert problems and fragment in problems[0]


def test_round_trip(kite):
    again = Polygraph.from_spec(kite.to_spec())
    assert again.objects == kite.objects
    assert again.gens1 == kite.gens1
    assert again.extension == kite.extension


def test_word_helpers():
    assert reduce_word((0, 1, 2)) == (2,)
    assert reduce_word((0, 2, 3, 1)) == ()
    assert inverse_word((0, 3)) == (2, 1)
    w, a, b = reduce_tagged((0, 2), (3, 4), (5,))
    assert w == (0,) and (a, b) == (1, 1)
    w, a, b = reduce_tagged((0,), (2, 4), (6,))
    assert w == (0, 2, 4, 6) and (a, b) == (1, 3)


def test_zigzag_reduce(kite):
    z = zigzag_reduce(kite, "f f-")
    assert z.word == () and z.start == z.end == kite.object_of("a")
    assert kite.fmt_zigzag(zigzag_reduce(kite, "f- g")) == "f- g"
    assert kite.fmt_zigzag(zigzag_reduce(kite, "f h h- f- g")) == "g"
    with pytest.raises(ChainError):
        zigzag_reduce(kite, "f k")
    with pytest.raises(ChainError):
        zigzag_reduce(kite, [])


def test_rewriting_steps_kite(kite):
    assert rewriting_steps(kite, "a") == ["f", "g"]
    assert rewriting_steps(kite, "d") == []
    with pytest.raises(DimensionError):
        rewriting_steps(kite, "nope")


def test_rewriting_steps_strings():
    P = load("srs_commute")
    steps = rewriting_steps(P, "bba")
    assert steps == [Step((1,), 0, ())]
    assert rewriting_steps(P, "aab") == []


def test_normalize(kite):
    res = normalize(kite, "a")
    assert res.normal_form == "d" and res.sequence == ["f", "h"] and not res.exhausted
    res = normalize(kite, "d")
    assert res.normal_form == "d" and res.sequence == []
    P = load("srs_commute")
    res = normalize(P, "bbaa", fuel=10)
    assert res.normal_form == "aabb" and len(res.sequence) == 4
    res = normalize(P, "bbaa", fuel=2)
    assert res.exhausted


def test_normalize_terminates_within_object_count():
    for name in ("kite", "two_step", "fork"):
        P = load(name)
        for o in P.objects:
            res = normalize(P, o, fuel=len(P.objects))
            assert not res.exhausted
            assert rewriting_steps(P, res.normal_form) == []


def test_local_branchings(kite):
    got = {(b.first, b.second) for b in local_branchings(kite)}
    assert got == {("f", "f"), ("f", "g"), ("g", "g"), ("h", "h"), ("k", "k")}
    P = load("srs_commute")
    with pytest.raises(BoundRequired):
        local_branchings(P)
    srcs = {P.fmt_string(b.source) for b in local_branchings(P, 3)}
    assert {"bba", "bab", "ba"} <= srcs


def test_critical_branchings_commute_is_empty():
    assert critical_branchings(load("srs_commute")) == []


def test_critical_branchings_overlap():
    P = load("srs_overlap")
    crit = critical_branchings(P)
    assert crit == critical_branchings_bruteforce(P)
    srcs = [P.fmt_string(b.source) for b in crit]
    assert "aba" in srcs
    inclusion = [b for b in crit if P.fmt_string(b.source) == "aba"][0]
    assert {P.gens2[inclusion.first.rule][0], P.gens2[inclusion.second.rule][0]} == {"r1", "r2"}


def test_critical_branchings_disjoint_alphabets():
    s = {"dim": 2, "objects": ["*"], "gens1": [{"name": n, "src": "*", "tgt": "*"} for n in "abcd"],
         "gens2": [{"name": "r", "lhs": "ab", "rhs": "a"}, {"name": "s", "lhs": "cd", "rhs": "c"}]}
    P = Polygraph.from_spec(s)
    assert critical_branchings(P) == [] == critical_branchings_bruteforce(P)


def test_critical_branchings_dimension_guard(kite):
    with pytest.raises(DimensionError):
        critical_branchings(kite)


def test_termination():
    assert is_terminating(load("kite")) == "yes"
    assert is_terminating(load("loop")) == "no"
    assert is_terminating(load("srs_commute")) == "yes"
    s = spec("srs_commute")
    s["gens2"].append({"name": "back", "lhs": "ab", "rhs": "ba"})
    del s["orders"]
    assert is_terminating(Polygraph.from_spec(s)) == "no"


def test_termination_unknown_without_order():
    s = spec("srs_commute")
    del s["orders"]
    s["gens2"] = [{"name": "grow", "lhs": "a", "rhs": "ab"}]
    assert is_terminating(Polygraph.from_spec(s), search_limit=50) == "unknown"


def test_longest_distance(kite):
    assert longest_distance(kite) == {0: 2, 1: 1, 2: 1, 3: 0}
    with pytest.raises(ValueError):
        longest_distance(load("loop"))


def test_zigzag_enumeration_is_reduced(kite):
    zs = kite.zigzags(3)
    assert len(zs) == len(set(zs))
    for z in zs:
        assert reduce_word(z.word) == z.word
        if z.word:
            assert kite.make_zigzag(z.word, z.start) == z


def test_fixture_path_exists():
    assert fixture_path("kite").endswith("kite.json")
