"""Acceptance criteria 1-10, one test each.

Every test records a PASS/FAIL line which is printed in the pytest terminal
summary (and directly when this file is run as a script).
"""

import os
import subprocess
import sys
import time

import pytest

from conftest import fixture_path, load
from hka.algebra import (
    check_antidomain_axioms,
    check_domain_axioms,
    check_interchange,
    check_star_axioms,
    run_all,
)
from hka.cells import make_cell
from hka.coherence import (
    canonical_pair,
    confluence_filler,
    cr_inductive_sequence,
    cr_oracle_agreement,
    generate_fillers,
    pave_zigzag,
    verify_coherent_cr,
    verify_coherent_newman,
    whisker_completion,
)
from hka.errors import HypothesisFailed
from hka.pathalgebra import Bounds, PathModel
from hka.polygraph import critical_branchings, critical_branchings_bruteforce, is_terminating
from hka.relations import RelationAlgebra, cr_sweep, newman_sweep

RESULTS = {}
DEFAULT = Bounds(6, 4)


def record(n, ok, detail):
    RESULTS[n] = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}"
    print(RESULTS[n])
    assert ok, detail


@pytest.fixture(scope="module")
def kite():
    return load("kite")


@pytest.fixture(scope="module")
def kite_model(kite):
    return PathModel(kite, DEFAULT)


def test_criterion_01_relation_laws():
    t = time.time()
    small = run_all(RelationAlgebra(2), budget=1000, seed=1)
    large = run_all(RelationAlgebra(5), budget=1000, seed=1)
    elapsed = time.time() - t
    ok = (all(r.passed and r.mode == "exhaustive" for r in small)
          and all(r.passed for r in large)
          and all(r.samples >= 1000 for r in large)
          and elapsed < 30)
    record(1, ok, f"{len(small)} exhaustive suites on 2 points, {len(large)} sampled suites on 5 points, "
                  f"{elapsed:.1f}s")


def test_criterion_02_church_rosser_sweep():
    t = time.time()
    checked, bad = cr_sweep(3)
    elapsed = time.time() - t
    record(2, checked == 512 * 512 and not bad and elapsed < 300,
           f"{checked} pairs, {len(bad)} mismatches, {elapsed:.1f}s")


def test_criterion_03_newman_sweep():
    checked, bad = newman_sweep(3)
    record(3, checked > 0 and not bad, f"{checked} Noetherian pairs, {len(bad)} mismatches")


def test_criterion_04_model_laws_and_membership(kite, kite_model):
    reports = run_all(kite_model, budget=200, seed=4)
    names = {r.law for r in reports}
    clauses_seen = all(r.samples >= 200 for r in reports if r.mode == "sampled")
    laws_ok = all(r.passed for r in reports) and {"interchange", "globularity", "star[0]", "star[1]"} <= names
    membership = True
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
            membership &= m.star(1, G).cells == found
    failed = [r.law for r in reports if not r.passed]
    record(4, laws_ok and clauses_seen and membership,
           f"{len(reports)} suites at L=6 T=4 (failed: {failed or 'none'}), "
           f"Gamma star membership {'agrees' if membership else 'disagrees'} for L<=3 T<=2")


def test_criterion_05_coherent_church_rosser(kite_model):
    m = kite_model
    phi, psi = canonical_pair(m)
    A = confluence_filler(m)
    rep = verify_coherent_cr(m, A, phi, psi)
    _, hat_star = whisker_completion(m, A, phi, psi)
    seq = cr_inductive_sequence(m, A, phi, psi, 4, hat_star=hat_star)
    seq_ok = all(ch["codomain"] == "ok" and ch["domain"] == "ok" and ch["below completion"] == "ok"
                 for _, ch in seq)
    mutant = verify_coherent_cr(m, A, phi, psi, mutation="unwhiskered")
    record(5, rep.holds and seq_ok and not mutant.holds,
           f"conclusion {rep.status}, inductive sequence k<=4 {'ok' if seq_ok else 'broken'}, "
           f"unwhiskered mutant misses {len(mutant.deficit)} zig-zag(s)")


def test_criterion_06_coherent_newman(kite_model):
    m = kite_model
    phi, psi = canonical_pair(m)
    rep = verify_coherent_newman(m, m.add(m.unit(1), m.gamma()), phi, psi)
    loop = PathModel(load("loop"), DEFAULT)
    lphi, lpsi = canonical_pair(loop)
    try:
        verify_coherent_newman(loop, loop.add(loop.unit(1), loop.gamma()), lphi, lpsi)
        loop_text, loop_ok = "loop fixture confirmed (wrong)", False
    except HypothesisFailed as exc:
        loop_text, loop_ok = f"loop fixture: HypothesisFailed({exc.hypothesis})", True
    ok = rep.status == "holds" and rep.extra["r_is_unit"] and loop_ok
    record(6, ok, f"KITE {rep.status} with r = 1_0: {rep.extra['r_is_unit']}; {loop_text}")


def test_criterion_07_oracle_agreement(kite):
    checked, bad = cr_oracle_agreement(kite, max_len=5, bounds=DEFAULT)
    certified = all(not pave_zigzag(kite, z).verify(kite) for z in kite.zigzags(5))
    record(7, checked > 0 and not bad and certified,
           f"{checked} zig-zags of length <= 5, {len(bad)} disagreements, all certificates verify: {certified}")


def test_criterion_08_string_rewriting():
    commute = load("srs_commute")
    term = is_terminating(commute)
    crit = critical_branchings(commute)
    gen = generate_fillers(commute, "critical")
    overlap = load("srs_overlap")
    fast, brute = critical_branchings(overlap), critical_branchings_bruteforce(overlap)
    ok = term == "yes" and crit == [] and gen == [] and fast == brute and len(fast) > 0
    record(8, ok, f"ba=>ab: terminating {term}, {len(crit)} critical, {len(gen)} fillers; "
                  f"aba=>c, ab=>d: {len(fast)} critical, brute force {'matches' if fast == brute else 'differs'}")


def test_criterion_09_determinism():
    outs = []
    for hashseed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        res = subprocess.run([sys.executable, "-m", "hka", "analyze", fixture_path("kite"), "--format", "json"],
                             capture_output=True, env=env, check=False)
        outs.append((res.returncode, res.stdout))
    same = outs[0] == outs[1] and outs[0][0] == 0
    record(9, same, f"two analyze runs (different hash seeds) {'byte-identical' if same else 'differ'}, "
                    f"{len(outs[0][1])} bytes")


def test_criterion_10_mutation_sensitivity(kite):
    detected = {}
    for name, suite in (("drop-interchange", lambda m: check_interchange(m, 500, 0)),
                        ("wrong-antidomain", lambda m: check_antidomain_axioms(m, 0, 500, 0)),
                        ("star-no-unit", lambda m: check_star_axioms(m, 1, 500, 0)),
                        ("cod-dom-swap", lambda m: check_domain_axioms(m, 1, 500, 0))):
        detected[name] = not suite(PathModel(kite, DEFAULT, name)).passed
    m = PathModel(kite, DEFAULT)
    phi, psi = canonical_pair(m)
    detected["unwhiskered"] = not verify_coherent_cr(m, confluence_filler(m), phi, psi,
                                                     mutation="unwhiskered").holds
    missed = [k for k, v in detected.items() if not v]
    record(10, not missed, f"{sum(detected.values())}/5 mutants detected (missed: {missed or 'none'})")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
