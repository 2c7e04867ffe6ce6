"""Walk through the kite: laws, Church-Rosser, Newman and a paving.

Run with ``python3 demos/kite_tour.py``. Takes about half a minute.
"""

import json
from importlib.resources import files

from hka.algebra import run_all
from hka.coherence import (
    canonical_pair,
    confluence_filler,
    pave_zigzag,
    verify_coherent_cr,
    verify_coherent_newman,
)
from hka.pathalgebra import Bounds, PathModel
from hka.polygraph import Polygraph, zigzag_reduce


def main():
    P = Polygraph.from_spec(str(files("hka") / "fixtures" / "kite.json"))
    print("objects:", ", ".join(P.objects))
    m = PathModel(P, Bounds(6, 4))
    print(f"bounded model has {len(m.zigzags)} zig-zags")

    # A few law suites on sampled triples.
    for rep in run_all(m, budget=50, seed=7)[:5]:
        print(f"  {rep.law:<14} {'pass' if rep.passed else 'FAIL'} ({rep.samples} samples)")

    phi, psi = canonical_pair(m)
    A = confluence_filler(m)
    cr = verify_coherent_cr(m, A, phi, psi)
    print("coherent Church-Rosser:", cr.status)
    broken = verify_coherent_cr(m, A, phi, psi, mutation="unwhiskered")
    print("without whiskers:", broken.status, "missing",
          ", ".join(P.fmt_zigzag(c.src) for c in broken.deficit[:3]), "...")

    nw = verify_coherent_newman(m, m.add(m.unit(1), m.gamma()), phi, psi)
    print("coherent Newman:", nw.status)

    z = zigzag_reduce(P, "h- f- g k")
    cert = pave_zigzag(P, z)
    print("paving of h- f- g k:", [t["gen"] for t in json.loads(cert.to_json(P))["tiles"]],
          "verifies" if not cert.verify(P) else "BROKEN")


if __name__ == "__main__":
    main()
