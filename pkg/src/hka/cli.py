"""Command-line front end.

Exit codes: 0 success, 1 parse or I/O error, 2 validation error, 3 law
failure, 4 internal mismatch, 5 missing filler, 6 clipped verdict under
``--fail-on-clipped``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .algebra import run_all
from .cells import boundaries
from .coherence import (
    PavingCertificate,
    check_polygraph_coherence,
    generate_fillers,
    pave_branching_newman,
    pave_zigzag,
)
from .errors import (
    ChainError,
    HKAError,
    MissingFiller,
    NotJoinable,
    NotTerminating,
    OracleMismatch,
    ParseError,
)
from .pathalgebra import Bounds, PathModel
from .polygraph import (
    Branching,
    Polygraph,
    critical_branchings,
    is_terminating,
    load_spec,
    local_branchings,
    validate,
)
from .relations import RelationAlgebra

OK, PARSE, INVALID, LAW, MISMATCH, MISSING, CLIPPED = range(7)

DEFAULT_SEED = 20240601
REL_MUTATIONS = ("mul-is-union", "dom-is-one", "wrong-antidomain", "star-no-unit")
KPG_MUTATIONS = ("drop-interchange", "wrong-antidomain", "star-no-unit", "cod-dom-swap")


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: str | None
    L: int = 6
    T: int = 4
    fuel: int = 10000
    budget: int = 500
    seed: int = DEFAULT_SEED
    fmt: str = "text"
    fail_on_clipped: bool = False

    def __post_init__(self):
        if min(self.L, self.T, self.fuel) <= 0 or self.budget < 0:
            raise ValueError("bounds must be positive")

    @property
    def bounds(self):
        return Bounds(self.L, self.T)


class Outcome:
    """Exit code plus the text that goes to standard output."""

    def __init__(self, code, payload, text=None):
        self.code = code
        self.payload = payload
        self.text = text

    def render(self, fmt):
        if fmt == "json" or self.text is None:
            return json.dumps(self.payload, indent=2, sort_keys=True)
        return self.text


def _load(path):
    return Polygraph.from_spec(load_spec(path))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(path):
    try:
        spec = load_spec(path)
    except ParseError as exc:
        return Outcome(PARSE, {"valid": False, "error": str(exc)}, f"parse error: {exc}")
    problems = validate(spec)
    payload = {"valid": not problems, "violations": problems}
    if problems:
        text = "\n".join([f"invalid: {len(problems)} violation(s)"] + [f"  - {p}" for p in problems])
        return Outcome(INVALID, payload, text)
    return Outcome(OK, payload, "valid")


def _rel_algebra(path, carrier, mutation):
    literals = {}
    if path is not None:
        data = load_spec(path)
        carrier = int(data.get("carrier", carrier))
    alg = RelationAlgebra(carrier, mutation)
    if path is not None:
        for name, pairs in sorted(data.get("relations", {}).items()):
            try:
                literals[name] = alg.fmt(alg.from_pairs(tuple(p) for p in pairs))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"relation {name}: {exc}") from exc
    return alg, literals


def cmd_laws(path, model="kpg", budget=500, seed=DEFAULT_SEED, bounds=Bounds(), mutation=None, carrier=3):
    if model == "rel":
        if mutation is not None and mutation not in REL_MUTATIONS:
            raise ParseError(f"unknown mutation {mutation!r} for the relation model")
        alg, literals = _rel_algebra(path, carrier, mutation)
        fmt = alg.fmt
        header = {"model": "rel", "carrier": alg.k, "relations": literals}
    elif model == "kpg":
        if mutation is not None and mutation not in KPG_MUTATIONS:
            raise ParseError(f"unknown mutation {mutation!r} for the path model")
        P = _load(path)
        if P.dim != 1:
            raise ParseError("the path model is built from a 1-polygraph")
        alg = PathModel(P, bounds, mutation)
        fmt = _cellset_formatter(P)
        header = {"model": "kpg", "bounds": {"L": bounds.L, "T": bounds.T}}
    else:
        raise ParseError(f"unknown model {model!r}")
    reports = run_all(alg, budget, seed) if budget > 0 else []
    header["mutation"] = mutation
    header["budget"] = budget
    header["seed"] = seed
    header["reports"] = [r.to_dict(fmt) for r in reports]
    failed = [r for r in reports if not r.passed]
    header["passed"] = not failed
    lines = []
    for r in reports:
        dims = ",".join(map(str, r.dims)) or "-"
        state = "ok" if r.passed else f"FAIL ({len(r.failures)})"
        extra = f", {r.undetermined} undetermined" if r.undetermined else ""
        lines.append(f"{r.law:<24} dims {dims:<4} {r.mode:<10} {r.samples:>7} checks  {state}{extra}")
        for f in r.failures[:3]:
            lines.append(f"    {f['clause']}: {', '.join(fmt(x) for x in f['inputs'])}")
    lines.append("all laws hold" if not failed else f"{len(failed)} suite(s) failed")
    return Outcome(LAW if failed else OK, header, "\n".join(lines))


def _cellset_formatter(P):
    def fmt_cell(c):
        tiles = " ; ".join(f"{' '.join(P.signed_tokens(t.l))} [{P.extension[t.gen].name}] "
                           f"{' '.join(P.signed_tokens(t.r))}".strip() for t in c.tiles)
        return f"{P.fmt_zigzag(c.src)} => {P.fmt_zigzag(c.tgt)}" + (f" via {tiles}" if tiles else "")

    def fmt(x):
        if hasattr(x, "cells"):
            body = ", ".join(sorted(fmt_cell(c) for c in x.cells))
            return "{" + body + "}" + (" (clipped)" if x.clipped else "")
        if isinstance(x, bool):
            return str(x)
        return repr(x)
    return fmt


def _verdict(status):
    if status in ("holds", "confirmed"):
        return "confirmed"
    if status == "holds within bounds":
        return "confirmed within bounds"
    return status


def cmd_analyze(path, bounds=Bounds(), fuel=10000, fail_on_clipped=False):
    P = _load(path)
    out = {"name": P.name, "dim": P.dim, "termination": is_terminating(P)}
    lines = [f"polygraph: {P.name or '(unnamed)'} (dim {P.dim})", f"termination: {out['termination']}"]
    clipped = False
    if P.dim == 2:
        crit = critical_branchings(P)
        out["critical_branchings"] = len(crit)
        lines.append(f"critical branchings: {len(crit)}")
        out["fillers"] = _filler_status(P, "critical", lines)
    else:
        out["local_branchings"] = sum(1 for b in local_branchings(P) if b.first != b.second)
        lines.append(f"local branchings: {out['local_branchings']}")
        summary = check_polygraph_coherence(P, bounds, fuel)
        out.update(summary)
        for kind, rec in summary["bridge"].items():
            lines.append(f"filler {kind}: polygraph {'yes' if rec['polygraph'] else 'no'}, algebra {rec['algebra']}")
            clipped |= rec["algebra"] in ("holds within bounds", "undetermined")
        cr, nm = summary["church_rosser"], summary["newman"]
        cr_text = _verdict(cr["conclusion"]) if cr["confirmed"] else "hypotheses unmet"
        nm_text = _verdict(nm["conclusion"]) if nm["confirmed"] else "hypotheses unmet"
        clipped |= "within bounds" in cr_text or "within bounds" in nm_text or cr["hypothesis"] == "undetermined"
        lines.append(f"CR: {cr_text}, Newman: {nm_text}")
        if not nm["confirmed"]:
            lines.append(f"Newman hypothesis: {nm['hypothesis']}")
        pav = summary["paving"]
        lines.append(f"paving: {pav['zigzags'] - pav['failures']}/{pav['zigzags']} zig-zags paved")
        if "r" in nm:
            out["newman"]["r"] = sorted(nm["r"])
    out["clipped"] = clipped
    code = OK
    if fail_on_clipped and clipped:
        code = CLIPPED
        out["verdict"] = "undetermined"
        lines.append("verdict: undetermined (clipped under the given bounds)")
    return Outcome(code, out, "\n".join(lines))


def _filler_status(P, mode, lines):
    try:
        fillers = generate_fillers(P, mode)
    except NotJoinable as exc:
        lines.append(f"fillers: {len(exc.branchings)} non-joinable branching(s)")
        return {"status": "not joinable", "branchings": [_fmt_branching(P, b) for b in exc.branchings]}
    except NotTerminating:
        lines.append("fillers: not generated (non-terminating)")
        return {"status": "not terminating"}
    lines.append(f"fillers: {len(fillers)} generated")
    return {"status": "generated", "spheres": fillers}


def _fmt_branching(P, b):
    if P.dim == 2:
        return {"source": P.fmt_string(b.source), "first": P.fmt_step(b.first), "second": P.fmt_step(b.second)}
    if isinstance(b.first, str):
        return {"source": b.source, "first": b.first, "second": b.second}
    return {"source": P.objects[b.source], "first": P.signed_tokens(b.first),
            "second": P.signed_tokens(b.second)}


def parse_subject(P, text, at=None):
    """``"f- g"`` is a zig-zag, ``"f h | g k"`` a branching of two forward paths."""
    if "|" in text:
        left, right = (part.split() for part in text.split("|", 1))
        f = tuple(P.letter(t) for t in left)
        g = tuple(P.letter(t) for t in right)
        if any(x & 1 for x in f + g):
            raise ParseError("branching sides must be forward paths")
        ends = {P.lsrc(w[0]) for w in (f, g) if w}
        if at is not None:
            ends.add(P.object_of(at))
        if len(ends) != 1:
            raise ParseError("branching sides must share their source (give --at for empty sides)")
        src = ends.pop()
        P.make_zigzag(f, src)
        P.make_zigzag(g, src)
        return Branching(src, f, g)
    tokens = text.split()
    if len(tokens) == 1 and tokens[0].startswith("1_"):
        at, tokens = tokens[0][2:], []
    return P.parse_zigzag(tokens, start=at)


def cmd_pave(path, subject, at=None, fuel=10000, out_path=None):
    P = _load(path)
    subj = parse_subject(P, subject, at)
    try:
        if isinstance(subj, Branching):
            cert = pave_branching_newman(P, subj, fuel)
        else:
            cert = pave_zigzag(P, subj, fuel)
    except MissingFiller as exc:
        b = _fmt_branching(P, exc.branching)
        text = f"missing filler for branching at {b['source']}: {' '.join(b['first'])} | {' '.join(b['second'])}"
        return Outcome(MISSING, {"missing_filler": b}, text)
    problems = cert.verify(P)
    if problems:
        raise OracleMismatch("certificate failed re-verification: " + "; ".join(problems))
    text = cert.to_json(P)
    if out_path is not None:
        Path(out_path).write_text(text + "\n")
    payload = cert.to_dict(P)
    return Outcome(OK, payload, text)


def _q(s):
    return json.dumps(str(s))


def dot_graph(P):
    lines = [f"digraph {_q(P.name or 'polygraph')} {{"]
    for o in P.objects:
        lines.append(f"  {_q(o)};")
    for name, s, t in P.gens1:
        lines.append(f"  {_q(P.objects[s])} -> {_q(P.objects[t])} [label={_q(name)}];")
    lines.append("}")
    return "\n".join(lines)


def dot_certificate(P, cert):
    cell = cert.cell
    layers = boundaries(P, cell)
    lines = ["digraph certificate {", "  rankdir=TB;", "  node [shape=box];"]
    for k, w in enumerate(layers):
        label = " ".join(P.signed_tokens(w)) or f"1_{P.objects[cell.src.start]}"
        lines.append(f"  L{k} [label={_q(label)}];")
    for k, t in enumerate(cell.tiles):
        label = " ".join(P.signed_tokens(t.l) + [f"[{P.extension[t.gen].name}]"] + P.signed_tokens(t.r))
        lines.append(f"  L{k} -> L{k + 1} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines)


def cmd_export_dot(path, what="graph", certificate=None):
    P = _load(path)
    if what == "graph":
        return Outcome(OK, {"dot": dot_graph(P)}, dot_graph(P))
    if certificate is None:
        raise ParseError("a certificate file is needed for this export")
    try:
        data = json.loads(Path(certificate).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read certificate {certificate}: {exc}") from exc
    cert = PavingCertificate.from_dict(P, data)
    text = dot_certificate(P, cert)
    return Outcome(OK, {"dot": text}, text)


# ---------------------------------------------------------------------------
# argument handling


def build_parser():
    p = argparse.ArgumentParser(prog="hka", description="Coherent confluence checks for polygraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--bounds-l", type=int, default=6, help="zig-zag length bound L")
        sp.add_argument("--bounds-t", type=int, default=4, help="tile count bound T")
        sp.add_argument("--fuel", type=int, default=10000)
        sp.add_argument("--budget", type=int, default=500, help="samples per law")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--format", choices=("json", "text", "dot"), default="text")
        sp.add_argument("--fail-on-clipped", action="store_true")

    sp = sub.add_parser("validate", help="check a polygraph spec")
    sp.add_argument("path")
    common(sp)
    sp = sub.add_parser("laws", help="run the algebraic law suites")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--model", choices=("rel", "kpg"), default="kpg")
    sp.add_argument("--carrier", type=int, default=3, help="carrier size for --model rel")
    sp.add_argument("--mutate", default=None, metavar="LAW", help="run a deliberately broken model")
    common(sp)
    sp = sub.add_parser("analyze", help="termination, branchings and coherence summary")
    sp.add_argument("path")
    common(sp)
    sp = sub.add_parser("pave", help="build a paving certificate")
    sp.add_argument("path")
    sp.add_argument("subject", help='zig-zag such as "f- g", or branching "f h | g k"')
    sp.add_argument("--at", default=None, help="start object for identity subjects")
    sp.add_argument("--out", default=None, help="write the certificate here")
    common(sp)
    sp = sub.add_parser("export-dot", help="DOT rendering of the graph or a certificate")
    sp.add_argument("path")
    sp.add_argument("--what", choices=("graph", "certificate"), default="graph")
    sp.add_argument("--certificate", default=None)
    common(sp)
    return p


def run(argv=None):
    """Parse ``argv`` and return ``(exit code, output text)``."""
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.path, args.bounds_l, args.bounds_t, args.fuel,
                        args.budget, args.seed, args.format, args.fail_on_clipped)
    except ValueError as exc:
        return PARSE, f"error: {exc}"
    fmt = "text" if cfg.fmt == "dot" and cfg.command != "export-dot" else cfg.fmt
    try:
        if cfg.command == "validate":
            res = cmd_validate(cfg.path)
        elif cfg.command == "laws":
            if args.model == "kpg" and cfg.path is None:
                raise ParseError("the path model needs a spec file")
            res = cmd_laws(cfg.path, args.model, cfg.budget, cfg.seed, cfg.bounds, args.mutate, args.carrier)
        elif cfg.command == "analyze":
            res = cmd_analyze(cfg.path, cfg.bounds, cfg.fuel, cfg.fail_on_clipped)
        elif cfg.command == "pave":
            res = cmd_pave(cfg.path, args.subject, args.at, cfg.fuel, args.out)
        else:
            res = cmd_export_dot(cfg.path, args.what, args.certificate)
            if fmt == "text":
                fmt = "dot"
    except OracleMismatch as exc:
        return MISMATCH, f"internal mismatch: {exc}"
    except MissingFiller as exc:
        return MISSING, f"missing filler: {exc.detail}"
    except (ParseError, ChainError, OSError) as exc:
        return PARSE, f"error: {exc}"
    except NotTerminating as exc:
        return INVALID, f"error: {exc}"
    except HKAError as exc:
        return INVALID, f"error: {type(exc).__name__}: {exc}"
    return res.code, res.render(fmt)


def main(argv=None):
    code, text = run(argv)
    stream = sys.stderr if code in (PARSE, MISMATCH) else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
