"""Fillers and coherent confluence, algebraically in K(P, Gamma) and by explicit paving.

Throughout, ``phi`` and ``psi`` are 1-dimensional elements (sets of identity
cells on zig-zags), the composition indices are fixed to ``(i, j) = (0, 1)``,
and for a 1-polygraph the canonical choice is ``psi = steps`` and
``phi = conv_0(steps)``.

Verdicts follow the truncation discipline of the model.  The right-hand side
of a filler inequality is exact when unclipped, and the left-hand side can
only grow when the bounds grow, so

* ``holds`` with an exact right-hand side is definitive,
* ``holds within bounds`` means every element of the truncated right-hand side is covered,
* ``fails`` is definitive only when the left-hand side is exact,
* otherwise the verdict is ``undetermined``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import algebra
from .cells import Tile, TwoCell, hcomp, identity_cell, make_cell, tile_cell, vcomp
from .errors import (FuelExhausted, HypothesisFailed, MissingFiller, NotAFiller,
                     NotJoinable, NotTerminating, OracleMismatch, TruncationWarning)
from .pathalgebra import Bounds, CellSet, PathModel
from .polygraph import (Branching, ZigZag, critical_branchings, inverse_word,
                        is_forward, is_terminating, local_branchings, normalize, reduce_word)

KINDS = ("local", "semi-left", "semi-right", "confluence", "church-rosser")


# ---------------------------------------------------------------------------
# algebraic fillers


@dataclass(frozen=True)
class FillerQuery:
    model: PathModel
    A: CellSet
    phi: CellSet
    psi: CellSet
    kind: str = "local"


@dataclass
class FillerReport:
    kind: str
    holds: bool
    lhs: CellSet
    rhs: CellSet
    clipped: bool
    deficit: list
    warnings: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def status(self):
        if self.holds:
            return "holds within bounds" if self.rhs.clipped else "holds"
        return "undetermined" if self.lhs.clipped else "fails"

    def to_dict(self, P=None):
        fmt = (lambda c: P.fmt_zigzag(c.src)) if P is not None else repr
        d = {"kind": self.kind, "holds": self.holds, "status": self.status,
             "clipped": self.clipped, "lhs_size": len(self.lhs), "rhs_size": len(self.rhs),
             "deficit": [fmt(c) for c in sorted(self.deficit)]}
        for k, v in sorted(self.extra.items()):
            d[k] = v
        return d


def canonical_pair(model):
    """``(phi, psi) = (conv_0(steps), steps)``."""
    psi = model.steps()
    return model.conv(0, psi), psi


def confluence_shape(model, phi, psi):
    """``psi^{*0} phi^{*0}``: forward-then-backward zig-zags."""
    return model.mul(0, model.star(0, psi), model.star(0, phi))


def _rhs(model, kind, phi, psi):
    m, s = model.mul, model.star
    if kind == "local":
        return m(0, phi, psi)
    if kind == "semi-left":
        return m(0, phi, s(0, psi))
    if kind == "semi-right":
        return m(0, s(0, phi), psi)
    if kind == "confluence":
        return m(0, s(0, phi), s(0, psi))
    if kind == "church-rosser":
        return s(0, model.add(phi, psi))
    raise ValueError(f"unknown filler kind {kind!r}")


def _report(kind, lhs, rhs, **extra):
    deficit = sorted(rhs.cells - lhs.cells)
    clipped = lhs.clipped or rhs.clipped
    rep = FillerReport(kind, not deficit, lhs, rhs, clipped, deficit, extra=dict(extra))
    if clipped:
        rep.warnings.append(TruncationWarning(f"{kind}: evaluated inside truncated bounds"))
    return rep


def is_filler(query: FillerQuery, star_A=False):
    """Evaluate ``<A>_1 (psi^{*0} phi^{*0}) >= rhs(kind)``.

    With ``star_A`` the diamond of ``A^{*1}`` is taken instead, by boundary
    fixpoint, without materializing the star.
    """
    model, kind = query.model, query.kind
    target = confluence_shape(model, query.phi, query.psi)
    if star_A:
        lhs = model.dia_star(query.A, target)
    else:
        lhs = algebra.dia(model, "fwd", query.A, 1, target)
    return _report(kind, lhs, _rhs(model, kind, query.phi, query.psi))


def confluence_filler(model, phi=None, psi=None):
    """The part of ``Gamma^{*1}`` running from ``phi^{*0} psi^{*0}`` into ``psi^{*0} phi^{*0}``.

    For a coherently confluent polygraph this is a confluence filler, and it
    is the candidate handed to the Church-Rosser verifiers.
    """
    if phi is None or psi is None:
        phi, psi = canonical_pair(model)
    m = model.mul
    peaks = m(0, model.star(0, phi), model.star(0, psi))
    return m(1, m(1, peaks, model.star(1, model.gamma_steps())), confluence_shape(model, phi, psi))


def filler_hierarchy(model, phi, psi):
    """``(phi+psi)^{*0} >= phi^{*0} psi^{*0} >= phi psi`` as set inclusions."""
    cr = _rhs(model, "church-rosser", phi, psi)
    conf = _rhs(model, "confluence", phi, psi)
    loc = _rhs(model, "local", phi, psi)
    return conf.cells <= cr.cells and loc.cells <= conf.cells


def modal_commutation(model, phi, psi):
    """``<phi* psi*>_0 p <= <psi* phi*>_0 p`` for every ``p`` below ``1_0`` (exhaustive)."""
    fs, ps = model.star(0, phi), model.star(0, psi)
    left, right = model.mul(0, fs, ps), model.mul(0, ps, fs)
    objs = sorted(model.unit(0).cells)
    for mask in range(1 << len(objs)):
        p = CellSet(o for k, o in enumerate(objs) if mask >> k & 1)
        if not model.leq(algebra.dia(model, "fwd", left, 0, p), algebra.dia(model, "fwd", right, 0, p)):
            return False
    return True


# ---------------------------------------------------------------------------
# whiskering and the coherent Church-Rosser theorem


def whisker_completion(model, A, phi, psi, mutation=None, materialize=True):
    """``A_hat = (phi+psi)^{*0} A (phi+psi)^{*0}`` and ``A_hat^{*1}``.

    ``mutation="unwhiskered"`` drops the left whiskering (test hook).
    """
    w = model.star(0, model.add(phi, psi))
    if mutation == "unwhiskered":
        hat = model.whisker(model.unit(0), A, w)
    elif mutation is None:
        hat = model.whisker(w, A, w)
    else:
        raise ValueError(f"unknown completion mutation {mutation!r}")
    return hat, (model.star(1, hat) if materialize else None)


def whisker_absorption(model, hat_star, phi, psi, samples=20, seed=0):
    """Sampled ``xi A <= A`` and ``A xi <= A`` for ``xi <= (phi+psi)^{*0}``.

    Returns ``(failures, undetermined)``: a violation only counts as a
    failure when ``hat_star`` is exact, since truncation drops the composites
    whose intermediate boundaries leave the bounds.
    """
    w = sorted(model.star(0, model.add(phi, psi)).cells)
    rng = random.Random(seed)
    bad, unknown = [], []
    for _ in range(samples):
        xi = CellSet(rng.sample(w, rng.randint(0, min(4, len(w)))))
        for side, prod in (("left", model.mul(0, xi, hat_star)), ("right", model.mul(0, hat_star, xi))):
            if not model.leq(prod, hat_star):
                (unknown if hat_star.clipped else bad).append((side, xi))
    return bad, unknown


def _require(model, A, phi, psi, kind):
    rep = is_filler(FillerQuery(model, A, phi, psi, kind))
    if not rep.holds:
        raise NotAFiller(f"not a {kind} filler: {rep.status}, {len(rep.deficit)} uncovered cell(s)")
    return rep


def _conclude(model, kind, lhs, rhs, mutation, **extra):
    rep = _report(kind, lhs, rhs, **extra)
    if not rep.holds and not lhs.clipped and mutation is None:
        raise OracleMismatch(f"{kind} conclusion fails on exact evaluation")
    return rep


def verify_coherent_cr(model, A, phi, psi, mutation=None):
    """``<A_hat^{*1}>_1 (psi* phi*) >= (phi+psi)^{*0}`` for a confluence filler ``A``."""
    _require(model, A, phi, psi, "confluence")
    hat, _ = whisker_completion(model, A, phi, psi, mutation, materialize=False)
    lhs = model.dia_star(hat, confluence_shape(model, phi, psi))
    return _conclude(model, "church-rosser", lhs, _rhs(model, "church-rosser", phi, psi), mutation)


def verify_semi_cr(model, A, phi, psi, side="left", mutation=None):
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    _require(model, A, phi, psi, f"semi-{side}")
    hat, _ = whisker_completion(model, A, phi, psi, mutation, materialize=False)
    lhs = model.dia_star(hat, confluence_shape(model, phi, psi))
    return _conclude(model, "church-rosser", lhs, _rhs(model, "church-rosser", phi, psi), mutation)


def cr_inductive_sequence(model, A, phi, psi, k_max, hat_star=None):
    """The sequence ``A_0 = 1_0``, ``A_k = ((phi+psi) A_{k-1}) .1 (A' phi^{*0})``.

    Each entry is ``(A_k, checks)`` where ``checks`` maps a check name to a
    status string (``ok``, ``fails`` or ``undetermined``).
    """
    _require(model, A, phi, psi, "confluence")
    m = model.mul
    if hat_star is None:
        _, hat_star = whisker_completion(model, A, phi, psi)
    target = confluence_shape(model, phi, psi)
    fps = model.add(phi, psi)
    fs = model.star(0, phi)
    a_prime = m(1, A, target)
    step = m(0, a_prime, fs)
    out = []
    ak = model.unit(0)
    for k in range(k_max + 1):
        if k:
            ak = m(1, m(0, fps, ak), step)
        power = algebra.power(model, fps, 0, k)
        checks = {
            "codomain": _status(model.leq(model.cod(1, ak), target), model.cod(1, ak)),
            "domain": _status(model.leq(power, model.dom(1, ak)), ak),
            "below completion": _status(model.leq(ak, hat_star), hat_star),
            "backward diamond": _status(
                model.leq(algebra.dia(model, "bwd", ak, 1, power), target), ak),
        }
        out.append((ak, checks))
    return out


def _status(ok, bigger):
    if ok:
        return "ok"
    return "undetermined" if bigger.clipped else "fails"


# ---------------------------------------------------------------------------
# termination and the coherent Newman lemma


def noetherian_i(model, psi, i=0):
    """``yes`` when the greatest ``p <= <psi>_0 p`` is empty, ``unknown`` if that needs clipped data."""
    if i != 0:
        raise ValueError("only i = 0 is instantiated")
    p = model.unit(0)
    while True:
        nxt = p & algebra.dia(model, "fwd", psi, 0, p)
        if nxt.cells == p.cells:
            break
        p = nxt
    if not p.cells:
        return "yes"
    return "unknown" if psi.clipped else "no"


def well_founded_i(model, phi, i=0):
    """Noethericity in the opposite algebra: the backward diamond replaces the forward one."""
    if i != 0:
        raise ValueError("only i = 0 is instantiated")
    p = model.unit(0)
    while True:
        nxt = p & algebra.dia(model, "bwd", phi, 0, p)
        if nxt.cells == p.cells:
            break
        p = nxt
    if not p.cells:
        return "yes"
    return "unknown" if phi.clipped else "no"


def _continuity_ok(model, a, b, samples=8, seed=0):
    objs = sorted(model.unit(0).cells)
    rng = random.Random(seed)
    for _ in range(samples):
        fam = [CellSet(rng.sample(objs, rng.randint(0, len(objs)))) for _ in range(rng.randint(0, 3))]
        sup = CellSet()
        for p in fam:
            sup = sup | p
        lhs = model.mul(0, model.mul(0, a, sup), b)
        rhs = CellSet()
        for p in fam:
            rhs = rhs | model.mul(0, model.mul(0, a, p), b)
        if lhs.cells != rhs.cells:
            return False
    return True


def verify_coherent_newman(model, A, phi, psi, mutation=None):
    """``<A_hat^{*1}>_1 (psi* phi*) >= phi* psi*`` under the Newman hypotheses.

    The report carries ``r``, the largest ``p <= 1_0`` with
    ``lhs >= phi* p psi*``, which must be all of ``1_0`` on success.
    """
    if noetherian_i(model, psi) != "yes":
        raise HypothesisFailed("noetherian", "psi admits a nonempty p <= <psi>p")
    if well_founded_i(model, phi) != "yes":
        raise HypothesisFailed("well-foundedness", "phi admits a nonempty p <= <phi|p")
    local = is_filler(FillerQuery(model, A, phi, psi, "local"))
    if not local.holds:
        raise HypothesisFailed("local filler", f"{len(local.deficit)} local branching(s) uncovered")
    for a, b in ((psi, psi), (phi, psi), (psi, phi)):
        if not _continuity_ok(model, a, b):
            raise OracleMismatch("restriction is not continuous in the power-set model")
    hat, _ = whisker_completion(model, A, phi, psi, mutation, materialize=False)
    lhs = model.dia_star(hat, confluence_shape(model, phi, psi))
    fs, ps = model.star(0, phi), model.star(0, psi)
    r = [o for o in sorted(model.unit(0).cells)
         if model.leq(model.mul(0, model.mul(0, fs, CellSet([o])), ps), lhs)]
    rep = _conclude(model, "confluence", lhs, model.mul(0, fs, ps), mutation,
                    r=[model.P.objects[o.src.start] for o in r])
    rep.extra["r_is_unit"] = len(r) == len(model.unit(0))
    if rep.holds and not rep.extra["r_is_unit"] and mutation is None:
        raise OracleMismatch("conclusion holds but the restricted-paving fixpoint is not 1_0")
    return rep


# ---------------------------------------------------------------------------
# constructive paving


@dataclass
class PavingCertificate:
    subject: object  # ZigZag or Branching of forward words
    cell: TwoCell
    forward: tuple
    backward: tuple

    @property
    def source(self):
        return self.cell.src

    def verify(self, P, bounds=None):
        """Return the list of violated invariants (empty when the certificate is sound)."""
        problems = []
        try:
            rebuilt = make_cell(P, self.cell.src, self.cell.tiles, normalize=False)
        except Exception as exc:  # ChainError, bad generator index
            return [f"tiles do not chain: {exc}"]
        if rebuilt.tgt != self.cell.tgt:
            problems.append("recorded target differs from the chained target")
        if self.cell.src != subject_zigzag(P, self.subject):
            problems.append("source differs from the subject")
        if not all(is_forward(x) for x in self.forward + self.backward):
            problems.append("target parts are not forward paths")
        if reduce_word(self.forward + inverse_word(self.backward)) != self.cell.tgt.word:
            problems.append("target does not factor as forward then backward")
        for t in self.cell.tiles:
            if not 0 <= t.gen < len(P.extension):
                problems.append(f"tile generator {t.gen} outside Gamma")
        if bounds is not None:
            L, T = bounds
            if len(self.cell.tiles) > T:
                problems.append("more tiles than the bound T")
            for k, t in enumerate(self.cell.tiles):
                c = tile_cell(P, t.l, t.gen, t.r)
                if max(len(t.l), len(t.r), len(c.src.word), len(c.tgt.word)) > L:
                    problems.append(f"tile {k} leaves the bounded universe")
        return problems

    def to_dict(self, P):
        subj = self.subject
        if isinstance(subj, Branching):
            subject = {"branching": {"source": P.objects[subj.source],
                                     "first": P.signed_tokens(subj.first),
                                     "second": P.signed_tokens(subj.second)}}
        else:
            subject = {"zigzag": P.signed_tokens(subj.word), "at": P.objects[subj.start]}
        return {
            "subject": subject,
            "tiles": [{"l": P.signed_tokens(t.l), "gen": P.extension[t.gen].name,
                       "r": P.signed_tokens(t.r)} for t in self.cell.tiles],
            "source": P.signed_tokens(self.cell.src.word),
            "target_forward": P.signed_tokens(self.forward),
            "target_backward": P.signed_tokens(self.backward),
            "at": P.objects[self.cell.src.start],
        }

    def to_json(self, P):
        return json.dumps(self.to_dict(P), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, P, d):
        names = {sp.name: i for i, sp in enumerate(P.extension)}
        word = lambda toks: tuple(P.letter(t) for t in toks)  # noqa: E731
        at = P.object_of(d["at"])
        subj = d["subject"]
        if "branching" in subj:
            b = subj["branching"]
            subject = Branching(P.object_of(b["source"]), word(b["first"]), word(b["second"]))
        else:
            subject = P.make_zigzag(word(subj["zigzag"]), start=subj.get("at"))
        tiles = tuple(Tile(word(t["l"]), names[t["gen"]], word(t["r"])) for t in d["tiles"])
        src = P.make_zigzag(word(d["source"]), start=at)
        cell = make_cell(P, src, tiles, normalize=False)
        return cls(subject, cell, word(d["target_forward"]), word(d["target_backward"]))


def subject_zigzag(P, subject):
    if isinstance(subject, Branching):
        u = subject.source
        w = reduce_word(inverse_word(subject.first) + subject.second)
        end = _end(P, u, subject.second) if not w else P.ltgt(w[-1])
        start = _end(P, u, subject.first) if not w else P.lsrc(w[0])
        return ZigZag(start, end, w)
    return subject


def _end(P, start, word):
    for x in word:
        start = P.ltgt(x)
    return start


def _split(word):
    """Split a reduced forward-then-backward word into its two forward parts."""
    k = 0
    while k < len(word) and is_forward(word[k]):
        k += 1
    if not all(not is_forward(x) for x in word[k:]):
        return None
    return word[:k], inverse_word(word[k:])


def _zz(P, start, word):
    return ZigZag(start, _end(P, start, word), word)


def _idc(P, start, word):
    return identity_cell(_zz(P, start, word))


class _Paver:
    def __init__(self, P, fuel):
        if P.dim != 1:
            raise ValueError("paving is instantiated for 1-polygraphs")
        self.P = P
        self.fuel = fuel
        self.memo = {}
        # Gamma indexed by source word; spheres with a confluent target only
        self.by_src = {}
        for g, sp in enumerate(P.extension):
            parts = _split(sp.tgt.word)
            if parts is not None:
                self.by_src.setdefault((sp.src.start, sp.src.word), (g, parts))

    def burn(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("paving ran out of fuel")

    def branching(self, u, f, g):
        """A cell ``f^- g => f' g'^-`` for forward words ``f, g`` from ``u``; returns (cell, f', g')."""
        key = (u, f, g)
        if key in self.memo:
            return self.memo[key]
        self.burn()
        P = self.P
        if not f or not g:
            res = (_idc(P, _end(P, u, f), reduce_word(inverse_word(f) + g)), g, f)
        elif f[0] == g[0]:
            res = self.branching(P.ltgt(f[0]), f[1:], g[1:])
        else:
            src = reduce_word(inverse_word(f) + g)
            hit = self.by_src.get((_end(P, u, f), src))
            if hit is not None:
                gen, (fp, gp) = hit
                res = (tile_cell(P, (), gen, ()), fp, gp)
            else:
                res = self._newman(u, f, g)
        self.memo[key] = res
        return res

    def local(self, u, x, y):
        P = self.P
        hit = self.by_src.get((P.ltgt(x), (x ^ 1, y)))
        if hit is None:
            raise MissingFiller(Branching(u, (x,), (y,)),
                                f"no sphere with source {P.fmt_letter(x ^ 1)} {P.fmt_letter(y)}")
        gen, (fp, gp) = hit
        return tile_cell(P, (), gen, ()), fp, gp

    def _newman(self, u, f, g):
        P = self.P
        f1, f2, g1, g2 = f[0], f[1:], g[0], g[1:]
        u1, v1 = P.ltgt(f1), P.ltgt(g1)
        alpha, f1p, g1p = self.local(u, f1, g1)
        beta, f2p, h = self.branching(u1, f2, f1p)
        gamma, k, g2p = self.branching(v1, g1p + h, g2)
        u2 = _end(P, u1, f2)
        left = hcomp(P, _idc(P, u2, inverse_word(f2)), alpha, normalize=False)
        mid = hcomp(P, beta, _idc(P, _end(P, u1, f1p), inverse_word(g1p)), normalize=False)
        top = hcomp(P, vcomp(P, left, mid, normalize=False), _idc(P, v1, g2), normalize=False)
        bottom = hcomp(P, _idc(P, u2, f2p), gamma, normalize=False)
        delta = vcomp(P, top, bottom, normalize=False)
        fwd, bwd = _split(delta.tgt.word)
        return delta, fwd, bwd

    def zigzag(self, h):
        """A cell ``h => h' k'^-``; returns (cell, h', k')."""
        P = self.P
        w = h.word
        if len(w) <= 1:
            parts = _split(w)
            return identity_cell(h), parts[0], parts[1]
        self.burn()
        head = ZigZag(h.start, P.lsrc(w[-1]), w[:-1])
        alpha, hp, kp = self.zigzag(head)
        x = w[-1]
        last = _idc(P, P.lsrc(x), (x,))
        if not is_forward(x):
            cell = hcomp(P, alpha, last, normalize=False)
        else:
            beta, _, _ = self.branching(P.lsrc(x), kp, (x,))
            top = hcomp(P, alpha, last, normalize=False)
            bottom = hcomp(P, _idc(P, h.start, hp), beta, normalize=False)
            cell = vcomp(P, top, bottom, normalize=False)
        fwd, bwd = _split(cell.tgt.word)
        return cell, fwd, bwd


def pave_zigzag(P, h, fuel=10000):
    """Church-Rosser certificate ``h => h' k'^-`` built by induction on the length of ``h``."""
    cell, fwd, bwd = _Paver(P, fuel).zigzag(h)
    fwd, bwd = _split(cell.tgt.word)
    return PavingCertificate(h, cell, fwd, bwd)


def pave_branching_newman(P, b: Branching, fuel=10000):
    """Confluence certificate ``f^- g => f' g'^-`` by Noetherian recursion."""
    if is_terminating(P) != "yes":
        raise NotTerminating("the polygraph is not terminating")
    u = P.object_of(b.source) if not isinstance(b.source, int) else b.source
    f, g = tuple(b.first), tuple(b.second)
    cell, _, _ = _Paver(P, fuel).branching(u, f, g)
    fwd, bwd = _split(cell.tgt.word)
    return PavingCertificate(Branching(u, f, g), cell, fwd, bwd)


def forward_paths(P, start, max_len):
    out = [()]
    layer = [((), start)]
    for _ in range(max_len):
        nxt = []
        for w, o in layer:
            for gi in P.steps_from(o):
                nxt.append((w + (2 * gi,), P.gens1[gi][2]))
        out.extend(w for w, _ in nxt)
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# bridging the polygraph and the algebra


def _poly_status(P, subjects, pave):
    failures = []
    for s in subjects:
        try:
            cert = pave(s)
        except (MissingFiller, FuelExhausted, NotTerminating) as exc:
            failures.append((s, type(exc).__name__))
            continue
        if cert.verify(P):
            raise OracleMismatch(f"paver produced an invalid certificate for {s}")
    return failures


def _branchings_within(P, L):
    out = []
    for u in range(len(P.objects)):
        paths = forward_paths(P, u, L)
        for f in paths:
            for g in paths:
                if len(reduce_word(inverse_word(f) + g)) <= L and f and g:
                    out.append(Branching(u, f, g))
    return out


def gamma_bridge(P, bounds=Bounds(), fuel=10000):
    """Polygraph-level and algebraic filler status for the local, confluence and Church-Rosser kinds."""
    if P.dim != 1:
        raise ValueError("the bridge is instantiated for 1-polygraphs")
    model = PathModel(P, bounds)
    phi, psi = canonical_pair(model)
    G = model.gamma_steps()
    A = model.add(model.unit(1), G)
    paver = _Paver(P, fuel)

    def pave_local(b):
        if b.first == b.second:
            return None
        x, y = b.first[0], b.second[0]
        cell, fp, gp = paver.local(b.source, x, y)
        return PavingCertificate(b, cell, fp, gp)

    def pave_branch(b):
        cell, fp, gp = _Paver(P, fuel).branching(b.source, b.first, b.second)
        return PavingCertificate(b, cell, *_split(cell.tgt.word))

    def pave_zz(z):
        return pave_zigzag(P, z, fuel)

    local_subjects = []
    for u in range(len(P.objects)):
        for x in P.steps_from(u):
            for y in P.steps_from(u):
                local_subjects.append(Branching(u, (2 * x,), (2 * y,)))
    subjects = {
        "local": (local_subjects, lambda b: pave_local(b) or _trivial(P, b)),
        "confluence": (_branchings_within(P, bounds.L), pave_branch),
        "church-rosser": ([z for z in model.zigzags], pave_zz),
    }
    out = {}
    for kind, (subs, pave) in subjects.items():
        poly_fail = _poly_status(P, subs, pave)
        rep = is_filler(FillerQuery(model, A, phi, psi, kind), star_A=True)
        poly = not poly_fail
        if poly != rep.holds and not rep.lhs.clipped:
            raise OracleMismatch(f"{kind}: paving says {poly}, algebra says {rep.holds}")
        agree = poly == rep.holds
        out[kind] = {"polygraph": poly, "algebra": rep.status, "agree": agree,
                     "polygraph_failures": len(poly_fail)}
    return out


def _trivial(P, b):
    u = b.source
    cell = _idc(P, _end(P, u, b.first), reduce_word(inverse_word(b.first) + b.second))
    return PavingCertificate(b, cell, *_split(cell.tgt.word))


# ---------------------------------------------------------------------------
# filler generation


def generate_fillers(P, mode="local", bound=None, fuel=1000):
    """One sphere ``f^- g => f' g'^-`` per non-trivial (local or critical) branching.

    Returns a list of entries in the polygraph `extension` schema.  Raises
    ``NotJoinable`` listing every branching whose normal forms differ.
    """
    if is_terminating(P) == "no":
        raise NotTerminating("normal forms are not available for a non-terminating polygraph")
    if P.dim == 1:
        return _generate_1(P, fuel)
    if mode == "local":
        branchings = [b for b in local_branchings(P, bound if bound is not None else 2 * max(
            (len(l) for _, l, _ in P.gens2), default=0)) if b.first != b.second]
    elif mode == "critical":
        branchings = critical_branchings(P)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out, stuck = [], []
    for k, b in enumerate(branchings):
        ends = []
        for st in (b.first, b.second):
            res = normalize(P, P.fmt_string(P.apply_step(st)), fuel=fuel)
            ends.append(res)
        if ends[0].normal_form != ends[1].normal_form:
            stuck.append(b)
            continue
        fmt = lambda seq: [P.fmt_step(s) for s in seq]  # noqa: E731
        out.append({"name": f"alpha_{k}", "source": P.fmt_string(b.source),
                    "src": {"backward": [P.fmt_step(b.first)], "forward": [P.fmt_step(b.second)]},
                    "tgt": {"forward": fmt(ends[0].sequence), "backward": fmt(ends[1].sequence)}})
    if stuck:
        raise NotJoinable(stuck)
    return out


def _generate_1(P, fuel):
    out, stuck = [], []
    for b in local_branchings(P):
        if b.first == b.second:
            continue
        f, g = P.gen_index[b.first], P.gen_index[b.second]
        nf = normalize(P, P.objects[P.gens1[f][2]], fuel=fuel)
        ng = normalize(P, P.objects[P.gens1[g][2]], fuel=fuel)
        if nf.normal_form != ng.normal_form:
            stuck.append(b)
            continue
        fp = [n for n in nf.sequence]
        gp = [n for n in ng.sequence]
        for (x, xp), (y, yp) in (((b.first, fp), (b.second, gp)), ((b.second, gp), (b.first, fp))):
            out.append({"name": f"alpha_{x}_{y}", "at": P.objects[P.gens1[P.gen_index[x]][2]],
                        "src_zigzag": [x + "-", y],
                        "tgt_zigzag": xp + [t + "-" for t in reversed(yp)]})
    if stuck:
        raise NotJoinable(stuck)
    return out


# ---------------------------------------------------------------------------
# whole-polygraph summary


def check_polygraph_coherence(P, bounds=Bounds(), fuel=10000):
    """Hypothesis and conclusion status of both coherence theorems, algebraically and by paving."""
    if P.dim != 1:
        raise ValueError("coherence checks are instantiated for 1-polygraphs")
    model = PathModel(P, bounds)
    phi, psi = canonical_pair(model)
    A = model.add(model.unit(1), model.gamma_steps())
    summary = {"bounds": {"L": bounds.L, "T": bounds.T}, "termination": is_terminating(P)}
    summary["bridge"] = gamma_bridge(P, bounds, fuel)

    conf = is_filler(FillerQuery(model, A, phi, psi, "confluence"), star_A=True)
    cr = {"hypothesis": conf.status}
    if conf.holds:
        rep = _cr_from_star(model, A, phi, psi)
        cr["conclusion"] = rep.status
        cr["confirmed"] = rep.holds
    else:
        cr["conclusion"] = "unproven"
        cr["confirmed"] = False
    summary["church_rosser"] = cr

    nm = {}
    try:
        rep = verify_coherent_newman(model, A, phi, psi)
        nm.update(hypothesis="holds", conclusion=rep.status, confirmed=rep.holds, r=rep.extra["r"])
    except HypothesisFailed as exc:
        nm.update(hypothesis=f"fails ({exc.hypothesis})", conclusion="unproven", confirmed=False)
    summary["newman"] = nm

    pav = {"zigzags": 0, "failures": 0}
    for z in model.zigzags:
        pav["zigzags"] += 1
        try:
            cert = pave_zigzag(P, z, fuel)
            if cert.verify(P):
                raise OracleMismatch("invalid certificate")
        except (MissingFiller, FuelExhausted):
            pav["failures"] += 1
    summary["paving"] = pav
    return summary


def _cr_from_star(model, A, phi, psi):
    """CR conclusion for a filler given through its star (``A`` stands for ``A^{*1}``)."""
    hat, _ = whisker_completion(model, A, phi, psi, materialize=False)
    lhs = model.dia_star(hat, confluence_shape(model, phi, psi))
    return _conclude(model, "church-rosser", lhs, _rhs(model, "church-rosser", phi, psi), None)


def cr_oracle_agreement(P, max_len=5, bounds=Bounds(), fuel=10000):
    """Compare ``pave_zigzag`` success with membership in ``<A_hat^{*1}>_1 (psi* phi*)``.

    ``A`` is ``1_1 + Gamma``.  Returns ``(checked, disagreements)`` where each
    disagreement is ``(zigzag, paved, member)``.
    """
    model = PathModel(P, bounds)
    phi, psi = canonical_pair(model)
    A = model.add(model.unit(1), model.gamma())
    hat, _ = whisker_completion(model, A, phi, psi, materialize=False)
    covered = {c.src for c in model.dia_star(hat, confluence_shape(model, phi, psi))}
    subjects = P.zigzags(max_len)
    out = []
    for z in subjects:
        try:
            cert = pave_zigzag(P, z, fuel)
            paved = not cert.verify(P)
        except (MissingFiller, FuelExhausted):
            paved = False
        if paved != (z in covered):
            out.append((z, paved, z in covered))
    return len(subjects), out
