"""Polygraphs of dimension 1 (abstract rewriting systems) and 2 (string rewriting).

A 1-generator with index ``g`` is encoded as the letter ``2*g`` and its formal
inverse as ``2*g + 1``, so inversion is ``x ^ 1``.  Zig-zags are reduced words
of such letters together with their endpoint objects.  For 2-polygraphs the
1-cells are plain strings over the 1-generators (tuples of generator indices).
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from pathlib import Path
from typing import NamedTuple

from .errors import BoundRequired, ChainError, DimensionError, ParseError


class ZigZag(NamedTuple):
    start: int
    end: int
    word: tuple

    def __len__(self):
        return len(self.word)


class Sphere(NamedTuple):
    """A named pair of parallel cells: zig-zags for n=1, rewriting paths for n=2."""
    name: str
    src: object
    tgt: object


class Step(NamedTuple):
    """A whiskered rule application ``left . lhs(rule) . right`` on strings."""
    left: tuple
    rule: int
    right: tuple


class Branching(NamedTuple):
    source: object
    first: object
    second: object


def inv_letter(x):
    return x ^ 1


def is_forward(x):
    return not x & 1


def inverse_word(word):
    return tuple(x ^ 1 for x in reversed(word))


def reduce_word(word):
    out = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def reduce_tagged(left, mid, right):
    """Freely reduce ``left+mid+right``; return the word and the surviving span of ``mid``.

    Surviving letters keep their relative order, so the letters coming from
    ``mid`` occupy a contiguous block ``[a, b)`` of the result.
    """
    stack = []
    for tag, part in ((0, left), (1, mid), (2, right)):
        for x in part:
            if stack and stack[-1][0] == x ^ 1:
                stack.pop()
            else:
                stack.append((x, tag))
    a = sum(1 for _, t in stack if t == 0)
    b = a + sum(1 for _, t in stack if t == 1)
    return tuple(x for x, _ in stack), a, b


# ---------------------------------------------------------------------------
# spec files


def load_spec(source):
    """Read a JSON spec from a path, a JSON string or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = None
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            try:
                text = Path(source).read_text()
            except OSError as exc:
                raise ParseError(f"cannot read {source}: {exc}") from exc
        else:
            text = source
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("spec must be a JSON object")
    dim = data.get("dim", 1)
    if dim not in (1, 2):
        raise ParseError(f"dim must be 1 or 2, got {dim!r}")
    for key in ("objects", "gens1", "gens2", "extension"):
        if key in data and not isinstance(data[key], list):
            raise ParseError(f"{key} must be a list")
    for g in data.get("gens1", []):
        if not isinstance(g, dict) or not {"name", "src", "tgt"} <= set(g):
            raise ParseError(f"bad 1-generator entry {g!r}")
    for g in data.get("gens2", []):
        if not isinstance(g, dict) or not {"name", "lhs", "rhs"} <= set(g):
            raise ParseError(f"bad 2-generator entry {g!r}")
    for e in data.get("extension", []):
        if not isinstance(e, dict) or "name" not in e:
            raise ParseError(f"bad extension entry {e!r}")
    return data


def _split_signed(token):
    token = token.strip()
    if token.endswith("-"):
        return token[:-1], True
    return token, False


def _tokens(value, names):
    """Accept a list of tokens, a whitespace-separated string, or a run of one-letter names."""
    if isinstance(value, (list, tuple)):
        return [str(t) for t in value]
    value = str(value).strip()
    if not value:
        return []
    if " " in value or all(len(n) > 1 for n in names):
        return value.split()
    out, i = [], 0
    while i < len(value):
        tok = value[i]
        i += 1
        if i < len(value) and value[i] == "-":
            tok += "-"
            i += 1
        out.append(tok)
    return out


def validate(spec):
    """Return the list of semantic violations of a decoded spec (empty when valid)."""
    spec = load_spec(spec)
    problems = []
    objects = [str(o) for o in spec.get("objects", [])]
    if len(set(objects)) != len(objects):
        problems.append("duplicate object names")
    objs = set(objects)
    g1 = {}
    for g in spec.get("gens1", []):
        name = str(g["name"])
        if name in g1:
            problems.append(f"duplicate 1-generator {name}")
        for side in ("src", "tgt"):
            if str(g[side]) not in objs:
                problems.append(f"1-generator {name}: unknown {side} object {g[side]!r}")
        g1[name] = (str(g["src"]), str(g["tgt"]))
    dim = spec.get("dim", 1)
    if dim == 2:
        for g in spec.get("gens2", []):
            ends = []
            for side in ("lhs", "rhs"):
                toks = _tokens(g[side], list(g1))
                bad = [t for t in toks if t not in g1]
                if bad:
                    problems.append(f"2-generator {g['name']}: unknown 1-generators {bad} in {side}")
                    ends.append(None)
                    continue
                ends.append(_path_ends(toks, g1, problems, f"2-generator {g['name']} {side}"))
            if None not in ends and ends[0] != ends[1] and ends[0] and ends[1]:
                problems.append(f"2-generator {g['name']}: lhs and rhs are not parallel")
    elif spec.get("gens2"):
        problems.append("gens2 given for a 1-polygraph")
    for e in spec.get("extension", []):
        if dim == 2:
            continue
        ends = []
        for side in ("src_zigzag", "tgt_zigzag"):
            toks = _tokens(e.get(side, []), list(g1))
            bad = [t for t in toks if _split_signed(t)[0] not in g1]
            if bad:
                problems.append(f"sphere {e['name']}: unknown generators {bad} in {side}")
                ends.append(None)
                continue
            ends.append(_zigzag_ends(toks, g1, problems, f"sphere {e['name']} {side}"))
        a, b = ends
        if a is not None and b is not None and a != "empty" and b != "empty" and a != b:
            problems.append(f"sphere {e['name']}: boundaries are not parallel {a} vs {b}")
    return problems


def _path_ends(toks, g1, problems, where):
    if not toks:
        return ()
    cur = g1[toks[0]][0]
    start = cur
    for t in toks:
        if g1[t][0] != cur:
            problems.append(f"{where}: {t} does not compose")
            return None
        cur = g1[t][1]
    return (start, cur)


def _zigzag_ends(toks, g1, problems, where):
    if not toks:
        return "empty"
    cur = None
    start = None
    for t in toks:
        name, neg = _split_signed(t)
        s, d = g1[name]
        if neg:
            s, d = d, s
        if cur is not None and s != cur:
            problems.append(f"{where}: {t} does not compose")
            return None
        if start is None:
            start = s
        cur = d
    return (start, cur)


class Polygraph:
    """An indexed 1- or 2-polygraph with an optional cellular extension."""

    def __init__(self, dim, objects, gens1, gens2=(), extension=(), order=None, name=""):
        self.dim = dim
        self.name = name
        self.objects = tuple(objects)
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.gens1 = tuple(gens1)  # (name, src, tgt) with object indices
        self.gen_index = {g[0]: i for i, g in enumerate(self.gens1)}
        self.gens2 = tuple(gens2)  # (name, lhs, rhs) as tuples of generator indices
        self.rule_index = {g[0]: i for i, g in enumerate(self.gens2)}
        self.extension = tuple(extension)
        self.order = order
        self._out = [[] for _ in self.objects]
        for i, (_, s, _) in enumerate(self.gens1):
            self._out[s].append(i)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_spec(cls, spec, name=""):
        spec = load_spec(spec)
        problems = validate(spec)
        if problems:
            raise ParseError("invalid spec: " + "; ".join(problems))
        objects = [str(o) for o in spec.get("objects", [])]
        oi = {o: i for i, o in enumerate(objects)}
        gens1 = [(str(g["name"]), oi[str(g["src"])], oi[str(g["tgt"])]) for g in spec.get("gens1", [])]
        gi = {g[0]: i for i, g in enumerate(gens1)}
        dim = spec.get("dim", 1)
        gens2 = []
        for g in spec.get("gens2", []):
            lhs = tuple(gi[t] for t in _tokens(g["lhs"], list(gi)))
            rhs = tuple(gi[t] for t in _tokens(g["rhs"], list(gi)))
            gens2.append((str(g["name"]), lhs, rhs))
        self = cls(dim, objects, gens1, gens2, (), spec.get("orders"), name=name or spec.get("name", ""))
        ext = []
        for e in spec.get("extension", []):
            if dim == 1:
                at = e.get("at")
                src = _tokens(e.get("src_zigzag", []), list(gi))
                tgt = _tokens(e.get("tgt_zigzag", []), list(gi))
                s = self.parse_zigzag(src, start=at) if src or at else None
                t = self.parse_zigzag(tgt, start=at) if tgt or at else None
                if s is None and t is None:
                    raise ParseError(f"sphere {e['name']}: both sides empty, give 'at'")
                if s is None:
                    s = ZigZag(t.start, t.start, ())
                if t is None:
                    t = ZigZag(s.start, s.start, ())
                ext.append(Sphere(str(e["name"]), s, t))
            else:
                ext.append(Sphere(str(e["name"]), e.get("src"), e.get("tgt")))
        self.extension = tuple(ext)
        return self

    def to_spec(self):
        d = {"dim": self.dim, "objects": list(self.objects),
             "gens1": [{"name": n, "src": self.objects[s], "tgt": self.objects[t]} for n, s, t in self.gens1]}
        if self.dim == 2:
            d["gens2"] = [{"name": n, "lhs": self.fmt_string(l), "rhs": self.fmt_string(r)} for n, l, r in self.gens2]
        d["extension"] = []
        for sp in self.extension:
            if self.dim == 1:
                d["extension"].append({"name": sp.name, "src_zigzag": self.signed_tokens(sp.src.word),
                                       "tgt_zigzag": self.signed_tokens(sp.tgt.word),
                                       "at": self.objects[sp.src.start]})
            else:
                d["extension"].append({"name": sp.name, "src": sp.src, "tgt": sp.tgt})
        if self.order:
            d["orders"] = self.order
        return d

    def with_extension(self, spheres):
        clone = Polygraph(self.dim, self.objects, self.gens1, self.gens2, spheres, self.order, self.name)
        return clone

    # -- letters and zig-zags ---------------------------------------------

    def lsrc(self, x):
        g = self.gens1[x >> 1]
        return g[2] if x & 1 else g[1]

    def ltgt(self, x):
        g = self.gens1[x >> 1]
        return g[1] if x & 1 else g[2]

    def letter(self, token):
        name, neg = _split_signed(token)
        if name not in self.gen_index:
            raise ParseError(f"unknown generator {name!r}")
        return 2 * self.gen_index[name] + int(neg)

    def fmt_letter(self, x):
        return self.gens1[x >> 1][0] + ("-" if x & 1 else "")

    def signed_tokens(self, word):
        return [self.fmt_letter(x) for x in word]

    def fmt_zigzag(self, z):
        if not z.word:
            return f"1_{self.objects[z.start]}"
        return " ".join(self.signed_tokens(z.word))

    def object_of(self, obj):
        if isinstance(obj, int):
            return obj
        if obj not in self.obj_index:
            raise ParseError(f"unknown object {obj!r}")
        return self.obj_index[obj]

    def make_zigzag(self, word, start=None):
        """Check endpoint chaining of a raw signed word (without reducing it)."""
        word = tuple(word)
        if not word:
            if start is None:
                raise ChainError("an empty word needs an explicit start object")
            s = self.object_of(start)
            return ZigZag(s, s, ())
        cur = self.lsrc(word[0])
        if start is not None and self.object_of(start) != cur:
            raise ChainError(f"word does not start at {start}")
        first = cur
        for x in word:
            if self.lsrc(x) != cur:
                raise ChainError(f"{self.fmt_letter(x)} does not start at {self.objects[cur]}")
            cur = self.ltgt(x)
        return ZigZag(first, cur, word)

    def parse_zigzag(self, tokens, start=None):
        if isinstance(tokens, str):
            tokens = _tokens(tokens, list(self.gen_index))
        z = self.make_zigzag([self.letter(t) for t in tokens], start)
        return ZigZag(z.start, z.end, reduce_word(z.word))

    def identity(self, obj):
        o = self.object_of(obj)
        return ZigZag(o, o, ())

    def inverse(self, z):
        return ZigZag(z.end, z.start, inverse_word(z.word))

    def concat(self, z1, z2):
        if z1.end != z2.start:
            raise ChainError("zig-zags do not compose")
        return ZigZag(z1.start, z2.end, reduce_word(z1.word + z2.word))

    def zigzags(self, max_len, start=None):
        """All reduced zig-zags of length at most ``max_len`` (deterministic order)."""
        starts = range(len(self.objects)) if start is None else [self.object_of(start)]
        out = []
        for s in starts:
            layer = [ZigZag(s, s, ())]
            out.extend(layer)
            for _ in range(max_len):
                nxt = []
                for z in layer:
                    for x in self.letters_from(z.end):
                        if z.word and z.word[-1] == x ^ 1:
                            continue
                        nxt.append(ZigZag(s, self.ltgt(x), z.word + (x,)))
                out.extend(nxt)
                layer = nxt
        return out

    def letters_from(self, obj):
        out = []
        for i, (_, s, t) in enumerate(self.gens1):
            if s == obj:
                out.append(2 * i)
            if t == obj:
                out.append(2 * i + 1)
        return sorted(out)

    def steps_from(self, obj):
        return list(self._out[obj])

    # -- strings (n = 2) --------------------------------------------------

    def parse_string(self, s):
        if isinstance(s, tuple):
            return s
        return tuple(self.gen_index[t] for t in _tokens(s, list(self.gen_index)))

    def fmt_string(self, w):
        names = [self.gens1[i][0] for i in w]
        return ("" if all(len(n) == 1 for n in names) else " ").join(names)

    def fmt_step(self, st):
        return f"{self.fmt_string(st.left)}[{self.gens2[st.rule][0]}]{self.fmt_string(st.right)}"

    def apply_step(self, st):
        return st.left + self.gens2[st.rule][2] + st.right

    def step_source(self, st):
        return st.left + self.gens2[st.rule][1] + st.right


# ---------------------------------------------------------------------------
# rewriting


def zigzag_reduce(P, word, start=None):
    """Reduce a chained word of signed generators (tokens or letters) to its normal form."""
    if isinstance(word, str):
        word = _tokens(word, list(P.gen_index))
    letters = [P.letter(t) if isinstance(t, str) else t for t in word]
    if start is None and not letters:
        raise ChainError("an empty word needs an explicit start object")
    z = P.make_zigzag(letters, start)
    return ZigZag(z.start, z.end, reduce_word(z.word))


def rewriting_steps(P, cell):
    """Steps with the given source: generator names for n=1, Step records for n=2."""
    if P.dim == 1:
        if not isinstance(cell, (str, int)) or (isinstance(cell, str) and cell not in P.obj_index):
            raise DimensionError(f"{cell!r} is not an object of the 1-polygraph")
        return [P.gens1[g][0] for g in P.steps_from(P.object_of(cell))]
    return _string_steps(P, P.parse_string(cell))


def _string_steps(P, w):
    out = []
    for pos in range(len(w) + 1):
        for ri, (_, lhs, _) in enumerate(P.gens2):
            if pos + len(lhs) <= len(w) and w[pos:pos + len(lhs)] == lhs:
                out.append(Step(w[:pos], ri, w[pos + len(lhs):]))
    return out


class NormalizeResult(NamedTuple):
    normal_form: object
    sequence: list
    exhausted: bool


def normalize(P, cell, strategy="leftmost", fuel=1000):
    """Rewrite with the leftmost (then lowest-index) step until irreducible or out of fuel."""
    if strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    seq = []
    if P.dim == 1:
        cur = P.object_of(cell)
        for _ in range(fuel):
            steps = P.steps_from(cur)
            if not steps:
                return NormalizeResult(P.objects[cur], seq, False)
            seq.append(P.gens1[steps[0]][0])
            cur = P.gens1[steps[0]][2]
        return NormalizeResult(P.objects[cur], seq, bool(P.steps_from(cur)))
    cur = P.parse_string(cell)
    for _ in range(fuel):
        steps = _string_steps(P, cur)
        if not steps:
            return NormalizeResult(P.fmt_string(cur), seq, False)
        seq.append(steps[0])
        cur = P.apply_step(steps[0])
    return NormalizeResult(P.fmt_string(cur), seq, bool(_string_steps(P, cur)))


def _canonical(P, source, f, g, key):
    return Branching(source, f, g) if key(f) <= key(g) else Branching(source, g, f)


def local_branchings(P, bound=None):
    """Unordered pairs of steps with a common source, diagonal pairs included."""
    out = []
    if P.dim == 1:
        for o in range(len(P.objects)):
            steps = P.steps_from(o)
            for a, b in itertools.combinations_with_replacement(steps, 2):
                out.append(_canonical(P, P.objects[o], P.gens1[a][0], P.gens1[b][0], lambda s: s))
        return sorted(set(out))
    if bound is None:
        raise BoundRequired("local branchings of a 2-polygraph need a string length bound")
    alphabet = range(len(P.gens1))
    for n in range(bound + 1):
        for w in itertools.product(alphabet, repeat=n):
            steps = _string_steps(P, w)
            for a, b in itertools.combinations_with_replacement(steps, 2):
                out.append(_canonical(P, w, a, b, _step_key))
    return sorted(set(out))


def _step_key(st):
    return (len(st.left), st.rule, st.right)


def _is_critical(P, b):
    """Overlapping, non-identical and with minimal context."""
    if b.first == b.second:
        return False
    w = b.source
    spans = []
    for st in (b.first, b.second):
        a = len(st.left)
        spans.append((a, a + len(P.gens2[st.rule][1])))
    (a1, e1), (a2, e2) = spans
    if max(a1, a2) >= min(e1, e2):
        return False
    return min(a1, a2) == 0 and max(e1, e2) == len(w)


def critical_branchings(P):
    """Overlaps (proper or by inclusion) of two left-hand sides, minimal contexts only."""
    if P.dim != 2:
        raise DimensionError("critical branchings are defined for 2-polygraphs")
    out = set()
    rules = P.gens2
    for i, (_, li, _) in enumerate(rules):
        for j, (_, lj, _) in enumerate(rules):
            # lj strictly inside li (or equal with i != j)
            for p in range(len(li) - len(lj) + 1):
                if li[p:p + len(lj)] == lj and not (i == j and p == 0) and lj:
                    w = li
                    out.add(_canonical(P, w, Step((), i, ()), Step(li[:p], j, li[p + len(lj):]), _step_key))
            # proper overlap: suffix of li equals prefix of lj
            for k in range(1, min(len(li), len(lj))):
                if li[-k:] == lj[:k]:
                    w = li + lj[k:]
                    out.add(_canonical(P, w, Step((), i, lj[k:]), Step(li[:-k], j, ()), _step_key))
    return sorted(out)


def critical_branchings_bruteforce(P, bound=None):
    """Filter of bounded local branchings; agrees with ``critical_branchings``."""
    if bound is None:
        bound = 2 * max((len(l) for _, l, _ in P.gens2), default=0)
    return [b for b in local_branchings(P, bound) if _is_critical(P, b)]


# ---------------------------------------------------------------------------
# termination


def _acyclic(P):
    indeg = [0] * len(P.objects)
    for _, s, t in P.gens1:
        indeg[t] += 1
    queue = deque(i for i, d in enumerate(indeg) if d == 0)
    seen = 0
    while queue:
        o = queue.popleft()
        seen += 1
        for g in P.steps_from(o):
            t = P.gens1[g][2]
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return seen == len(P.objects)


def order_key(P, order):
    """Sort key for a weight/length-lexicographic order given as a spec ``orders`` dict."""
    kind = order.get("kind", "length-lex")
    prec = order.get("precedence") or [g[0] for g in P.gens1]
    # precedence lists generators from greatest to least
    rank = {P.gen_index[n]: len(prec) - k for k, n in enumerate(prec)}
    weights = order.get("weights", {})
    wt = {P.gen_index[n]: w for n, w in weights.items()}

    def key(w):
        lex = tuple(rank.get(x, 0) for x in w)
        if kind == "weight-lex":
            return (sum(wt.get(x, 1) for x in w), len(w), lex)
        if kind == "length-lex":
            return (len(w), lex)
        raise ParseError(f"unknown order kind {kind!r}")
    return key


def is_terminating(P, order=None, search_limit=2000):
    """Return "yes", "no" or "unknown"."""
    if P.dim == 1:
        return "yes" if _acyclic(P) else "no"
    order = order if order is not None else P.order
    if order:
        key = order_key(P, order)
        if all(key(l) > key(r) for _, l, r in P.gens2):
            return "yes"
    # bounded search for a cell reducing to itself
    for _, lhs, _ in P.gens2:
        if _reaches_cycle(P, lhs, search_limit):
            return "no"
    return "unknown"


def _reaches_cycle(P, start, limit):
    colour = {}
    stack = [(start, iter(_string_steps(P, start)))]
    colour[start] = 1
    visited = 1
    while stack:
        w, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            colour[w] = 2
            stack.pop()
            continue
        v = P.apply_step(nxt)
        c = colour.get(v)
        if c == 1:
            return True
        if c is None:
            visited += 1
            if visited > limit:
                return False
            colour[v] = 1
            stack.append((v, iter(_string_steps(P, v))))
    return False


def longest_distance(P):
    """Length of the longest rewriting sequence from each object of an acyclic 1-polygraph."""
    if not _acyclic(P):
        raise ValueError("polygraph is not terminating")
    memo = {}

    def go(o):
        if o not in memo:
            memo[o] = max((1 + go(P.gens1[g][2]) for g in P.steps_from(o)), default=0)
        return memo[o]
    return {o: go(o) for o in range(len(P.objects))}
