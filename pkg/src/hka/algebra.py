"""Modal operators over an abstract model and a property-based law harness.

A *model* is any object exposing

``n``                      number of multiplications
``boolean_dims``           dimensions with an antidomain
``conv_dims``              ``{j: d}``: ``conv(j, .)`` is defined on ``d``-dimensional
                           elements (``None`` meaning all elements)
``zero() add(x, y) leq(x, y) eq(x, y)``
``mul(i, x, y) unit(i) dom(i, x) cod(i, x) adom(i, x) acod(i, x) star(i, x) conv(j, x)``
``sample(rng)``            a random element
``sample_dim(rng, i)``     a random ``i``-dimensional element (below ``unit(i)``)
``elements()``             every element, or ``None`` for large carriers
``dim_elements(i)``        optional: every ``i``-dimensional element
``clipped(x)``             whether ``x`` is only a lower approximation

Laws are decided with ``leq``/``eq`` only.  In truncated models a violated
clause with a clipped side cannot be judged and is counted as undetermined
instead of failing.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from .errors import DimensionError, NotBooleanError, NotProvidedError

EXHAUSTIVE_THRESHOLD = 4096
REJECTION_CAP = 10000


# ---------------------------------------------------------------------------
# derived operators


def _check_dim(model, i):
    if not 0 <= i < model.n:
        raise IndexError(f"dimension {i} out of range for a model with {model.n} multiplications")


def dia(model, direction, a, i, phi):
    """Forward ``d_i(a phi)`` or backward ``r_i(phi a)`` diamond."""
    _check_dim(model, i)
    if not model.eq(model.dom(i, phi), phi):
        raise DimensionError("diamond argument is not i-dimensional")
    if direction == "fwd":
        return model.dom(i, model.mul(i, a, phi))
    if direction == "bwd":
        return model.cod(i, model.mul(i, phi, a))
    raise ValueError(f"direction must be 'fwd' or 'bwd', not {direction!r}")


def neg(model, i, p):
    if i not in model.boolean_dims:
        raise NotBooleanError(f"dimension {i} has no antidomain")
    return model.adom(i, p)


def box(model, direction, a, i, phi):
    if i not in model.boolean_dims:
        raise NotBooleanError(f"dimension {i} has no antidomain")
    return neg(model, i, dia(model, direction, a, i, neg(model, i, phi)))


def power(model, a, i, k):
    _check_dim(model, i)
    out = model.unit(i)
    for _ in range(k):
        out = model.mul(i, a, out)
    return out


class Opposite:
    """The opposite model: multiplication reversed, domain and codomain exchanged."""

    def __init__(self, model):
        self.base = model
        self.n = model.n
        self.boolean_dims = model.boolean_dims
        self.conv_dims = getattr(model, "conv_dims", {})
        self.name = "op(" + getattr(model, "name", "model") + ")"

    def mul(self, i, x, y):
        return self.base.mul(i, y, x)

    def dom(self, i, x):
        return self.base.cod(i, x)

    def cod(self, i, x):
        return self.base.dom(i, x)

    def adom(self, i, x):
        return self.base.acod(i, x)

    def acod(self, i, x):
        return self.base.adom(i, x)

    def __getattr__(self, attr):
        return getattr(self.base, attr)


def opposite(model):
    return model.base if isinstance(model, Opposite) else Opposite(model)


# ---------------------------------------------------------------------------
# reports


@dataclass
class LawReport:
    law: str
    dims: tuple
    mode: str = "exhaustive"
    samples: int = 0
    failures: list = field(default_factory=list)
    undetermined: int = 0

    @property
    def passed(self):
        return not self.failures

    def to_dict(self, fmt=repr):
        return {
            "law": self.law,
            "dims": list(self.dims),
            "mode": self.mode,
            "samples": self.samples,
            "undetermined": self.undetermined,
            "failures": [{"clause": f["clause"], "inputs": [fmt(x) for x in f["inputs"]],
                          "lhs": None if f["lhs"] is None else fmt(f["lhs"]),
                          "rhs": None if f["rhs"] is None else fmt(f["rhs"])} for f in self.failures],
        }

    def to_json(self, fmt=repr):
        return json.dumps(self.to_dict(fmt), sort_keys=True)

    def merge(self, other):
        self.samples += other.samples
        self.failures += other.failures
        self.undetermined += other.undetermined
        if other.mode == "sampled":
            self.mode = "sampled"
        return self


class _Checker:
    """Collects clause outcomes for one report."""

    def __init__(self, model, report, per_clause=5):
        self.model = model
        self.report = report
        self.per_clause = per_clause
        self.seen = {}

    def _clipped(self, x):
        f = getattr(self.model, "clipped", None)
        return bool(f and f(x))

    def _fail(self, clause, inputs, lhs, rhs):
        # a few counterexamples per clause, so one noisy clause cannot hide the others
        n = self.seen.get(clause, 0)
        self.seen[clause] = n + 1
        if n < self.per_clause:
            self.report.failures.append({"clause": clause, "inputs": tuple(inputs), "lhs": lhs, "rhs": rhs})

    def leq(self, clause, inputs, lhs, rhs):
        """Assert ``lhs <= rhs``."""
        if self.model.leq(lhs, rhs):
            return True
        # antitone operations (antidomain, box) turn a clipped lower bound
        # into an upper bound, so a clipped side on either end is inconclusive
        if self._clipped(rhs) or self._clipped(lhs):
            self.report.undetermined += 1
            return True
        self._fail(clause, inputs, lhs, rhs)
        return False

    def eq(self, clause, inputs, lhs, rhs):
        if self.model.eq(lhs, rhs):
            return True
        if self._clipped(lhs) or self._clipped(rhs):
            self.report.undetermined += 1
            return True
        self._fail(clause, inputs, lhs, rhs)
        return False

    def truth(self, clause, inputs, ok, lhs=None, rhs=None, judged=True):
        if ok:
            return True
        if not judged:
            self.report.undetermined += 1
            return True
        self._fail(clause, inputs, lhs, rhs)
        return False


def _tuples(model, kinds, budget, rng):
    """Argument tuples: exhaustive when small enough, otherwise ``budget`` samples.

    ``kinds`` lists, per argument, either ``None`` (any element) or a dimension
    ``d`` (a ``d``-dimensional element).
    """
    pools = []
    for k in kinds:
        if k is None:
            pool = model.elements()
        else:
            getter = getattr(model, "dim_elements", None)
            pool = getter(k) if getter else None
        pools.append(pool)
    if all(p is not None for p in pools):
        size = 1
        for p in pools:
            size *= len(p)
        if size <= EXHAUSTIVE_THRESHOLD:
            return "exhaustive", list(itertools.product(*pools))
    out = []
    for _ in range(budget):
        out.append(tuple(model.sample(rng) if k is None else model.sample_dim(rng, k) for k in kinds))
    return "sampled", out


def _rng(seed, law):
    # one independent stream per law so that suites can run in any order
    return random.Random(f"{seed}:{law}")


def _run(model, law, dims, clauses, budget, seed):
    """``clauses`` is a list of ``(kinds, fn)``; ``fn(checker, *args)`` asserts one clause."""
    report = LawReport(law, tuple(dims))
    if budget <= 0:
        report.mode = "sampled"
        return report
    ck = _Checker(model, report)
    for idx, (kinds, fn) in enumerate(clauses):
        mode, tuples = _tuples(model, kinds, budget, _rng(seed, f"{law}/{idx}"))
        if mode == "sampled":
            report.mode = "sampled"
        for args in tuples:
            report.samples += 1
            fn(ck, *args)
    return report


# ---------------------------------------------------------------------------
# law suites


def check_order(model, budget=500, seed=0):
    def order(ck, x, y):
        ck.truth("leq iff x+y=y", (x, y), model.leq(x, y) == model.eq(model.add(x, y), y))
    return _run(model, "order", (), [((None, None), order)], budget, seed)


def check_dioid(model, i, budget=500, seed=0):
    _check_dim(model, i)
    m, add, one, zero = model.mul, model.add, model.unit(i), model.zero()

    def add_laws(ck, x, y, z):
        ck.eq("+ associative", (x, y, z), add(add(x, y), z), add(x, add(y, z)))
        ck.eq("+ commutative", (x, y), add(x, y), add(y, x))
        ck.eq("+ idempotent", (x,), add(x, x), x)
        ck.eq("0 neutral", (x,), add(x, zero), x)

    def mul_laws(ck, x, y, z):
        ck.eq("associative", (x, y, z), m(i, m(i, x, y), z), m(i, x, m(i, y, z)))
        ck.eq("left distributive", (x, y, z), m(i, x, add(y, z)), add(m(i, x, y), m(i, x, z)))
        ck.eq("right distributive", (x, y, z), m(i, add(x, y), z), add(m(i, x, z), m(i, y, z)))

    def unit_laws(ck, x):
        ck.eq("left unit", (x,), m(i, one, x), x)
        ck.eq("right unit", (x,), m(i, x, one), x)
        ck.eq("left annihilation", (x,), m(i, zero, x), zero)
        ck.eq("right annihilation", (x,), m(i, x, zero), zero)

    return _run(model, f"dioid[{i}]", (i,), [((None,) * 3, add_laws), ((None,) * 3, mul_laws),
                                              ((None,), unit_laws)], budget, seed)


def check_interchange(model, budget=500, seed=0):
    if model.n < 2:
        raise DimensionError("interchange needs at least two multiplications")
    pairs = [(i, j) for i in range(model.n) for j in range(i + 1, model.n)]
    clauses = []
    for i, j in pairs:
        def lax(ck, w, x, y, z, i=i, j=j):
            m = model.mul
            lhs = m(i, m(j, w, x), m(j, y, z))
            rhs = m(j, m(i, w, y), m(i, x, z))
            ck.leq(f"lax interchange ({i},{j})", (w, x, y, z), lhs, rhs)

        def boundary(ck, x, y, i=i, j=j):
            # the lax law at (x, cod_j x, dom_j y, y) and at (dom_j x, x, y, cod_j y)
            m, d, r = model.mul, model.dom, model.cod
            lhs = m(i, x, y)
            ck.leq(f"x *{i} y <= (x *{i} d(y)) *{j} (r(x) *{i} y)", (x, y), lhs,
                   m(j, m(i, x, d(j, y)), m(i, r(j, x), y)))
            ck.leq(f"x *{i} y <= (d(x) *{i} y) *{j} (x *{i} r(y))", (x, y), lhs,
                   m(j, m(i, d(j, x), y), m(i, x, r(j, y))))

        def units(ck, i=i, j=j):
            one = model.unit(j)
            ck.eq(f"1_{j} idempotent for *_{i}", (), model.mul(i, one, one), one)
            ck.leq(f"1_{i} <= 1_{j}", (), model.unit(i), one)
        clauses += [((None,) * 4, lax), ((None, None), boundary), ((), units)]
    return _run(model, "interchange", tuple(range(model.n)), clauses, budget, seed)


def check_domain_axioms(model, i, budget=500, seed=0, _codomain=True):
    _check_dim(model, i)
    m, d, add, one, zero = model.mul, model.dom, model.add, model.unit(i), model.zero()

    def unary(ck, x):
        ck.leq("x <= d(x)x", (x,), x, m(i, d(i, x), x))
        ck.leq("d(x) <= 1", (x,), d(i, x), one)
        ck.eq("d(d(x)) = d(x)", (x,), d(i, d(i, x)), d(i, x))
        for j in range(model.n):
            if j > i:
                ck.eq(f"d_{j}(d_{i}(x)) = d_{i}(x)", (x,), d(j, d(i, x)), d(i, x))

    def binary(ck, x, y):
        ck.eq("d(xy) = d(x d(y))", (x, y), d(i, m(i, x, y)), d(i, m(i, x, d(i, y))))
        ck.eq("d(x+y) = d(x)+d(y)", (x, y), d(i, add(x, y)), add(d(i, x), d(i, y)))
        if model.leq(x, y):
            ck.leq("d monotone", (x, y), d(i, x), d(i, y))

    def with_p(ck, p, x):
        ck.eq("d(px) = p d(x)", (p, x), d(i, m(i, p, x)), m(i, p, d(i, x)))

    def constants(ck):
        ck.eq("d(0) = 0", (), d(i, zero), zero)
        ck.eq("d(1) = 1", (), d(i, one), one)
        for j in range(i + 1, model.n):
            ck.eq(f"d_{j}(1_{i}) = 1_{i}", (), d(j, one), one)
            ck.leq(f"1_{i} <= 1_{j}", (), one, model.unit(j))

    def lift(ck, p):
        for j in range(i + 1, model.n):
            ck.eq(f"d_{i}(p)=p implies d_{j}(p)=p", (p,), d(j, p), p)

    report = _run(model, f"domain[{i}]", (i,), [((None,), unary), ((None, None), binary),
                                                 ((i, None), with_p), ((), constants), ((i,), lift)],
                  budget, seed)
    if _codomain:
        report.merge(check_domain_axioms(opposite(model), i, budget, seed + 1, _codomain=False))
    return report


def check_antidomain_axioms(model, i, budget=500, seed=0, _codomain=True):
    _check_dim(model, i)
    if i not in model.boolean_dims:
        raise NotBooleanError(f"dimension {i} is not Boolean")
    m, a, d, add, one, zero = model.mul, model.adom, model.dom, model.add, model.unit(i), model.zero()

    def unary(ck, x):
        ck.eq("a(x)x = 0", (x,), m(i, a(i, x), x), zero)
        ck.eq("a(a(x)) + a(x) = 1", (x,), add(a(i, a(i, x)), a(i, x)), one)
        ck.eq("d = a a", (x,), d(i, x), a(i, a(i, x)))
        ck.eq("d(cod(x)) = cod(x)", (x,), d(i, model.cod(i, x)), model.cod(i, x))
        ck.eq("cod(d(x)) = d(x)", (x,), model.cod(i, d(i, x)), d(i, x))

    def binary(ck, x, y):
        ck.leq("a(xy) <= a(x a(a(y)))", (x, y), a(i, m(i, x, y)), a(i, m(i, x, a(i, a(i, y)))))

    def constants(ck):
        ck.eq("a(0) = 1", (), a(i, zero), one)
        ck.eq("a(1) = 0", (), a(i, one), zero)

    report = _run(model, f"antidomain[{i}]", (i,), [((None,), unary), ((None, None), binary),
                                                     ((), constants)], budget, seed)
    if _codomain:
        report.merge(check_antidomain_axioms(opposite(model), i, budget, seed + 1, _codomain=False))
    return report


def check_globularity(model, budget=500, seed=0):
    if model.n < 2:
        raise DimensionError("globularity needs at least two dimensions")
    d, r, m = model.dom, model.cod, model.mul
    clauses = []
    for i in range(model.n):
        for j in range(i + 1, model.n):
            def unary(ck, x, i=i, j=j):
                ck.eq(f"d{i} d{j} = d{i}", (x,), d(i, d(j, x)), d(i, x))
                ck.eq(f"d{i} r{j} = d{i}", (x,), d(i, r(j, x)), d(i, x))
                ck.eq(f"r{i} d{j} = r{i}", (x,), r(i, d(j, x)), r(i, x))
                ck.eq(f"r{i} r{j} = r{i}", (x,), r(i, r(j, x)), r(i, x))

            def binary(ck, x, y, i=i, j=j):
                ck.eq(f"d{j}(x *{i} y) = d{j}x *{i} d{j}y", (x, y), d(j, m(i, x, y)), m(i, d(j, x), d(j, y)))
                ck.eq(f"r{j}(x *{i} y) = r{j}x *{i} r{j}y", (x, y), r(j, m(i, x, y)), m(i, r(j, x), r(j, y)))
            clauses += [((None,), unary), ((None, None), binary)]
    return _run(model, "globularity", tuple(range(model.n)), clauses, budget, seed)


def check_star_axioms(model, i, budget=500, seed=0):
    _check_dim(model, i)
    m, s, add, one = model.mul, model.star, model.add, model.unit(i)

    def unfold(ck, x):
        xs = s(i, x)
        ck.leq("1 + x x* <= x*", (x,), add(one, m(i, x, xs)), xs)
        ck.leq("1 + x* x <= x*", (x,), add(one, m(i, xs, x)), xs)
        ck.eq("x** = x*", (x,), s(i, xs), xs)

    def sums(ck, x, y):
        ck.eq("(x+y)* = (x* y*)*", (x, y), s(i, add(x, y)), s(i, m(i, s(i, x), s(i, y))))

    def induction(ck, x, y, z):
        # left: z + x y <= y  implies  x* z <= y ; right: z + y x <= y implies z x* <= y
        if model.leq(add(z, m(i, x, y)), y):
            ck.leq("left induction", (x, y, z), m(i, s(i, x), z), y)
        if model.leq(add(z, m(i, y, x)), y):
            ck.leq("right induction", (x, y, z), m(i, z, s(i, x)), y)

    clauses = [((None,), unfold), ((None, None), sums), ((None,) * 3, induction)]
    for j in range(i + 1, model.n):
        def lax(ck, phi, a, j=j):
            ck.leq(f"phi *{i} A^*{j} <= (phi *{i} A)^*{j}", (phi, a), m(i, phi, s(j, a)), s(j, m(i, phi, a)))
            ck.leq(f"A^*{j} *{i} phi <= (A *{i} phi)^*{j}", (phi, a), m(i, s(j, a), phi), s(j, m(i, a, phi)))
        clauses.append(((j, None), lax))
    report = _run(model, f"star[{i}]", (i,), clauses, budget, seed)
    if report.mode == "sampled":
        _induction_by_rejection(model, i, report, budget, seed)
    return report


def _induction_by_rejection(model, i, report, budget, seed):
    """Sampled triples rarely satisfy the antecedents; draw antecedent-satisfying ones."""
    rng = _rng(seed, f"star[{i}]/rejection")
    m, s, add = model.mul, model.star, model.add
    ck = _Checker(model, report)
    found = tries = 0
    while found < budget and tries < REJECTION_CAP:
        tries += 1
        x, z = model.sample(rng), model.sample(rng)
        # the least y with z + x y <= y is x* z; enlarging it keeps the antecedent
        y = add(m(i, s(i, x), z), model.sample(rng) if rng.random() < 0.5 else model.zero())
        if model.leq(add(z, m(i, x, y)), y):
            found += 1
            report.samples += 1
            ck.leq("left induction", (x, y, z), m(i, s(i, x), z), y)
        y = add(m(i, z, s(i, x)), model.sample(rng) if rng.random() < 0.5 else model.zero())
        if model.leq(add(z, m(i, y, x)), y):
            report.samples += 1
            ck.leq("right induction", (x, y, z), m(i, z, s(i, x)), y)


def check_modal_duality(model, i, budget=500, seed=0):
    _check_dim(model, i)
    if i not in model.boolean_dims:
        raise NotBooleanError(f"dimension {i} is not Boolean")
    m, add, zero = model.mul, model.add, model.zero()

    def fd(x, p):
        return dia(model, "fwd", x, i, p)

    def bd(x, p):
        return dia(model, "bwd", x, i, p)

    def fb(x, p):
        return box(model, "fwd", x, i, p)

    def bb(x, p):
        return box(model, "bwd", x, i, p)

    def ng(p):
        return model.adom(i, p)

    def galois(ck, x, p, q):
        vals = (fd(x, p), bb(x, q), bd(x, p), fb(x, q), bd(x, q))
        judged = not any(ck._clipped(v) for v in vals)
        ck.truth("<x|p <= q iff p <= [x]' q", (x, p, q),
                 model.leq(vals[0], q) == model.leq(p, vals[1]), judged=judged)
        ck.truth("<x]' p <= q iff p <= [x| q", (x, p, q),
                 model.leq(vals[2], q) == model.leq(p, vals[3]), judged=judged)
        ck.truth("conjugation", (x, p, q),
                 model.eq(m(i, vals[0], q), zero) == model.eq(m(i, p, vals[4]), zero), judged=judged)
        ck.eq("<x|(p+q) = <x|p + <x|q", (x, p, q), fd(x, add(p, q)), add(fd(x, p), fd(x, q)))

    def demorgan(ck, x, p):
        ck.eq("[x|p = -<x|-p", (x, p), fb(x, p), ng(fd(x, ng(p))))
        ck.eq("<x|p = -[x|-p", (x, p), fd(x, p), ng(fb(x, ng(p))))
        ck.eq("<x]'p = -[x]'-p", (x, p), bd(x, p), ng(bb(x, ng(p))))
        ck.eq("<x|0 = 0", (x,), fd(x, zero), zero)

    def functor(ck, x, y, p):
        ck.eq("<xy| = <x| o <y|", (x, y, p), fd(m(i, x, y), p), fd(x, fd(y, p)))
        ck.eq("<xy]' = <y]' o <x]'", (x, y, p), bd(m(i, x, y), p), bd(y, bd(x, p)))

    return _run(model, f"modal[{i}]", (i,), [((None, i, i), galois), ((None, i), demorgan),
                                              ((None, None, i), functor)], budget, seed)


def check_converse_axioms(model, j, budget=500, seed=0):
    conv_dims = getattr(model, "conv_dims", {})
    if j not in conv_dims:
        raise NotProvidedError(f"conv({j}) is not provided by this model")
    k = conv_dims[j]
    c, m, add = model.conv, model.mul, model.add

    def unary(ck, a):
        ck.eq("conv conv a = a", (a,), c(j, c(j, a)), a)
        ck.eq("conv(a*) = conv(a)*", (a,), c(j, model.star(j, a)), model.star(j, c(j, a)))
        ck.leq("a <= a conv(a) a", (a,), a, m(j, m(j, a, c(j, a)), a))

    def binary(ck, a, b):
        ck.eq("conv(a+b) = conv a + conv b", (a, b), c(j, add(a, b)), add(c(j, a), c(j, b)))
        ck.eq("conv(ab) = conv b conv a", (a, b), c(j, m(j, a, b)), m(j, c(j, b), c(j, a)))

    return _run(model, f"converse[{j}]", (j,), [((k,), unary), ((k, k), binary)], budget, seed)


SUITES = ("order", "dioid", "domain", "antidomain", "interchange", "globularity", "star", "modal", "converse")


def run_all(model, budget=500, seed=0):
    """Every applicable suite, in a fixed order."""
    reports = [check_order(model, budget, seed)]
    for i in range(model.n):
        reports.append(check_dioid(model, i, budget, seed))
        reports.append(check_domain_axioms(model, i, budget, seed))
        if i in model.boolean_dims:
            reports.append(check_antidomain_axioms(model, i, budget, seed))
            reports.append(check_modal_duality(model, i, budget, seed))
        reports.append(check_star_axioms(model, i, budget, seed))
    if model.n >= 2:
        reports.append(check_interchange(model, budget, seed))
        reports.append(check_globularity(model, budget, seed))
    for j in sorted(getattr(model, "conv_dims", {})):
        reports.append(check_converse_axioms(model, j, budget, seed))
    return reports
