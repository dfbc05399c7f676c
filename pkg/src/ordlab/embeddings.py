"""Embedding witnesses: construction, verification and bounded search.

A witness is either an explicit finite map or a named rule (a Python
callable plus the parameters that determine it).  Rules are total on their
declared domain, so verification can sample arbitrarily deep prefixes.
Witnesses may carry the domain and codomain presentations they were built
for; ``verify_embedding`` uses those unless told otherwise.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Optional

from . import kernels
from .errors import (DomainError, IncompleteWitness, ViolationError,
                     WitnessInvalid)
from .presentation import (Presentation, denote, descending_sequence,
                           dyadic_from_value, dyadic_value)
from .terms import (Empty, OmegaExp, OrderTerm, Rationals, Rev, Omega, Sum,
                    contains_rationals, is_well_order, show)

FINITE_MAP = "finiteMap"
RULE = "rule"
DEFAULT_SAMPLE = 50
ENUMERATION_LIMIT = 200_000


def jsonable(x):
    if isinstance(x, tuple):
        return [jsonable(y) for y in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


@dataclass(frozen=True)
class EmbeddingWitness:
    kind: str
    name: str
    params: dict = field(default_factory=dict)
    fn: Callable = field(default=None, compare=False, repr=False)
    pairs: tuple = ()
    domain: Optional[Presentation] = field(default=None, compare=False, repr=False)
    codomain: Optional[Presentation] = field(default=None, compare=False, repr=False)

    def __call__(self, a):
        return self.fn(a)

    def to_json(self):
        out = {"kind": self.kind, "name": self.name,
               "params": {k: jsonable(v) for k, v in sorted(self.params.items())}}
        if self.kind == FINITE_MAP:
            out["pairs"] = [[jsonable(a), jsonable(b)] for a, b in self.pairs]
        return out


def finite_map(pairs, name="finite", domain=None, codomain=None) -> EmbeddingWitness:
    pairs = tuple((a, b) for a, b in pairs)
    table = dict(pairs)

    def fn(a):
        try:
            return table[a]
        except (KeyError, TypeError):
            raise IncompleteWitness(f"finite map undefined at {a!r}") from None
    return EmbeddingWitness(FINITE_MAP, name, {}, fn, pairs, domain, codomain)


def rule(name, fn, domain=None, codomain=None, **params) -> EmbeddingWitness:
    return EmbeddingWitness(RULE, name, params, fn, (), domain, codomain)


def identity(p: Presentation) -> EmbeddingWitness:
    return rule("identity", lambda a: a, p, p)


def compose(g: EmbeddingWitness, f: EmbeddingWitness, name=None) -> EmbeddingWitness:
    """``g`` after ``f``."""
    return rule(name or f"{g.name}.{f.name}", lambda a: g(f(a)), f.domain, g.codomain,
                outer=g.to_json(), inner=f.to_json())


# -- verification ---------------------------------------------------------

@dataclass(frozen=True)
class Verification:
    verified: bool
    checked: int
    pair: Optional[tuple] = None

    def __bool__(self):
        return self.verified

    def to_json(self):
        out = {"verified": self.verified, "checked": self.checked}
        if self.pair is not None:
            out["violation"] = [jsonable(x) for x in self.pair]
        return out


def _ranks(p: Presentation, pts):
    order = sorted(range(len(pts)), key=cmp_to_key(lambda i, j: p.compare(pts[i], pts[j])))
    rank = [0] * len(pts)
    r = 0
    for pos, i in enumerate(order):
        if pos and p.compare(pts[order[pos - 1]], pts[i]) != 0:
            r += 1
        rank[i] = r
    return rank


def verify_embedding(w: EmbeddingWitness, dom: Optional[Presentation] = None,
                     cod: Optional[Presentation] = None,
                     sample_size: int = DEFAULT_SAMPLE) -> Verification:
    """Strict order preservation on all pairs of the first ``sample_size``
    enumerated domain points; the violating pair ``a < b`` is reported."""
    dom = dom or w.domain
    cod = cod or w.codomain
    if dom is None or cod is None:
        raise DomainError(f"{w.name}: domain and codomain are required")
    pts = dom.prefix(sample_size)
    images = []
    for a in pts:
        b = w(a)
        if not cod.contains(b):
            raise WitnessInvalid(f"{w.name} maps {a!r} to {b!r}, outside {cod.name}")
        images.append(b)
    dom_rank = _ranks(dom, pts)
    pair = kernels.first_violation(dom_rank, _ranks(cod, images))
    if pair is None:
        return Verification(True, len(pts))
    i, j = pair
    if dom_rank[i] > dom_rank[j]:
        i, j = j, i
    return Verification(False, len(pts), (pts[i], pts[j]))


def require_verified(w: EmbeddingWitness, sample_size: int = DEFAULT_SAMPLE, **kw):
    v = verify_embedding(w, sample_size=sample_size, **kw)
    if not v:
        raise ViolationError(f"{w.name} is not order preserving", v.pair)
    return w


def extract_descending(w: EmbeddingWitness, start, steps: int,
                       order: Optional[Presentation] = None) -> list:
    """The orbit ``start, w(start), w(w(start)), ...`` of length ``steps``."""
    order = order or w.domain
    if order is None:
        raise DomainError("an order is required")
    out = [start]
    while len(out) < steps:
        nxt = w(out[-1])
        if not order.less(nxt, out[-1]):
            raise WitnessInvalid(
                f"orbit of {start!r} is not descending at step {len(out)}: "
                f"{nxt!r} is not below {out[-1]!r}")
        out.append(nxt)
    return out


# -- lazily built embeddings into dense orders ----------------------------

class _LazyPointwise:
    """Assigns targets along an enumeration, consulting only neighbours."""

    def __init__(self, p: Presentation, first, above, below, between):
        self.p = p
        self.rules = (first, above, below, between)
        self.keys = []      # domain points, sorted
        self.values = []    # their targets, same order
        self.assigned = {}
        self.done = 0

    def _place(self, a):
        key = cmp_to_key(self.p.compare)
        i = bisect.bisect_left([key(x) for x in self.keys], key(a))
        first, above, below, between = self.rules
        lo = self.values[i - 1] if i > 0 else None
        hi = self.values[i] if i < len(self.values) else None
        if lo is None and hi is None:
            v = first()
        elif hi is None:
            v = above(lo)
        elif lo is None:
            v = below(hi)
        else:
            v = between(lo, hi)
        self.keys.insert(i, a)
        self.values.insert(i, v)
        self.assigned[a] = v

    def __call__(self, a):
        if a in self.assigned:
            return self.assigned[a]
        if not self.p.contains(a):
            raise IncompleteWitness(f"{a!r} is not in {self.p.name}")
        while a not in self.assigned:
            if self.done >= ENUMERATION_LIMIT:
                raise IncompleteWitness(f"{a!r} not reached within the enumeration limit")
            try:
                x = self.p.point(self.done)
            except IndexError:
                raise IncompleteWitness(f"{a!r} is never enumerated") from None
            self.done += 1
            self._place(x)
        return self.assigned[a]


#: ``W(rev(w))`` minus the empty sequence: a dense order without endpoints
DENSE_TERM = OmegaExp(Rev(Omega()))


def dense_target() -> Presentation:
    whole = denote(DENSE_TERM)
    return whole.restrict(lambda s: s != (), name="W(rev(w))-<>")


def _y_between(s, t):
    if t[:len(s)] == s:
        return s + (t[len(s)] + 1,)
    return s + (s[-1],)


def dense_embed(p: Presentation) -> EmbeddingWitness:
    """Order embedding of ``p`` into ``W(rev(w))`` without the empty sequence.

    Codes there are non-empty non-decreasing tuples of naturals.  Points are
    placed in enumeration order: the first goes to ``<0>``, a new maximum
    above ``s`` to ``s + <s[-1]>``, a new minimum below ``t`` to
    ``<t[0] + 1>``, and a point between ``s < t`` to ``s + <t[len(s)] + 1>``
    when ``s`` is a prefix of ``t`` and to ``s + <s[-1]>`` otherwise.
    """
    lazy = _LazyPointwise(p, lambda: (0,), lambda s: s + (s[-1],),
                          lambda t: (t[0] + 1,), _y_between)
    return rule("denseEmbed", lazy, p, dense_target(), source=p.name)


def dyadic_embed(p: Presentation) -> EmbeddingWitness:
    """Order embedding of ``p`` into the dyadic rationals of ``(0, 1)``."""
    half = Fraction(1, 2)

    def mid(a, b):
        return dyadic_from_value((dyadic_value(a) + dyadic_value(b)) / 2)

    lazy = _LazyPointwise(
        p, lambda: (1,),
        lambda a: dyadic_from_value((dyadic_value(a) + 1) / 2),
        lambda b: dyadic_from_value(dyadic_value(b) * half), mid)
    return rule("dyadicEmbed", lazy, p, denote(Rationals()), source=p.name)


# -- constructions for ill-founded and non-scattered terms ----------------

def _check_descent(p: Presentation, xs):
    if len(xs) < 2:
        raise DomainError("a descent needs at least two points")
    for a in xs:
        p.check(a)
    for a, b in zip(xs, xs[1:]):
        if not p.less(b, a):
            raise DomainError(f"not descending: {b!r} is not below {a!r}")


def self_embed_ill_founded(t: OrderTerm, descent=None, length: int = 64,
                           dense: bool = True) -> EmbeddingWitness:
    """Embedding of ``W(t)`` below ``<x_0>`` for a descent ``x_0 > x_1 > ...``.

    ``descent`` is a sequence of codes or an index-to-code callable; by
    default the term's own descending sequence is used.  The core map sends
    ``<i_0, ..., i_{n-1}>`` in ``W(rev(w))`` to ``<x_{1+i_0}, ...>``; with
    ``dense`` it is preceded by ``dense_embed`` so the domain is ``W(t)``.
    """
    p = denote(t)
    if descent is None:
        descent = descending_sequence(t)
        if descent is None:
            raise DomainError(f"{show(t)} has no descending sequence")
    if callable(descent):
        xs = [descent(i) for i in range(length)]
        at = descent
    else:
        xs = list(descent)

        def at(i):
            if i >= len(xs):
                raise IncompleteWitness(f"descent too short for index {i}")
            return xs[i]
    _check_descent(p, xs)
    whole = denote(OmegaExp(t))
    x0 = (at(0),)
    segment = whole.below(x0)
    params = {"term": show(t), "x0": at(0)}
    core = rule("descentSubstitution", lambda s: tuple(at(1 + i) for i in s),
                denote(DENSE_TERM), segment, **params)
    if not dense:
        return core
    d = dense_embed(whole)
    return rule("selfEmbedIllFounded", lambda a: core(d(a)), whole, segment, **params)


def _rationals_path(t: OrderTerm, path=()):
    """Path of constructor steps from ``t`` down to a ``q`` subterm."""
    if isinstance(t, Rationals):
        return path
    if isinstance(t, Rev):
        return _rationals_path(t.t, path + ("rev",))
    if isinstance(t, OmegaExp):
        return _rationals_path(t.t, path + ("W",))
    if isinstance(t, Sum):
        for side, sub in (("L", t.left), ("R", t.right)):
            if contains_rationals(sub):
                return _rationals_path(sub, path + (side,))
    return None


def _wrap_rational(path, q):
    """Code in the outer term of the dyadic ``q`` placed along ``path``."""
    flip = False
    for step in path:
        if step == "rev":
            flip = not flip
    value = dyadic_value(q)
    code = dyadic_from_value(1 - value) if flip else q
    for step in reversed(path):
        if step == "W":
            code = (code,)
        elif step == "L":
            code = (0, code)
        elif step == "R":
            code = (1, code)
    return code


def self_embed_non_scattered(t: OrderTerm) -> EmbeddingWitness:
    """Embedding of ``t`` into the segment below the image of ``1/2``.

    ``t`` embeds into the dyadics, halving maps the dyadics below ``1/2``,
    and the dyadics embed back into ``t`` through a ``q`` subterm.
    """
    path = _rationals_path(t)
    if path is None:
        raise DomainError(f"{show(t)} has no rationals subterm")
    p = denote(t)
    f = dyadic_embed(p)

    def h(q):
        return dyadic_from_value(dyadic_value(q) / 2)

    q0 = _wrap_rational(path, (1,))
    return rule("selfEmbedNonScattered", lambda a: _wrap_rational(path, h(f(a))),
                p, p.below(q0), term=show(t), path="/".join(path) or ".", q0=q0)


# -- lifting along an interval --------------------------------------------

def _subterm(t: OrderTerm, path: str):
    for step in path:
        if not isinstance(t, Sum) or step not in "LR":
            raise DomainError(f"path {path!r} does not follow sum nodes")
        t = t.left if step == "L" else t.right
    return t


def _unwrap(path, code):
    for step in path:
        side = 0 if step == "L" else 1
        if code[0] != side:
            return None
        code = code[1]
    return code


def _wrap(path, code):
    for step in reversed(path):
        code = (0 if step == "L" else 1, code)
    return code


def _before(path, code):
    """Whether ``code`` lies before the interval at ``path``."""
    for step in path:
        side = 0 if step == "L" else 1
        if code[0] < side:
            return True
        if code[0] > side:
            return False
        code = code[1]
    return False


def interval_lift(outer: OrderTerm, path: str, witness: EmbeddingWitness) -> EmbeddingWitness:
    """``id_I + f`` for the interval ``A`` of ``outer`` reached along ``path``.

    ``path`` is a string of ``L``/``R`` steps through sum nodes; ``I`` is
    everything before ``A``.  ``witness`` maps an initial segment ``J`` of
    ``A`` (its domain) into a proper initial segment ``J0`` (its codomain).
    """
    inner = _subterm(outer, path)
    p = denote(outer)
    J = witness.domain or denote(inner)
    J0 = witness.codomain
    if J0 is None:
        raise DomainError("the interval witness needs a declared codomain")

    def member(seg):
        def pred(code):
            if _before(path, code):
                return True
            x = _unwrap(path, code)
            return x is not None and seg.contains(x)
        return pred

    def fn(code):
        if _before(path, code):
            return code
        x = _unwrap(path, code)
        if x is None:
            raise IncompleteWitness(f"{code!r} lies after the interval")
        return _wrap(path, witness(x))

    dom = p.restrict(member(J), name=f"{show(outer)}|I+J")
    cod = p.restrict(member(J0), name=f"{show(outer)}|I+J0")
    return rule("intervalLift", fn, dom, cod, outer=show(outer), path=path or ".",
                inner=witness.to_json())


def shift_rev_omega(p: Optional[Presentation] = None) -> EmbeddingWitness:
    """``i -> i + 1`` on ``rev(w)``, into the segment below its top point."""
    p = p or denote(Rev(Omega()))
    return rule("shift", lambda i: i + 1, p, p.below(0))


def _relocate(p: Presentation, w: EmbeddingWitness, before, unwrap, wrap, name, **params):
    """Extend ``w`` from an interval of ``p`` by the identity on what precedes it."""
    J, J0 = w.domain, w.codomain

    def member(seg):
        def pred(code):
            if before(code):
                return True
            x = unwrap(code)
            return x is not None and seg.contains(x)
        return pred

    def fn(code):
        return code if before(code) else wrap(w(unwrap(code)))
    return rule(name, fn, p.restrict(member(J)), p.restrict(member(J0)),
                inner=w.to_json(), **params)


def _insert_point(inner: Presentation, a):
    """``x -> x + <a>`` as multisets; it preserves the order of ``W(s)``."""
    def fn(x):
        k = 0
        while k < len(x) and inner.compare(x[k], a) >= 0:
            k += 1
        return x[:k] + (a,) + x[k:]
    return fn


def wwo_witness(t: OrderTerm) -> EmbeddingWitness:
    """An initial segment of ``t`` embedded into a proper initial segment of itself.

    Exists exactly when ``t`` is not a well order; the construction follows
    the term: a ``q`` subterm, the descent substitution for ``W`` of an
    ill-founded order, the shift on ``rev(w)``, insertion of a fixed point
    for ``rev(W(s))``, and identity-extension through sums.
    """
    if is_well_order(t):
        raise DomainError(f"{show(t)} is a well order")
    p = denote(t)
    if contains_rationals(t):
        return self_embed_non_scattered(t)
    if isinstance(t, Sum):
        side = "L" if not is_well_order(t.left) else "R"
        return interval_lift(t, side, wwo_witness(t.left if side == "L" else t.right))
    if isinstance(t, OmegaExp):
        return self_embed_ill_founded(t.t)
    u = t.t
    if isinstance(u, Omega):
        return shift_rev_omega(p)
    if isinstance(u, Rev):
        w = wwo_witness(u.t)
        return rule("doubleReversal", w.fn, p.restrict(w.domain.contains),
                    p.restrict(w.codomain.contains), inner=w.to_json())
    if isinstance(u, Sum):
        # rev(a + b) lists rev(b), coded (1, y), before rev(a), coded (0, x)
        if not is_well_order(Rev(u.right)):
            return _relocate(p, wwo_witness(Rev(u.right)), lambda c: False,
                             lambda c: c[1] if c[0] == 1 else None, lambda y: (1, y),
                             "reversedSumLift", term=show(t), side="R")
        return _relocate(p, wwo_witness(Rev(u.left)), lambda c: c[0] == 1,
                         lambda c: c[1] if c[0] == 0 else None, lambda x: (0, x),
                         "reversedSumLift", term=show(t), side="L")
    if isinstance(u, OmegaExp) and not isinstance(u.t, Empty):
        inner = denote(u.t)
        a = inner.point(0)
        return rule("insertPoint", _insert_point(inner, a), p, p.below(()),
                    term=show(t), point=jsonable(a))
    raise DomainError(f"no witness construction for {show(t)}")  # pragma: no cover


# -- bounded search -------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    found: bool
    prefix_size: int
    horizon: int
    witness: Optional[EmbeddingWitness] = None

    def to_json(self):
        out = {"found": self.found, "prefix": self.prefix_size, "horizon": self.horizon}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def default_horizon(prefix_size: int) -> int:
    return 4 * prefix_size


def search_embedding(dom: Presentation, cod: Presentation, prefix_size: int,
                     horizon: Optional[int] = None,
                     allowed: Optional[Callable] = None) -> SearchResult:
    """Backtracking search for an order-preserving map of dom's first
    ``prefix_size`` points into cod's first ``horizon`` points.

    ``horizon`` defaults to ``4 * prefix_size``.  A negative answer only
    covers the searched data.
    """
    if prefix_size < 0:
        raise DomainError("prefix size must be non-negative")
    if horizon is None:
        horizon = default_horizon(prefix_size)
    src = dom.sort(dom.prefix(prefix_size))
    tgt = cod.sort(cod.prefix(horizon))
    matrix = [[allowed is None or bool(allowed(a, b)) for b in tgt] for a in src]
    choice = kernels.monotone_assign(matrix)
    if choice is None:
        return SearchResult(False, len(src), len(tgt))
    w = finite_map([(a, tgt[c]) for a, c in zip(src, choice)], "search", dom, cod)
    if not verify_points_sorted(w, src, cod):
        raise ViolationError("search produced a non-monotone map")
    return SearchResult(True, len(src), len(tgt), w)


def verify_points_sorted(w, sorted_pts, cod) -> bool:
    imgs = [w(a) for a in sorted_pts]
    return all(cod.less(a, b) for a, b in zip(imgs, imgs[1:]))

