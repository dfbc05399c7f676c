"""Refuting embeddings of ``W(X)`` segments into proper initial segments.

Sequences are tuples over a well-order base ``X`` (codes of ``denote(X)``).
``w**y * n`` is the constant tuple ``(y,) * n`` and sums follow
``ordlab.cnf.cnf_add``.  Every refutation ends in an explicit witness of
failure: a pair ``a < b`` with ``f(a) >= f(b)``, or a point mapped outside
the claimed codomain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .cnf import CnfSeq, segment_of, structural_cnf
from .embeddings import (EmbeddingWitness, WitnessInvalid, jsonable, rule,
                         verify_embedding)
from .errors import (BudgetError, DomainError, IncompleteWitness,
                     InternalConsistencyError, OutOfRangeError, ViolationError)
from .presentation import Presentation, denote, lex_compare_with
from .terms import Omega, OmegaExp, OrderTerm, is_well_order, show

DEFAULT_BUDGET = 10_000


class _Escape(Exception):
    """Raised inside derived maps when the parent map misbehaves."""

    def __init__(self, terminal):
        super().__init__(terminal)
        self.terminal = terminal


class _Seqs:
    """Arithmetic on ``W(X)`` tuples for a fixed base."""

    def __init__(self, base: OrderTerm):
        if not is_well_order(base):
            raise DomainError(f"base {show(base)} is not a well order")
        self.base = base
        self.p = denote(base)

    def cmp(self, a, b) -> int:
        return lex_compare_with(self.p.compare, a, b)

    def lt(self, a, b) -> bool:
        return self.cmp(a, b) < 0

    def add(self, s, t):
        if not t:
            return s
        for i, x in enumerate(s):
            if self.p.compare(x, t[0]) < 0:
                return s[:i] + t
        return s + t

    def valid(self, s) -> bool:
        return (isinstance(s, tuple) and all(self.p.contains(x) for x in s)
                and all(self.p.compare(a, b) >= 0 for a, b in zip(s, s[1:])))


class _Counter:
    def __init__(self, f, budget, trace):
        self.f = f
        self.left = budget
        self.trace = trace

    def __call__(self, a):
        if self.left <= 0:
            raise BudgetError("evaluation budget exhausted", self.trace)
        self.left -= 1
        return self.f(a)


def _lead(r, y):
    m = 0
    while m < len(r) and r[m] == y:
        m += 1
    return m


@dataclass
class RefutationTrace:
    x: object
    y: object
    n: int
    steps: List[dict] = field(default_factory=list)
    terminal: Optional[dict] = None
    evaluations: int = 0

    @property
    def exponents(self):
        return [s["y"] for s in self.steps]

    def to_json(self):
        return {"x": jsonable(self.x), "y": jsonable(self.y), "n": self.n,
                "steps": [{k: jsonable(v) for k, v in sorted(s.items())} for s in self.steps],
                "terminal": {k: jsonable(v) for k, v in sorted((self.terminal or {}).items())},
                "evaluations": self.evaluations}


def _violation(a, b, fa, fb):
    return {"kind": "violation", "pair": (a, b), "images": (fa, fb)}


def refute_exponent_drop(f: Callable, x, y, n: int, base: OrderTerm = Omega(),
                         budget: int = DEFAULT_BUDGET, *, _translate=None) -> RefutationTrace:
    """Show that ``f`` is no embedding of ``w**x`` into ``w**y * n`` (``x > y``).

    Runs the pigeonhole recursion: at step ``i`` it finds ``k_i, m_i`` with
    two consecutive block starts ``xi + w**y_i * k_i`` and
    ``xi + w**y_i * (k_i + 1)`` mapped into the same block
    ``[eta + w**y_i * m_i, eta + w**y_i * (m_i + 1))``, then descends to the
    leading exponent ``y_{i+1} < y_i`` of the remainder.  Since the base is
    well founded, some check must fail; that failure is the terminal.
    """
    S = _Seqs(base)
    S.p.check(x)
    S.p.check(y)
    if not S.p.less(y, x):
        raise DomainError(f"need x > y in {show(base)}, got x={x!r}, y={y!r}")
    if n < 0:
        raise DomainError("n must be non-negative")
    trace = RefutationTrace(x, y, n)
    F = _Counter(f, budget, trace)
    translate = _translate or (lambda a: a)
    eta, xi, yi, blocks = (), (), y, n
    top = None  # (point, image) bounding the current step from above
    try:
        while True:
            pts = [S.add(xi, (yi,) * k) for k in range(blocks + 1)]
            imgs = []
            for a in pts:
                b = F(a)
                if not S.valid(b):
                    raise _Escape({"kind": "range", "point": translate(a), "image": b})
                imgs.append(b)
            chain = list(zip(pts, imgs)) + ([top] if top else [])
            for (a, fa), (b, fb) in zip(chain, chain[1:]):
                if not S.lt(fa, fb):
                    raise _Escape(_violation(translate(a), translate(b), fa, fb))
            if not trace.steps:
                hi = (y,) * n
                for a, b in zip(pts, imgs):
                    if not S.lt(b, hi):
                        raise _Escape({"kind": "range", "point": translate(a), "image": b})
            ms = []
            for b in imgs:
                if b[:len(eta)] != eta:
                    raise InternalConsistencyError("image left the current block")
                ms.append(_lead(b[len(eta):], yi))
            k = next((k for k in range(blocks) if ms[k] == ms[k + 1]), None)
            if k is None:
                raise InternalConsistencyError("pigeonhole failed on a monotone chain")
            m = ms[k]
            trace.steps.append({"y": yi, "k": k, "m": m})
            rest = imgs[k + 1][len(eta) + m:]
            if not rest:
                raise InternalConsistencyError("strict increase contradicts an empty remainder")
            y_next = rest[0]
            top = (pts[k + 1], imgs[k + 1])
            eta = eta + (yi,) * m
            xi = pts[k]
            yi = y_next
            blocks = _lead(rest, y_next) + 1
    except _Escape as e:
        trace.terminal = e.terminal
    trace.evaluations = budget - F.left
    return trace


def check_trace(trace: RefutationTrace, f: Callable, base: OrderTerm = Omega()) -> bool:
    """Re-check the recorded inequalities and the strict exponent descent."""
    S = _Seqs(base)
    ys = trace.exponents
    if any(not S.p.less(b, a) for a, b in zip(ys, ys[1:])):
        return False
    eta, xi = (), ()
    for s in trace.steps:
        y, k, m = s["y"], s["k"], s["m"]
        lo = eta + (y,) * m
        hi = eta + (y,) * (m + 1)
        a = f(S.add(xi, (y,) * k))
        b = f(S.add(xi, (y,) * (k + 1)))
        if not (S.cmp(lo, a) <= 0 and S.lt(a, b) and S.lt(b, hi)):
            return False
        eta, xi = lo, S.add(xi, (y,) * k)
    return True


# -- segments of W(X) -----------------------------------------------------

@dataclass
class SegmentRefutation:
    kind: str                      # refuted | violation | unrefuted
    pair: Optional[tuple] = None
    trace: Optional[RefutationTrace] = None
    step: Optional[int] = None
    target: Optional[tuple] = None
    reason: str = ""

    def to_json(self):
        out = {"kind": self.kind, "reason": self.reason}
        if self.pair is not None:
            out["pair"] = jsonable(self.pair)
        if self.trace is not None:
            out["trace"] = self.trace.to_json()
        if self.step is not None:
            out["step"] = self.step
        if self.target is not None:
            out["target"] = jsonable(self.target)
        return out


def check_no_segment_self_embedding(sigma: CnfSeq, f: Callable, target=None,
                                    budget: int = DEFAULT_BUDGET,
                                    sample: int = 40) -> SegmentRefutation:
    """Refute ``f`` as an embedding of ``W[sigma]`` into a proper initial segment.

    ``target`` is the code ``s0 < sigma`` with ``f`` claimed to map into the
    segment below ``s0``; by default the first enumerated point with
    ``f(p) < p`` is used.  Walking ``j`` up, ``s0[:j] <= f(s0[:j])`` holds
    until some step fails; that failure induces a map
    ``w**s0[j] -> w**y * n`` with ``y < s0[j]``, handed to
    ``refute_exponent_drop``.
    """
    S = _Seqs(sigma.base)
    if not sigma.entries:
        return SegmentRefutation("refuted", reason="empty segment: no proper initial segment exists")
    seg = segment_of(sigma)
    whole = denote(OmegaExp(sigma.base))
    w = f if isinstance(f, EmbeddingWitness) else rule("candidate", f)
    v = verify_embedding(w, seg, whole, sample)
    if not v:
        return SegmentRefutation("violation", pair=v.pair, reason="not order preserving")
    left = [budget]

    def F(a):
        if left[0] <= 0:
            raise BudgetError("evaluation budget exhausted")
        left[0] -= 1
        return w(a)

    if target is None:
        for p in seg.prefix(min(budget, 10 * sample)):
            if S.lt(F(p), p):
                target = p
                break
        else:
            return SegmentRefutation("unrefuted", reason="no point with f(p) < p was found")
    s0 = tuple(target)
    if not seg.contains(s0):
        raise DomainError(f"target {list(s0)} is not below the segment bound")
    if not S.lt(F(s0), s0):
        raise WitnessInvalid(f"f({list(s0)}) is not below the target {list(s0)}")
    for j in range(len(s0)):
        a, b = s0[:j], s0[:j + 1]
        fa = F(a)
        if S.lt(fa, a):
            raise InternalConsistencyError(f"induction hypothesis fails at {j}")
        fb = F(b)
        if not S.lt(fb, b):
            continue
        if not S.lt(fa, fb):
            return SegmentRefutation("violation", pair=(a, b), step=j, target=s0,
                                     reason="not order preserving")
        r = fb[len(a):]
        y = r[0]
        bound = _lead(r, y) + 1
        hi = a + (y,) * bound

        def fprime(tau, a=a, hi=hi, b=b, fa=fa):
            point = S.add(a, tau)
            img = F(point)
            if S.lt(img, a):
                raise _Escape(_violation(a, point, fa, img))
            if not S.lt(img, hi):
                raise _Escape(_violation(point, b, img, F(b)))
            return img[len(a):]

        trace = refute_exponent_drop(fprime, s0[j], y, bound, sigma.base,
                                     budget=max(left[0], 1),
                                     _translate=lambda tau, a=a: S.add(a, tau))
        return SegmentRefutation("refuted", pair=trace.terminal.get("pair"),
                                 trace=trace, step=j, target=s0,
                                 reason="exponent drop refuted")
    raise InternalConsistencyError("f(s0) < s0 but the induction never failed")


# -- Fraisse extraction ----------------------------------------------------

@dataclass(frozen=True)
class SumSegment:
    """Initial segment of the sum over ``w*``: all blocks with index above
    ``block``, plus the points of block ``block`` below ``bound`` (all of
    them when ``bound`` is None)."""
    block: int
    bound: Optional[tuple] = None

    def contains(self, code) -> bool:
        i, p = code
        if i != self.block:
            return i > self.block
        return self.bound is None or lex_compare_with(_int_cmp, p, self.bound) < 0

    def to_json(self):
        return {"block": self.block, "bound": jsonable(self.bound)}


def _int_cmp(a, b):
    return (a > b) - (a < b)


def _lt(a, b) -> bool:
    return lex_compare_with(_int_cmp, a, b) < 0


def _add(s, t):
    if not t:
        return s
    for i, x in enumerate(s):
        if x < t[0]:
            return s[:i] + t
    return s + t


def block_exponent(t: OrderTerm) -> int:
    """``a`` with ``t`` of type ``w**a``; DomainError when ``t`` is not of that form."""
    if not is_well_order(t):
        raise DomainError(f"{show(t)} is not a well order")
    c = structural_cnf(t)
    if len(c.entries) != 1:
        raise DomainError(f"{show(t)} is not indecomposable")
    e = c.entries[0]
    if e[0] != 0:
        raise OutOfRangeError(f"{show(t)} has an infinite exponent")
    return e[1]


class OmegaStarSum:
    """``sum_{i in w*} w**a_i``; block ``i`` holds the tuples below ``<a_i>``.

    The last exponent repeats forever.  Codes are ``(i, tuple)``.
    """

    def __init__(self, exps: Sequence[int]):
        if not exps:
            raise DomainError("need at least one term")
        self.exps = list(exps)

    def exp(self, i):
        return self.exps[min(i, len(self.exps) - 1)]

    def block(self, i) -> Presentation:
        return segment_of(CnfSeq(Omega(), (self.exp(i),)))

    def compare(self, a, b) -> int:
        if a[0] != b[0]:
            return -1 if a[0] > b[0] else 1
        return lex_compare_with(_int_cmp, a[1], b[1])

    def contains(self, code) -> bool:
        return (isinstance(code, tuple) and len(code) == 2 and type(code[0]) is int
                and code[0] >= 0 and self.block(code[0]).contains(code[1]))

    def window(self, seg: SumSegment, width: int, name="L") -> Presentation:
        """Points of ``seg`` within blocks ``seg.block .. seg.block + width``."""
        lo = seg.block
        first = self.block(lo) if seg.bound is None else segment_of(CnfSeq(Omega(), seg.bound))
        blocks = [(lo, first)] + [(i, self.block(i)) for i in range(lo + 1, lo + width + 1)]

        def source():
            its = [(i, iter(b.points())) for i, b in blocks]
            while its:
                alive = []
                for i, it in its:
                    for p in it:
                        yield (i, p)
                        alive.append((i, it))
                        break
                its = alive

        def contains(code):
            return self.contains(code) and seg.contains(code)
        return Presentation(self.compare, contains, source, name=name)

    def segment(self, seg: SumSegment, name="L0") -> Presentation:
        def contains(code):
            return self.contains(code) and seg.contains(code)
        return Presentation(self.compare, contains, lambda: iter(()), name=name)


@dataclass
class FraisseResult:
    i: int
    j: int
    witness: EmbeddingWitness
    reduced: bool

    def to_json(self):
        return {"i": self.i, "j": self.j, "reduced": self.reduced,
                "witness": self.witness.to_json()}


def _refute_self_embedding(sigma, g, target, budget, what):
    res = check_no_segment_self_embedding(sigma, g, target, budget)
    pair = res.pair
    if pair is None and res.trace is not None:
        pair = (res.trace.terminal.get("point"),)
    raise ViolationError(f"{what} embeds into a proper initial segment of itself", pair)


def fraisse_extract(terms: Sequence[OrderTerm], f: Callable, source: SumSegment,
                    target: SumSegment, budget: int = DEFAULT_BUDGET,
                    sample: int = 60, width: int = 4, probes: int = 32) -> FraisseResult:
    """Indices ``i < j`` and a witness ``X_i -> X_j`` from an embedding ``f``
    of the initial segment ``source`` into the shorter ``target``.

    Conventions: ``source`` consists of the blocks above ``j`` plus ``I``
    inside ``X_j``.  If the least point of ``I`` already maps into a block
    above ``j`` (always so when ``target`` lies inside those blocks) then
    ``X_{j+1}`` maps below it, and the last block ``i* >= j+2`` it reaches
    receives a final segment ``s + X_{j+1}``; ``tau -> f(s + tau)`` is the
    witness for ``(j+1, i*)``.  The remaining cases would make ``X_j`` or
    ``X_{j+1}`` embed into a proper initial segment of itself, which is
    refuted explicitly.
    """
    exps = [block_exponent(t) for t in terms]
    order = OmegaStarSum(exps)
    j = source.block
    if not order.contains((j, ())):
        raise DomainError("source block is empty")
    if source.bound is not None and not order.block(j).contains(source.bound):
        raise DomainError("source bound is not a point of its block")
    if (target.block, target.bound) == (source.block, source.bound) or \
            target.block < j or (target.block == j and (
                source.bound is not None and (target.bound is None or
                                              not _lt(target.bound, source.bound)))):
        raise DomainError("target must be a shorter initial segment")
    w = f if isinstance(f, EmbeddingWitness) else rule("candidate", f)
    dom = order.window(source, width)
    cod = order.segment(target)
    try:
        v = verify_embedding(w, dom, cod, sample)
    except WitnessInvalid as e:
        raise ViolationError(f"range escapes the target: {e}") from None
    if not v:
        raise ViolationError("f is not order preserving", v.pair)

    first = w((j, ()))
    reduced = target.block == j
    if first[0] == j:
        # all of I lands inside X_j below target.bound
        bound = (order.exp(j),) if source.bound is None else source.bound
        _refute_self_embedding(CnfSeq(Omega(), bound),
                               lambda tau: _project(w((j, tau)), j, (j, tau)),
                               target.bound, budget, f"block {j}")

    nxt = j + 1
    a = order.exp(nxt)
    cofinal = [()] if a == 0 else [(a - 1,) * k for k in range(probes)]
    hits = [w((nxt, c))[0] for c in cofinal]
    best = min(hits)
    s = cofinal[hits.index(best)]
    blocks = order.block(nxt)
    for _ in range(probes):
        if best == nxt:
            _refute_self_embedding(
                CnfSeq(Omega(), (a,)),
                lambda tau, s=s: _project(w((nxt, _add(s, tau))), nxt, (nxt, _add(s, tau))),
                first[1], budget, f"a final segment of block {nxt}")
        lower = None
        for tau in blocks.prefix(sample):
            b = w((nxt, _add(s, tau)))[0]
            if b < best:
                lower = (b, _add(s, tau))
                break
        if lower is None:
            break
        best, s = lower
    else:
        raise BudgetError("block images did not stabilise")

    def fn(tau, s=s, best=best):
        code = w((nxt, _add(s, tau)))
        if code[0] != best:
            raise IncompleteWitness(f"{list(tau)} leaves block {best}")
        return code[1]

    wit = rule("fraisseProjection", fn, blocks, order.block(best),
               source=nxt, target=best, offset=s)
    check = verify_embedding(wit, sample_size=sample)
    if not check:
        raise ViolationError("extracted map is not order preserving", check.pair)
    return FraisseResult(nxt, best, wit, reduced)


def _project(code, block, src):
    if code[0] != block:
        raise ViolationError(f"{src!r} maps outside block {block}", (src, code))
    return code[1]


# -- candidate maps into proper initial segments -----------------------------

@dataclass(frozen=True)
class Candidate:
    """A claimed embedding of ``W[sigma]`` below ``target`` (base w)."""
    family: str
    params: dict
    fn: Callable = field(compare=False, repr=False)
    target: tuple = ()

    def to_json(self):
        return {"family": self.family, "params": jsonable(dict(sorted(self.params.items()))),
                "target": jsonable(self.target)}


def _collapse(sigma, rng):
    seg = segment_of(sigma)
    pts = seg.prefix(rng.randint(2, 30))
    s0 = max(pts[1:], key=lambda p: (len(p), p)) if len(pts) > 1 else None
    s0 = next(p for p in pts if p and _lt(p, sigma.entries)) if s0 is None else s0
    if not s0:
        s0 = next(p for p in seg.points() if p)
    q = s0[:-1]
    return "collapse", {"point": q}, (lambda p: p if _lt(p, s0) else q), s0


def _scramble(sigma, rng):
    seg = segment_of(sigma)
    pts = seg.prefix(400)
    s0 = rng.choice([p for p in pts[:50] if p])
    below = [p for p in pts if _lt(p, s0)]
    index = {p: k for k, p in enumerate(pts)}
    c, d = rng.randint(2, 7), rng.randint(0, 9)
    n = len(below)

    def fn(p):
        k = index.get(p, len(p))
        return below[(k * c + d) % n]
    return "scramble", {"mult": c, "offset": d}, fn, s0


def _squash(sigma, rng):
    """``w**x -> w**(x-1) * n``: the top ``n - 1`` copies of ``w**(x-1)`` stay
    put and the rest are stacked into the last copy ``K`` apart."""
    x = sigma.entries[0]
    n, K = rng.randint(1, 4), rng.randint(1, 300)

    def fn(p):
        a = next((k for k, e in enumerate(p) if e < x - 1), len(p))
        if a < n - 1 or x == 1:
            return p if x > 1 else (0,) * min(len(p), n - 1)
        extra = K * (a - n + 1)
        return (x - 1,) * (n - 1) + (x - 2,) * extra + p[a:]
    return "squash", {"copies": n, "gap": K}, fn, (x - 1,) * n if x > 1 else (0,) * n


def _append_cap(sigma, rng):
    """``p -> p + <0^c>`` below the top point, which goes to a long run."""
    top = sigma.entries[:-1]
    c, N = rng.randint(1, 5), rng.randint(1, 500)
    lower = top[:-1] + (top[-1] - 1,) * N

    def fn(p):
        return lower if p == top else p + (0,) * c
    return "appendCap", {"shift": c, "cap": N}, fn, top


FAMILIES = {"collapse": _collapse, "scramble": _scramble, "squash": _squash,
            "appendCap": _append_cap}


def applicable_families(sigma: CnfSeq) -> List[str]:
    if sigma.base != Omega():
        raise DomainError("candidate maps are generated over base w only")
    ent = sigma.entries
    if not ent:
        return []
    out = ["collapse", "scramble"]
    if len(ent) == 1 and ent[0] >= 1:
        out.append("squash")
    if len(ent) >= 2 and ent[-1] == 0 and ent[-2] >= 1:
        out.append("appendCap")
    return out


def candidate(sigma: CnfSeq, family: str, seed: int = 0) -> Candidate:
    import random
    if family not in applicable_families(sigma):
        raise DomainError(f"family {family!r} does not apply to {list(sigma.entries)}")
    name, params, fn, target = FAMILIES[family](sigma, random.Random(seed))
    return Candidate(name, {**params, "seed": seed}, fn, tuple(target))


def candidate_maps(sigma: CnfSeq, count: int = 50, seed: int = 0) -> List[Candidate]:
    """``count`` candidates cycling through the applicable families."""
    fams = applicable_families(sigma)
    return [candidate(sigma, fams[k % len(fams)], seed * 1000 + k) for k in range(count)]
