"""Hausdorff derivatives, rank, and Cantor normal forms obtained from them.

Stage relations are computed on a finite prefix of a presentation, but
every "finitely many classes in between" question is answered exactly from
the term.  Stage 1 uses the term's interval-finiteness oracle directly and
works for every term.  Later stages need a well-order term: two points are
``beta``-neighbours exactly when their positions share the same block
``[w**beta * xi, w**beta * (xi + 1))``, which is what the successor rule
(finitely many ``beta``-classes in between) produces on a well order.

Stages are naturals or the limit tag ``'w'``; nothing beyond w is supported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from . import _ordinal as O
from .cnf import OMEGA_PLUS_ONE, OMEGA_TAG, CnfSeq, RawSeq, lex_compare, normalize, simplify_base
from .errors import DomainError, InternalConsistencyError, OutOfRangeError, UnsupportedPresentation
from .presentation import Presentation, denote
from .terms import classify, is_well_order, show, size

LIMIT = "w"
DEFAULT_PREFIX = 40


@dataclass(frozen=True)
class StageRelation:
    stage: object
    points: tuple
    classes: tuple
    reps: tuple

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, a) -> int:
        for i, c in enumerate(self.classes):
            if a in c:
                return i
        raise DomainError(f"{a!r} is not in the prefix")

    def related(self, a, b) -> bool:
        return self.class_of(a) == self.class_of(b)


@dataclass
class RankResult:
    rank: object
    witness_point: object
    trace: List[dict] = field(default_factory=list)

    def to_json(self):
        return {"rank": self.rank, "witness": _js(self.witness_point), "trace": self.trace}


def _js(x):
    if isinstance(x, tuple):
        return [_js(y) for y in x]
    return x


def _stage_index(stage):
    return stage if stage != LIMIT else float("inf")


def _next_stage(stage):
    if stage == LIMIT:
        raise OutOfRangeError("no stages beyond w")
    return stage + 1


def stage_equiv(t, stage, a, b) -> bool:
    """Exact ``a ~_stage b`` on the order denoted by ``t``."""
    if a == b or stage == 0:
        return a == b
    p = denote(t)
    if stage == 1:
        return p.interval_finite(a, b)
    if not is_well_order(t):
        raise UnsupportedPresentation(
            f"stages above 1 are only decided for well orders, not {show(t)}")
    beta = O.stage_ordinal(stage)
    return O.head(O.position(t, a), beta) == O.head(O.position(t, b), beta)


def _relation(p: Presentation, stage, pts, related) -> StageRelation:
    order = p.sort(pts)
    classes = []
    for x in order:
        if classes and related(classes[-1][-1], x):
            classes[-1].append(x)
        else:
            classes.append([x])
    index = {x: i for i, x in enumerate(pts)}
    reps = tuple(min(c, key=index.__getitem__) for c in classes)
    return StageRelation(stage, tuple(pts), tuple(tuple(c) for c in classes), reps)


def _term_of(p: Presentation):
    if p.term is None:
        raise UnsupportedPresentation(f"{p.name}: no term-level oracle")
    return p.term


def initial_stage(p: Presentation, n: int = DEFAULT_PREFIX) -> StageRelation:
    return _relation(p, 0, p.prefix(n), lambda a, b: False)


def derivative_step(p: Presentation, prev: StageRelation) -> StageRelation:
    """Merge neighbouring classes whose gap meets finitely many ``prev`` classes."""
    t = _term_of(p)
    stage = _next_stage(prev.stage)
    return _relation(p, stage, list(prev.points), lambda a, b: stage_equiv(t, stage, a, b))


def limit_stage(p: Presentation, stages: List[StageRelation], limit=LIMIT) -> StageRelation:
    """Stage w: union of all finite-stage relations on the prefix."""
    if limit != LIMIT:
        raise OutOfRangeError(f"limit stage {limit!r} is not supported; only w")
    if not stages:
        raise DomainError("need the finite stages")
    t = _term_of(p)
    rel = _relation(p, LIMIT, list(stages[0].points),
                    lambda a, b: stage_equiv(t, LIMIT, a, b))
    for s in stages:
        for c in s.classes:
            if len({rel.class_of(x) for x in c}) != 1:
                raise InternalConsistencyError(f"stage {s.stage} not contained in stage w")
    return rel


def stages(t, n: int = DEFAULT_PREFIX, upto: int = 4) -> List[StageRelation]:
    """Stages ``0..upto`` on the first ``n`` points of ``denote(t)``."""
    p = denote(t)
    out = [initial_stage(p, n)]
    for _ in range(upto):
        out.append(derivative_step(p, out[-1]))
    return out


def _single_class(t, stage) -> bool:
    """Whether ``L_stage`` is a singleton, i.e. the type is at most ``w**stage``."""
    return O.cmp(O.otype(t), O.power(O.stage_ordinal(stage))) <= 0


def _check_rankable(t):
    c = classify(t)
    if not c.is_scattered:
        raise DomainError(f"{show(t)} is not scattered")
    if not c.is_well_order:
        raise DomainError(f"rank is computed for well-founded terms; {show(t)} is not")
    if size(t) == 0:
        raise DomainError("the empty order has no Hausdorff rank")


def rank_value(t):
    """Exact Hausdorff rank of a well-order term: a natural or ``'w'``."""
    _check_rankable(t)
    typ = O.otype(t)
    if all(O.is_finite(e) for e, _ in typ):
        r = 0
        while not _single_class(t, r):
            r += 1
        return r
    if _single_class(t, LIMIT):
        return LIMIT
    raise OutOfRangeError(f"rank of {show(t)} exceeds w")


def _trace(p, r, n):
    rels = [initial_stage(p, n)]
    while r == LIMIT or rels[-1].stage < r:
        nxt = derivative_step(p, rels[-1])
        if r == LIMIT and nxt.count == 1:
            break
        rels.append(nxt)
    if r == LIMIT:
        rels.append(limit_stage(p, rels))
    return [{"stage": s.stage, "classes": s.count} for s in rels]


def rank(t, n: int = DEFAULT_PREFIX) -> RankResult:
    """Hausdorff rank (at most w) with a per-stage class-count trace.

    The stopping test is exact; the counts in the trace are taken on the
    first ``n`` points, and the prefix is enlarged while it is too small to
    separate points at some stage below the rank.
    """
    r = rank_value(t)
    p = denote(t)
    while True:
        trace = _trace(p, r, n)
        small = any(s["classes"] <= 1 for s in trace[:-1])
        if not small or (size(t) is not None and n >= size(t)) or n >= 4000:
            break
        n *= 2
    if trace[-1]["classes"] != 1:
        raise InternalConsistencyError("final stage is not a single class on the prefix")
    return RankResult(rank=r, witness_point=p.point(0), trace=trace)


# -- CNF via the stage recursion ------------------------------------------

def _tag(stage):
    return OMEGA_TAG if stage == LIMIT else (0, stage)


def _seq(entries) -> CnfSeq:
    return CnfSeq(OMEGA_PLUS_ONE, tuple(entries))


class _CnfBuilder:
    """Computes, for a stage and a class (given by its least point), the
    sequence sigma with ``N^stage(a)`` isomorphic to the segment below sigma."""

    def __init__(self, t):
        self.t = t
        self.typ = O.otype(t)
        self.memo = {}

    def class_extent(self, start, stage):
        """Order type of the stage-class starting at position ``start``."""
        beta = O.stage_ordinal(stage)
        end = O.add(start, O.power(beta))
        if O.cmp(end, self.typ) > 0:
            end = self.typ
        return O.left_sub(start, end)

    def sigma(self, stage, start) -> CnfSeq:
        key = (stage, start)
        if key not in self.memo:
            self.memo[key] = self._sigma(stage, start)
        return self.memo[key]

    def _sigma(self, stage, start) -> CnfSeq:
        if stage == 0:
            return _seq([(0, 0)])
        if stage == LIMIT:
            return self._limit(start)
        beta = stage - 1
        unit = O.power(O.from_int(beta))
        extent = self.class_extent(start, stage)
        if O.cmp(extent, O.power(O.from_int(stage))) == 0:
            return self._infinite(stage, start, unit)
        # finite M: count the stage-beta blocks making up this class
        m = sum(c for e, c in extent if e == O.from_int(beta))
        partial = any(O.cmp(e, O.from_int(beta)) < 0 for e, _ in extent)
        subs = [self.sigma(beta, O.add(start, O.times(unit, k)))
                for k in range(m + int(partial))]
        tau = tuple(x for s in subs for x in s.entries)
        return normalize(RawSeq(OMEGA_PLUS_ONE, tau))

    def _infinite(self, stage, start, unit) -> CnfSeq:
        # M is infinite; blocks are indexed by w, each of type w**beta
        beta = stage - 1
        blocks = [self.sigma(beta, O.add(start, O.times(unit, k))) for k in range(3)]
        if blocks[1] != blocks[2]:
            raise InternalConsistencyError("blocks of an infinite class differ")
        if _tag(beta) in blocks[1].entries:
            # beta occurs infinitely often: the class is w**(beta+1)
            return _seq([_tag(stage)])
        raise InternalConsistencyError(
            "supremum case reached at a successor stage below w")

    def _limit(self, start) -> CnfSeq:
        # find a finite stage whose class of `start` is an initial segment of the w-class
        i = 1
        while O.head(start, O.from_int(i)) != start:
            i += 1
            if i > 64:
                raise InternalConsistencyError("no initial finite-stage neighbourhood")
        extent = self.class_extent(start, LIMIT)
        if O.cmp(extent, O.power(O.OMEGA)) < 0:
            # the finite-stage neighbourhoods stabilise
            while O.cmp(self.class_extent(start, i), extent) != 0:
                i += 1
            return self.sigma(i, start)
        # glue: the finite-stage sequences form an increasing chain <i>, <i+1>, ...
        chain = [self.sigma(k, start) for k in range(i, i + 3)]
        for k, s in enumerate(chain):
            if s.entries != (_tag(i + k),):
                raise InternalConsistencyError("finite-stage neighbourhoods are not w-powers")
        for a, b in zip(chain, chain[1:]):
            if lex_compare(a, b) >= 0:
                raise InternalConsistencyError("neighbourhood chain is not increasing")
        return _seq([OMEGA_TAG])


def cnf_via_hausdorff(t) -> CnfSeq:
    """Cantor normal form of a well-order term of rank at most w.

    Over base w when every exponent is finite, otherwise over w + 1 whose
    top point stands for the exponent w.
    """
    if not is_well_order(t):
        raise DomainError(f"{show(t)} is not a well order")
    if size(t) == 0:
        return CnfSeq(OMEGA_PLUS_ONE.left, ())
    r = rank_value(t)
    sigma = _CnfBuilder(t).sigma(r, O.ZERO)
    return simplify_base(sigma)
