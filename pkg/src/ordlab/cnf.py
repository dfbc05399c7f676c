"""Cantor normal forms as elements of ``W(X)``.

A :class:`CnfSeq` over a base order ``X`` is a non-increasing finite
sequence ``<x_0, ..., x_{n-1}>`` of points of ``X``.  It names the initial
segment of ``W(X)`` below it, which has order type
``w**x_0 + ... + w**x_{n-1}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainError, OutOfRangeError
from .presentation import (Presentation, denote, lex_compare_with,
                           omega_exp_source)
from .terms import Empty, Fin, Omega, OmegaExp, OrderTerm, Rev, Sum, parse, show, size

#: base order ``w + 1``; its top point ``(1, 0)`` stands for the exponent w
OMEGA_PLUS_ONE = Sum(Omega(), Fin(1))


@dataclass(frozen=True)
class RawSeq:
    base: OrderTerm
    entries: Tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        p = denote(self.base)
        for e in self.entries:
            p.check(e)


@dataclass(frozen=True)
class CnfSeq:
    base: OrderTerm
    entries: Tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        p = denote(self.base)
        for e in self.entries:
            p.check(e)
        for a, b in zip(self.entries, self.entries[1:]):
            if p.compare(a, b) < 0:
                raise DomainError(f"entries must be non-increasing: {a!r} < {b!r}")

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return f"{list_repr(self.entries)} over {show(self.base)}"

    def to_json(self):
        return {"base": show(self.base), "entries": _jsonable(self.entries)}

    def prefix(self, j: int) -> "CnfSeq":
        return CnfSeq(self.base, self.entries[:j])


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _tupled(x):
    if isinstance(x, list):
        return tuple(_tupled(y) for y in x)
    return x


def list_repr(entries) -> str:
    return json.dumps(_jsonable(tuple(entries)), separators=(",", ":"))


def parse_seq(src: str, base) -> CnfSeq:
    """Parse the textual form ``[a,b,c]`` (entries are JSON values)."""
    if isinstance(base, str):
        base = parse(base)
    try:
        data = json.loads(src)
    except json.JSONDecodeError as e:
        raise DomainError(f"bad sequence {src!r}: {e}") from None
    if not isinstance(data, list):
        raise DomainError("a sequence must be a JSON list")
    return CnfSeq(base, _tupled(data))


def from_json(obj) -> CnfSeq:
    return CnfSeq(parse(obj["base"]), _tupled(obj["entries"]))


def _same_base(sigma, tau):
    if sigma.base != tau.base:
        raise DomainError(f"bases differ: {show(sigma.base)} vs {show(tau.base)}")


def lex_compare(sigma: CnfSeq, tau: CnfSeq) -> int:
    _same_base(sigma, tau)
    return lex_compare_with(denote(sigma.base).compare, sigma.entries, tau.entries)


def cnf_add(sigma: CnfSeq, tau: CnfSeq) -> CnfSeq:
    """Ordinal sum: keep sigma's entries up to the first one below tau's head."""
    _same_base(sigma, tau)
    if not tau.entries:
        return sigma
    p = denote(sigma.base)
    i = len(sigma.entries)
    for k, s in enumerate(sigma.entries):
        if p.compare(s, tau.entries[0]) < 0:
            i = k
            break
    return CnfSeq(sigma.base, sigma.entries[:i] + tau.entries)


def omega_power_times(base: OrderTerm, x, n: int) -> CnfSeq:
    """``w**x * n``, the constant sequence of length n."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return CnfSeq(base, (x,) * n)


def normalize(raw: RawSeq) -> CnfSeq:
    """Delete every entry that is smaller than some later entry."""
    p = denote(raw.base)
    kept = []
    for e in raw.entries:
        while kept and p.compare(kept[-1], e) < 0:
            kept.pop()
        kept.append(e)
    return CnfSeq(raw.base, tuple(kept))


def segment_of(sigma: CnfSeq) -> Presentation:
    """Presentation of the initial segment of ``W(base)`` strictly below sigma.

    The segment splits into pieces ``sigma[:j] + mu`` with ``mu`` ranging
    over ``W`` of the base points below ``sigma[j]``; the pieces are
    enumerated round-robin.
    """
    base = denote(sigma.base)
    whole = denote(OmegaExp(sigma.base))
    ent = sigma.entries
    pieces = []
    for j, c in enumerate(ent):
        sub = base.below(c)
        pieces.append((ent[:j], omega_exp_source(sub), sub.size == 0))

    def source():
        its = [(pre, iter(src())) for pre, src, _ in pieces]
        while its:
            alive = []
            for pre, it in its:
                try:
                    yield pre + next(it)
                except StopIteration:
                    continue
                alive.append((pre, it))
            its = alive

    n = len(ent) if all(fin for _, _, fin in pieces) else None
    return Presentation(
        whole._compare,
        lambda a: whole.contains(a) and lex_compare_with(base.compare, a, ent) < 0,
        source, n, name=f"W({show(sigma.base)})<{list_repr(ent)}")


def sum_of_powers(raw: RawSeq) -> Presentation:
    """The ordered sum of the segments ``w**raw_i``; codes are ``(i, point)``."""
    from .presentation import sum_presentation
    parts = [segment_of(CnfSeq(raw.base, (e,))) for e in raw.entries]
    return sum_presentation(parts, name=f"sum{list_repr(raw.entries)}")


def sum_to_segment_map(raw: RawSeq):
    """Explicit isomorphism from ``sum_of_powers(raw)`` onto ``segment_of(normalize(raw))``."""
    partial = [normalize(RawSeq(raw.base, raw.entries[:i])) for i in range(len(raw.entries) + 1)]

    def f(code):
        i, mu = code
        return cnf_add(partial[i], CnfSeq(raw.base, mu)).entries
    return f


# -- structural CNF of well-order terms -------------------------------------

def _top(k):
    return (0, k)


OMEGA_TAG = (1, 0)


def structural_cnf(t: OrderTerm) -> CnfSeq:
    """CNF of a well-order term by direct recursion over its syntax.

    The result lives over ``w + 1`` so that the exponent w is expressible;
    terms needing larger exponents raise OutOfRangeError.
    """
    b = OMEGA_PLUS_ONE
    if isinstance(t, Empty):
        return CnfSeq(b, ())
    if isinstance(t, Fin):
        return CnfSeq(b, (_top(0),) * t.n)
    if isinstance(t, Omega):
        return CnfSeq(b, (_top(1),))
    if isinstance(t, Rev):
        return _reversed_cnf(t.t)
    if isinstance(t, Sum):
        return cnf_add(structural_cnf(t.left), structural_cnf(t.right))
    if isinstance(t, OmegaExp):
        e = structural_cnf(t.t).entries
        if all(x == _top(0) for x in e):
            return CnfSeq(b, (_top(len(e)),))
        if e == (_top(1),):
            return CnfSeq(b, (OMEGA_TAG,))
        raise OutOfRangeError(f"exponent of {show(t)} exceeds w")
    raise DomainError(f"{show(t)} is not a well order")


def _reversed_cnf(t: OrderTerm) -> CnfSeq:
    """CNF of ``rev(t)`` for a conversely well-founded ``t``."""
    b = OMEGA_PLUS_ONE
    if isinstance(t, Empty):
        return CnfSeq(b, ())
    if isinstance(t, Fin):
        return CnfSeq(b, (_top(0),) * t.n)
    if isinstance(t, Rev):
        return structural_cnf(t.t)
    if isinstance(t, Sum):
        return cnf_add(_reversed_cnf(t.right), _reversed_cnf(t.left))
    if isinstance(t, OmegaExp) and size(t.t) == 0:
        return CnfSeq(b, (_top(0),))
    raise DomainError(f"rev({show(t)}) is not a well order")


def simplify_base(sigma: CnfSeq) -> CnfSeq:
    """Re-express a sequence over ``w + 1`` over ``w`` when w does not occur."""
    if sigma.base == OMEGA_PLUS_ONE and OMEGA_TAG not in sigma.entries:
        return CnfSeq(Omega(), tuple(k for _, k in sigma.entries))
    return sigma


def exponent_tags(sigma: CnfSeq):
    """Entries as naturals, with ``'w'`` for the exponent w (bases w and w+1)."""
    if sigma.base == Omega():
        return list(sigma.entries)
    if sigma.base == OMEGA_PLUS_ONE:
        return ["w" if e == OMEGA_TAG else e[1] for e in sigma.entries]
    raise DomainError("exponent tags need base w or w+1")
