"""Textbook ordinals below epsilon_0 and point positions in well-order terms.

An ordinal is a tuple of ``(exponent, coefficient)`` pairs with strictly
decreasing exponents (themselves ordinals) and positive coefficients, read
as ``w**e1 * c1 + w**e2 * c2 + ...``.  ``()`` is zero.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import DomainError
from .terms import Empty, Fin, Omega, OmegaExp, Rev, Sum, size

ZERO = ()
ONE = ((ZERO, 1),)
OMEGA = ((ONE, 1),)


def from_int(n: int):
    return ZERO if n == 0 else ((ZERO, n),)


def power(e):
    """``w ** e``."""
    return ((e, 1),)


def cmp(a, b) -> int:
    for (ea, ca), (eb, cb) in zip(a, b):
        c = cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a) > len(b)) - (len(a) < len(b))


def add(a, b):
    if not b:
        return a
    e, c = b[0]
    keep = [t for t in a if cmp(t[0], e) > 0]
    same = [t for t in a if cmp(t[0], e) == 0]
    if same:
        c += same[0][1]
    return tuple(keep) + ((e, c),) + tuple(b[1:])


def times(a, n: int):
    out = ZERO
    for _ in range(n):
        out = add(out, a)
    return out


def left_sub(a, b):
    """The unique ``g`` with ``a + g == b``; requires ``a <= b``."""
    if cmp(a, b) > 0:
        raise DomainError("left subtraction needs a <= b")
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    if i == len(b):
        return ZERO
    if i < len(a) and cmp(a[i][0], b[i][0]) == 0:
        return ((b[i][0], b[i][1] - a[i][1]),) + tuple(b[i + 1:])
    return tuple(b[i:])


def head(a, beta):
    """Terms with exponent ``>= beta``: the start of the ``w**beta`` block of ``a``."""
    return tuple(t for t in a if cmp(t[0], beta) >= 0)


def is_finite(a) -> bool:
    return all(e == ZERO for e, _ in a)


def to_int(a) -> int:
    if not is_finite(a):
        raise DomainError("ordinal is infinite")
    return a[0][1] if a else 0


def stage_ordinal(stage):
    """Stage tags are naturals or the string ``'w'``."""
    if stage == "w":
        return OMEGA
    return from_int(stage)


# -- positions in well-order terms ---------------------------------------

@lru_cache(maxsize=None)
def otype(t, rev=False):
    """Order type of a well-order term (of ``rev(t)`` when ``rev`` is set)."""
    if isinstance(t, Empty):
        return ZERO
    if isinstance(t, Fin):
        return from_int(t.n)
    if isinstance(t, Omega) and not rev:
        return OMEGA
    if isinstance(t, Rev):
        return otype(t.t, not rev)
    if isinstance(t, Sum):
        if rev:
            return add(otype(t.right, True), otype(t.left, True))
        return add(otype(t.left), otype(t.right))
    if isinstance(t, OmegaExp):
        if rev:
            if size(t.t) == 0:
                return ONE
        else:
            return power(otype(t.t))
    raise DomainError(f"{t!r} is not a well order")


def position(t, a, rev=False):
    """Order type of the set of points strictly below ``a``."""
    from .presentation import count_above, count_below
    if size(t) is not None:
        return from_int(count_above(t, a) if rev else count_below(t, a))
    if isinstance(t, Omega) and not rev:
        return from_int(a)
    if isinstance(t, Rev):
        return position(t.t, a, not rev)
    if isinstance(t, Sum):
        side, x = a
        first = 1 if rev else 0
        if side == first:
            return position(t.right if rev else t.left, x, rev)
        return add(otype(t.right if rev else t.left, rev),
                   position(t.left if rev else t.right, x, rev))
    if isinstance(t, OmegaExp) and not rev:
        out = ZERO
        for c in a:
            out = add(out, power(position(t.t, c)))
        return out
    raise DomainError(f"cannot place {a!r} in {t!r}: not a well order")


def point_at(t, p, rev=False):
    """The point whose position is ``p``; inverse of ``position``."""
    from .presentation import denote
    if cmp(p, otype(t, rev)) >= 0:
        raise DomainError("position beyond the order type")
    if size(t) is not None:
        for x in denote(t).points():
            if position(t, x, rev) == p:
                return x
    if isinstance(t, Omega) and not rev:
        return to_int(p)
    if isinstance(t, Rev):
        return point_at(t.t, p, not rev)
    if isinstance(t, Sum):
        a, b = (t.right, t.left) if rev else (t.left, t.right)
        tags = (1, 0) if rev else (0, 1)
        lt = otype(a, rev)
        if cmp(p, lt) < 0:
            return (tags[0], point_at(a, p, rev))
        return (tags[1], point_at(b, left_sub(lt, p), rev))
    if isinstance(t, OmegaExp) and not rev:
        out = []
        for e, c in p:
            out.extend([point_at(t.t, e)] * c)
        return tuple(out)
    raise DomainError(f"cannot locate position in {t!r}")


def to_exponent_list(a):
    """Exponents of ``a`` with multiplicity, e.g. ``w*2+1 -> [1, 1, 0]``."""
    out = []
    for e, c in a:
        out.extend([e] * c)
    return out
