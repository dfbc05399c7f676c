"""Enumerative presentations of term-denoted orders.

Point codes are canonical Python values:

* ``Fin(n)`` and ``w``: the integers ``0, 1, ...``;
* ``q``: dyadic rationals in the open unit interval, coded as tuples of
  bits ``(b_1, ..., b_k)`` with ``b_k == 1`` and value ``sum b_i 2**-i``;
  enumerated by length, then lexicographically;
* ``rev(t)``: codes of ``t``;
* ``a + b``: ``(0, x)`` for ``x`` in ``a`` and ``(1, y)`` for ``y`` in ``b``;
* ``W(t)``: tuples of codes of ``t``, non-increasing in ``t``.

``W(t)`` is enumerated through integer partitions: a multiset of
enumeration indices ``{i_1, ..., i_k}`` of ``t`` corresponds to the
partition ``(i_1 + 1) + ... + (i_k + 1)``, and partitions are listed by
weight.  The dyadic coding gives a countable dense order without
endpoints, hence an order isomorphic to the rationals.
"""
from __future__ import annotations

import itertools
from functools import cmp_to_key, lru_cache
from typing import Callable, Iterator, List, Optional

from .errors import DomainError, UnsupportedPresentation
from .terms import Empty, Fin, Omega, OmegaExp, OrderTerm, Rationals, Rev, Sum, size

LESS, EQUAL, GREATER = -1, 0, 1


def _sign(x):
    return (x > 0) - (x < 0)


class Presentation:
    """A countable linear order given by comparison plus enumeration.

    ``source`` returns a fresh iterator over all codes without repetition.
    ``size`` is the number of points, or None when infinite; it must be
    set whenever the order is finite, otherwise ``prefix`` could search
    forever for points that do not exist.
    """

    def __init__(self, compare, contains, source, size=None, *, term=None,
                 interval_finite=None, count_below=None, name=""):
        self._compare = compare
        self._contains = contains
        self._source = source
        self.size = size
        self.term = term
        self._interval_finite = interval_finite
        self._count_below = count_below
        self.name = name
        self._cache: List = []
        self._iter: Optional[Iterator] = None
        self._done = False

    def __repr__(self):
        return f"Presentation({self.name or '?'})"

    def contains(self, a) -> bool:
        try:
            return bool(self._contains(a))
        except (TypeError, IndexError, ValueError):
            return False

    def check(self, a):
        if not self.contains(a):
            raise DomainError(f"{a!r} is not a point of {self.name or 'the order'}")

    def compare(self, a, b) -> int:
        if a == b:
            return EQUAL
        return _sign(self._compare(a, b))

    def less(self, a, b) -> bool:
        return self.compare(a, b) < 0

    def _fill(self, n):
        if self._iter is None:
            self._iter = iter(self._source())
        limit = n if self.size is None else min(n, self.size)
        while len(self._cache) < limit and not self._done:
            try:
                self._cache.append(next(self._iter))
            except StopIteration:
                self._done = True

    def prefix(self, n: int) -> list:
        """The first ``n`` enumerated codes (all of them if fewer exist)."""
        self._fill(n)
        return self._cache[:n]

    def point(self, i: int):
        self._fill(i + 1)
        if i >= len(self._cache):
            raise IndexError(i)
        return self._cache[i]

    def points(self) -> Iterator:
        i = 0
        while True:
            try:
                yield self.point(i)
            except IndexError:
                return
            i += 1

    def index_of(self, a, limit: Optional[int] = None) -> int:
        self.check(a)
        for i, p in enumerate(self.points()):
            if p == a:
                return i
            if limit is not None and i >= limit:
                break
        raise DomainError(f"{a!r} not enumerated within {limit} steps")

    def sort(self, pts) -> list:
        return sorted(pts, key=cmp_to_key(self.compare))

    def interval_finite(self, a, b) -> bool:
        if self._interval_finite is None:
            raise UnsupportedPresentation(f"{self.name}: no interval oracle")
        self.check(a)
        self.check(b)
        if self.compare(a, b) > 0:
            a, b = b, a
        return self._interval_finite(a, b)

    def restrict(self, pred: Callable, size: Optional[int] = None, name=None):
        """Sub-presentation of the points satisfying ``pred``."""
        if size is None and self.size is not None:
            size = sum(1 for p in self.points() if pred(p))
        return Presentation(
            self._compare,
            lambda a: self.contains(a) and pred(a),
            lambda: (p for p in self.points() if pred(p)),
            size,
            name=name or f"{self.name}|restricted",
        )

    def below(self, x):
        """The proper initial segment of points strictly below ``x``."""
        self.check(x)
        n = None
        if self._count_below is not None:
            n = self._count_below(x)
        elif self.size is not None:
            n = sum(1 for p in self.points() if self.less(p, x))
        return self.restrict(lambda p: self.less(p, x), size=n,
                             name=f"{self.name}<{x!r}")


# -- dyadic rationals -----------------------------------------------------

def dyadic_compare(a, b) -> int:
    n = max(len(a), len(b))
    pa = tuple(a) + (0,) * (n - len(a))
    pb = tuple(b) + (0,) * (n - len(b))
    return (pa > pb) - (pa < pb)


def is_dyadic(a) -> bool:
    return (isinstance(a, tuple) and len(a) > 0 and a[-1] == 1
            and all(type(x) is int and x in (0, 1) for x in a))


def dyadic_points() -> Iterator[tuple]:
    for k in itertools.count(1):
        for head in itertools.product((0, 1), repeat=k - 1):
            yield head + (1,)


def dyadic_value(a):
    from fractions import Fraction
    return sum((Fraction(b, 2 ** (i + 1)) for i, b in enumerate(a)), Fraction(0))


def dyadic_from_value(f) -> tuple:
    """Inverse of ``dyadic_value`` on dyadic fractions in (0, 1)."""
    bits = []
    while f:
        f *= 2
        bit = int(f >= 1)
        bits.append(bit)
        f -= bit
    return tuple(bits)


# -- partitions for W(t) --------------------------------------------------

def _greedy(rest: int, cap: int) -> list:
    q, r = divmod(rest, cap)
    return [cap] * q + ([r] if r else [])


def _partitions(w: int, max_part: Optional[int]) -> Iterator[tuple]:
    """Partitions of ``w`` with parts at most ``max_part``, in reverse
    lexicographic order (largest first part first)."""
    cap = w if max_part is None else min(w, max_part)
    if w == 0:
        yield ()
        return
    if cap <= 0:
        return
    part = _greedy(w, cap)
    while True:
        yield tuple(part)
        # drop trailing ones, lower the last larger part, refill greedily
        ones = 0
        while part and part[-1] == 1:
            part.pop()
            ones += 1
        if not part:
            return
        v = part.pop() - 1
        part += _greedy(ones + v + 1, v)


def omega_exp_source(inner: Presentation):
    """Enumeration of non-increasing tuples over ``inner``."""
    desc = cmp_to_key(lambda a, b: inner.compare(b, a))

    def gen():
        if inner.size == 0:
            yield ()
            return
        for w in itertools.count(0):
            for part in _partitions(w, inner.size):
                pts = [inner.point(p - 1) for p in part]
                yield tuple(sorted(pts, key=desc))

    return gen


def lex_compare_with(cmp, a: tuple, b: tuple) -> int:
    for x, y in zip(a, b):
        if x != y:
            c = cmp(x, y)
            if c:
                return c
    return (len(a) > len(b)) - (len(a) < len(b))


def omega_exp_contains(inner: Presentation, a) -> bool:
    if not isinstance(a, tuple):
        return False
    if not all(inner.contains(x) for x in a):
        return False
    return all(inner.compare(a[i], a[i + 1]) >= 0 for i in range(len(a) - 1))


def _interleave(*sources):
    its = [iter(s()) for s in sources]
    while its:
        alive = []
        for it in its:
            try:
                yield next(it)
            except StopIteration:
                continue
            alive.append(it)
        its = alive


# -- term structure queries -------------------------------------------------

def has_below(t: OrderTerm, a) -> bool:
    if isinstance(t, (Fin, Omega)):
        return a > 0
    if isinstance(t, Rationals):
        return True
    if isinstance(t, Rev):
        return has_above(t.t, a)
    if isinstance(t, Sum):
        side, x = a
        if side == 0:
            return has_below(t.left, x)
        return size(t.left) != 0 or has_below(t.right, x)
    if isinstance(t, OmegaExp):
        return a != ()
    raise DomainError(f"no points in {t!r}")


def has_above(t: OrderTerm, a) -> bool:
    if isinstance(t, Fin):
        return a < t.n - 1
    if isinstance(t, (Omega, Rationals)):
        return True
    if isinstance(t, Rev):
        return has_below(t.t, a)
    if isinstance(t, Sum):
        side, x = a
        if side == 0:
            return has_above(t.left, x) or size(t.right) != 0
        return has_above(t.right, x)
    if isinstance(t, OmegaExp):
        return size(t.t) != 0
    raise DomainError(f"no points in {t!r}")


def below_finite(t: OrderTerm, a) -> bool:
    """Whether only finitely many points lie strictly below ``a``."""
    if isinstance(t, (Fin, Omega)):
        return True
    if isinstance(t, Rationals):
        return False
    if isinstance(t, Rev):
        return above_finite(t.t, a)
    if isinstance(t, Sum):
        side, x = a
        if side == 0:
            return below_finite(t.left, x)
        return size(t.left) is not None and below_finite(t.right, x)
    if isinstance(t, OmegaExp):
        return not any(has_below(t.t, c) for c in a)
    raise DomainError(f"no points in {t!r}")


def above_finite(t: OrderTerm, a) -> bool:
    if isinstance(t, Fin):
        return True
    if isinstance(t, (Omega, Rationals)):
        return False
    if isinstance(t, Rev):
        return below_finite(t.t, a)
    if isinstance(t, Sum):
        side, x = a
        if side == 0:
            return above_finite(t.left, x) and size(t.right) is not None
        return above_finite(t.right, x)
    if isinstance(t, OmegaExp):
        return size(t.t) == 0
    raise DomainError(f"no points in {t!r}")


def count_below(t: OrderTerm, a) -> Optional[int]:
    """Number of points strictly below ``a``; None when infinite."""
    if not below_finite(t, a):
        return None
    if isinstance(t, (Fin, Omega)):
        return a
    if isinstance(t, Rev):
        return count_above(t.t, a)
    if isinstance(t, Sum):
        side, x = a
        if side == 0:
            return count_below(t.left, x)
        return size(t.left) + count_below(t.right, x)
    if isinstance(t, OmegaExp):
        # every entry is the minimum, so only the proper prefixes lie below
        return len(a)
    raise DomainError(f"no points in {t!r}")


def count_above(t: OrderTerm, a) -> Optional[int]:
    if not above_finite(t, a):
        return None
    if isinstance(t, Fin):
        return t.n - 1 - a
    if isinstance(t, Rev):
        return count_below(t.t, a)
    if isinstance(t, Sum):
        side, x = a
        if side == 0:
            return count_above(t.left, x) + size(t.right)
        return count_above(t.right, x)
    if isinstance(t, OmegaExp):
        return 0
    raise DomainError(f"no points in {t!r}")


def interval_finite(t: OrderTerm, a, b) -> bool:
    """Whether the open interval between ``a < b`` is finite."""
    if isinstance(t, (Fin, Omega)):
        return True
    if isinstance(t, Rationals):
        return False
    if isinstance(t, Rev):
        return interval_finite(t.t, b, a)
    if isinstance(t, Sum):
        (sa, x), (sb, y) = a, b
        if sa == sb:
            return interval_finite(t.left if sa == 0 else t.right, x, y)
        return above_finite(t.left, x) and below_finite(t.right, y)
    if isinstance(t, OmegaExp):
        k = len(a)
        if b[:k] != a:
            # a and b differ at some position: a + <last entry>^m lies between
            return False
        return not any(has_below(t.t, c) for c in b[k:])
    raise DomainError(f"no points in {t!r}")


def _term_compare(t: OrderTerm):
    if isinstance(t, (Fin, Omega)):
        return lambda a, b: (a > b) - (a < b)
    if isinstance(t, Rationals):
        return dyadic_compare
    if isinstance(t, Rev):
        inner = denote(t.t)
        return lambda a, b: inner.compare(b, a)
    if isinstance(t, Sum):
        left, right = denote(t.left), denote(t.right)

        def cmp(a, b):
            if a[0] != b[0]:
                return -1 if a[0] < b[0] else 1
            return (left if a[0] == 0 else right).compare(a[1], b[1])
        return cmp
    if isinstance(t, OmegaExp):
        inner = denote(t.t)
        return lambda a, b: lex_compare_with(inner.compare, a, b)
    return lambda a, b: 0


def _term_contains(t: OrderTerm):
    if isinstance(t, Empty):
        return lambda a: False
    if isinstance(t, Fin):
        return lambda a: type(a) is int and 0 <= a < t.n
    if isinstance(t, Omega):
        return lambda a: type(a) is int and a >= 0
    if isinstance(t, Rationals):
        return is_dyadic
    if isinstance(t, Rev):
        return denote(t.t).contains
    if isinstance(t, Sum):
        left, right = denote(t.left), denote(t.right)
        return lambda a: (isinstance(a, tuple) and len(a) == 2
                          and a[0] in (0, 1) and type(a[0]) is int
                          and (left if a[0] == 0 else right).contains(a[1]))
    if isinstance(t, OmegaExp):
        inner = denote(t.t)
        return lambda a: omega_exp_contains(inner, a)
    raise TypeError(t)


def _term_source(t: OrderTerm):
    if isinstance(t, Empty):
        return lambda: iter(())
    if isinstance(t, Fin):
        return lambda: iter(range(t.n))
    if isinstance(t, Omega):
        return lambda: itertools.count()
    if isinstance(t, Rationals):
        return dyadic_points
    if isinstance(t, Rev):
        return denote(t.t).points
    if isinstance(t, Sum):
        left, right = denote(t.left), denote(t.right)
        return lambda: _interleave(lambda: ((0, x) for x in left.points()),
                                   lambda: ((1, y) for y in right.points()))
    if isinstance(t, OmegaExp):
        return omega_exp_source(denote(t.t))
    raise TypeError(t)


@lru_cache(maxsize=None)
def denote(t: OrderTerm) -> Presentation:
    """Presentation of the order denoted by ``t`` (memoized per term)."""
    from .terms import show
    return Presentation(
        _term_compare(t), _term_contains(t), _term_source(t), size(t),
        term=t,
        interval_finite=lambda a, b: interval_finite(t, a, b),
        count_below=lambda a: count_below(t, a),
        name=show(t),
    )


def compare_points(p: Presentation, a, b) -> int:
    """-1, 0 or 1; raises DomainError on codes that are not points of ``p``."""
    p.check(a)
    p.check(b)
    return p.compare(a, b)


def prefix(p: Presentation, n: int) -> list:
    """First ``n`` enumerated codes, sorted into the order of ``p``."""
    if n < 0:
        raise DomainError("prefix size must be non-negative")
    return p.sort(p.prefix(n))


def sum_presentation(parts: List[Presentation], name="sum") -> Presentation:
    """Ordered sum of presentations; codes are ``(i, x)``."""
    sizes = [q.size for q in parts]
    total = None if any(s is None for s in sizes) else sum(sizes)

    def cmp(a, b):
        if a[0] != b[0]:
            return -1 if a[0] < b[0] else 1
        return parts[a[0]].compare(a[1], b[1])

    def contains(a):
        return (isinstance(a, tuple) and len(a) == 2 and type(a[0]) is int
                and 0 <= a[0] < len(parts) and parts[a[0]].contains(a[1]))

    srcs = [(lambda i=i: ((i, x) for x in parts[i].points())) for i in range(len(parts))]
    return Presentation(cmp, contains, lambda: _interleave(*srcs), total, name=name)


# -- explicit monotone sequences ------------------------------------------

def descending_sequence(t: OrderTerm) -> Optional[Callable[[int], object]]:
    """An index-to-code map of a strictly descending sequence, if one exists."""
    if isinstance(t, Rationals):
        return lambda i: (0,) * i + (1,)
    if isinstance(t, Rev):
        return ascending_sequence(t.t)
    if isinstance(t, Sum):
        d = descending_sequence(t.right)
        if d is not None:
            return lambda i: (1, d(i))
        d = descending_sequence(t.left)
        if d is not None:
            return lambda i: (0, d(i))
        return None
    if isinstance(t, OmegaExp):
        d = descending_sequence(t.t)
        if d is not None:
            return lambda i: (d(i),)
    return None


def ascending_sequence(t: OrderTerm) -> Optional[Callable[[int], object]]:
    if isinstance(t, Omega):
        return lambda i: i
    if isinstance(t, Rationals):
        return lambda i: (1,) * (i + 1)
    if isinstance(t, Rev):
        return descending_sequence(t.t)
    if isinstance(t, Sum):
        d = ascending_sequence(t.right)
        if d is not None:
            return lambda i: (1, d(i))
        d = ascending_sequence(t.left)
        if d is not None:
            return lambda i: (0, d(i))
        return None
    if isinstance(t, OmegaExp):
        if size(t.t) == 0:
            return None
        c = denote(t.t).point(0)
        return lambda i: (c,) * (i + 1)
    return None
