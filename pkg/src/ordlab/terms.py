"""Closed term algebra for countable linear orders.

Grammar (whitespace insignificant, ``+`` left-associative)::

    t ::= 0 | <n> | w | q | rev(t) | W(t) | t + t | (t)

``0`` is the empty order, ``<n>`` a finite chain, ``w`` the naturals,
``q`` the rationals, ``rev`` reversal and ``W(t)`` the order of finite
non-increasing sequences over ``t`` under lexicographic comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import DomainError, TermSyntaxError


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"Fin requires a positive count, got {self.n!r}")


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class Rationals:
    pass


@dataclass(frozen=True)
class Rev:
    t: "OrderTerm"


@dataclass(frozen=True)
class Sum:
    left: "OrderTerm"
    right: "OrderTerm"


@dataclass(frozen=True)
class OmegaExp:
    t: "OrderTerm"


OrderTerm = Union[Empty, Fin, Omega, Rationals, Rev, Sum, OmegaExp]
ATOMS = (Empty, Fin, Omega, Rationals)


def size(t: OrderTerm) -> Optional[int]:
    """Number of points of ``t``, or None when infinite."""
    if isinstance(t, Empty):
        return 0
    if isinstance(t, Fin):
        return t.n
    if isinstance(t, (Omega, Rationals)):
        return None
    if isinstance(t, Rev):
        return size(t.t)
    if isinstance(t, Sum):
        a, b = size(t.left), size(t.right)
        return None if a is None or b is None else a + b
    if isinstance(t, OmegaExp):
        return 1 if size(t.t) == 0 else None
    raise TypeError(t)


def depth(t: OrderTerm) -> int:
    if isinstance(t, (Rev, OmegaExp)):
        return 1 + depth(t.t)
    if isinstance(t, Sum):
        return 1 + max(depth(t.left), depth(t.right))
    return 1


def contains_rationals(t: OrderTerm) -> bool:
    if isinstance(t, Rationals):
        return True
    if isinstance(t, (Rev, OmegaExp)):
        return contains_rationals(t.t)
    if isinstance(t, Sum):
        return contains_rationals(t.left) or contains_rationals(t.right)
    return False


def exp_nesting(t: OrderTerm) -> int:
    """Maximal number of nested ``W`` constructors."""
    if isinstance(t, OmegaExp):
        return 1 + exp_nesting(t.t)
    if isinstance(t, Rev):
        return exp_nesting(t.t)
    if isinstance(t, Sum):
        return max(exp_nesting(t.left), exp_nesting(t.right))
    return 0


# -- printing -------------------------------------------------------------

def show(t: OrderTerm) -> str:
    """Canonical printer; ``parse(show(t)) == t`` for every term."""
    if isinstance(t, Empty):
        return "0"
    if isinstance(t, Fin):
        return str(t.n)
    if isinstance(t, Omega):
        return "w"
    if isinstance(t, Rationals):
        return "q"
    if isinstance(t, Rev):
        return f"rev({show(t.t)})"
    if isinstance(t, OmegaExp):
        return f"W({show(t.t)})"
    if isinstance(t, Sum):
        right = show(t.right)
        if isinstance(t.right, Sum):
            right = f"({right})"
        return f"{show(t.left)} + {right}"
    raise TypeError(t)


def to_json(t: OrderTerm):
    """Tree form used in CLI reports."""
    if isinstance(t, Empty):
        return {"op": "empty"}
    if isinstance(t, Fin):
        return {"op": "fin", "n": t.n}
    if isinstance(t, Omega):
        return {"op": "omega"}
    if isinstance(t, Rationals):
        return {"op": "rationals"}
    if isinstance(t, Rev):
        return {"op": "rev", "arg": to_json(t.t)}
    if isinstance(t, OmegaExp):
        return {"op": "W", "arg": to_json(t.t)}
    return {"op": "sum", "left": to_json(t.left), "right": to_json(t.right)}


# -- parsing --------------------------------------------------------------

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise TermSyntaxError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def expr(self):
        t = self.atom()
        while self.peek() == "+":
            self.pos += 1
            t = Sum(t, self.atom())
        return t

    def atom(self):
        ch = self.peek()
        start = self.pos
        if ch.isdigit():
            while self.pos < len(self.src) and self.src[self.pos].isdigit():
                self.pos += 1
            n = int(self.src[start:self.pos])
            return Empty() if n == 0 else Fin(n)
        if ch == "(":
            self.pos += 1
            t = self.expr()
            self.expect(")")
            return t
        for word, ctor in (("rev", Rev), ("W", OmegaExp)):
            if self.src.startswith(word, self.pos):
                self.pos += len(word)
                self.expect("(")
                if self.peek() == ")":
                    raise TermSyntaxError("empty argument", self.pos)
                t = ctor(self.expr())
                self.expect(")")
                return t
        if ch == "w":
            self.pos += 1
            return Omega()
        if ch == "q":
            self.pos += 1
            return Rationals()
        if not ch:
            raise TermSyntaxError("unexpected end of input", self.pos)
        raise TermSyntaxError(f"unexpected character {ch!r}", self.pos)


def parse(src: str) -> OrderTerm:
    p = _Parser(src)
    t = p.expr()
    if p.peek():
        raise TermSyntaxError(f"trailing input {p.peek()!r}", p.pos)
    return t


# -- classification -------------------------------------------------------

@dataclass(frozen=True)
class OrderClass:
    is_well_order: bool
    is_weak_well_order: bool
    is_scattered: bool


def is_well_order(t: OrderTerm) -> bool:
    if isinstance(t, (Empty, Fin, Omega)):
        return True
    if isinstance(t, Rationals):
        return False
    if isinstance(t, Rev):
        return is_conversely_well_founded(t.t)
    if isinstance(t, Sum):
        return is_well_order(t.left) and is_well_order(t.right)
    if isinstance(t, OmegaExp):
        return is_well_order(t.t)
    raise TypeError(t)


def is_conversely_well_founded(t: OrderTerm) -> bool:
    """No infinite strictly ascending sequence, i.e. ``rev(t)`` is a well order."""
    if isinstance(t, (Empty, Fin)):
        return True
    if isinstance(t, (Omega, Rationals)):
        return False
    if isinstance(t, Rev):
        return is_well_order(t.t)
    if isinstance(t, Sum):
        return is_conversely_well_founded(t.left) and is_conversely_well_founded(t.right)
    if isinstance(t, OmegaExp):
        # <c> < <c,c> < ... ascends as soon as there is a point c
        return size(t.t) == 0
    raise TypeError(t)


def is_scattered(t: OrderTerm) -> bool:
    # W(X) over an ill-founded X contains the dense order of non-empty
    # non-decreasing sequences of naturals, so it is not scattered either.
    if isinstance(t, Rationals):
        return False
    if isinstance(t, OmegaExp):
        return is_scattered(t.t) and is_well_order(t.t)
    if isinstance(t, Rev):
        return is_scattered(t.t)
    if isinstance(t, Sum):
        return is_scattered(t.left) and is_scattered(t.right)
    return True


def classify(t: OrderTerm) -> OrderClass:
    """Classify a term.

    Weak well-orderedness coincides with well-orderedness on this algebra:
    every ill-founded term has an interval that is a reversed infinite order
    or contains a dense order, and each of those carries an explicit
    embedding into a proper initial segment (see ``ordlab.embeddings``).
    """
    wo = is_well_order(t)
    return OrderClass(is_well_order=wo, is_weak_well_order=wo,
                      is_scattered=is_scattered(t))
