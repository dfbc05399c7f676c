"""Encoding bounded Sigma^0_2 truth into embeddability of well-order families.

For ``psi(x) = exists u forall v phi(x, u, v)`` on a bounded grid, the
family ``N_i`` is the sum over ``y < 2n`` of ``1 + M_{i,y}``: odd blocks are
copies of w (separators), and the block ``M_{i,2x}`` is a set of naturals
that is finite of size ``max(0, u - i)`` when ``u`` is the least witness of
``psi(x)``, and of type w otherwise.  The primed family has four blocks per
``x``; its block ``4x + 2`` has ``i + u`` points, or type w.

Points are pairs ``(y, k)``: ``k = 0`` is the leading point of block ``y``
and the other ``k`` range over ``M_{i,y}`` (over all positive naturals on
separators).  ``phi`` is read as false at ``v = 0`` for ``u`` beyond the
grid, so a formula without witness on the grid yields blocks of type w.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .embeddings import (EmbeddingWitness, Verification, rule, search_embedding,
                         verify_embedding)
from .errors import DomainError, InternalConsistencyError, ViolationError
from .presentation import Presentation

OMEGA = "w"
SEPARATOR_SAMPLE = 20
SCAN = 32


# -- instances --------------------------------------------------------------

@dataclass(frozen=True)
class Sigma2Instance:
    n: int
    u_bound: int
    v_bound: int
    default: bool = True
    exceptions: tuple = ()  # sorted ((x, u, v), value) pairs differing from default

    def __post_init__(self):
        if self.n < 1 or self.u_bound < 1 or self.v_bound < 1:
            raise DomainError("n and both bounds must be at least 1")
        table = {}
        for (x, u, v), val in self.exceptions:
            if not (0 <= x < self.n and 0 <= u <= self.u_bound and 0 <= v <= self.v_bound):
                raise DomainError(f"phi entry {(x, u, v)} is outside the grid")
            table[(x, u, v)] = bool(val)
        object.__setattr__(self, "exceptions", tuple(sorted(
            (k, v) for k, v in table.items() if v != self.default)))
        object.__setattr__(self, "_table", dict(self.exceptions))

    def phi(self, x, u, v) -> bool:
        if u > self.u_bound:
            return v != 0
        return self._table.get((x, u, v), self.default)

    @classmethod
    def from_function(cls, n, u_bound, v_bound, fn, default=True):
        exc = [((x, u, v), bool(fn(x, u, v)))
               for x in range(n) for u in range(u_bound + 1) for v in range(v_bound + 1)]
        return cls(n, u_bound, v_bound, default, tuple(exc))

    @classmethod
    def from_json(cls, obj):
        try:
            n, ub, vb = int(obj["n"]), int(obj["uBound"]), int(obj["vBound"])
            phi = obj["phi"]
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"malformed instance: {e}") from None
        if isinstance(phi, list):
            entries = [((int(x), int(u), int(v)), bool(b)) for x, u, v, b in phi]
            seen = {k for k, _ in entries}
            missing = [(x, u, v) for x in range(n) for u in range(ub + 1)
                       for v in range(vb + 1) if (x, u, v) not in seen]
            if missing:
                raise DomainError(f"phi table is not total; missing {missing[0]}")
            return cls(n, ub, vb, True, tuple(entries))
        if isinstance(phi, dict):
            entries = [((int(x), int(u), int(v)), bool(b))
                       for x, u, v, b in phi.get("exceptions", [])]
            return cls(n, ub, vb, bool(phi.get("default", True)), tuple(entries))
        raise DomainError("phi must be a list of [x,u,v,bool] or {default, exceptions}")

    @classmethod
    def loads(cls, text: str):
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise DomainError(f"instance is not valid JSON: {e}") from None

    def to_json(self):
        return {"n": self.n, "uBound": self.u_bound, "vBound": self.v_bound,
                "phi": {"default": self.default,
                        "exceptions": [[x, u, v, b] for (x, u, v), b in self.exceptions]}}


def worked_instance() -> Sigma2Instance:
    """n = 2: phi(0, 0, 3) is the only false entry for x = 0, and
    phi(1, u, u) is false for every u."""
    exc = [((0, 0, 3), False)] + [((1, u, u), False) for u in range(9)]
    return Sigma2Instance(2, 8, 8, True, tuple(exc))


@dataclass(frozen=True)
class PsiValue:
    holds: bool
    min_u: Optional[int] = None

    def to_json(self):
        return {"holds": self.holds, "minU": self.min_u}


def brute_force_psi(inst: Sigma2Instance, x: int) -> PsiValue:
    if not 0 <= x < inst.n:
        raise DomainError(f"x must be below {inst.n}")
    for u in range(inst.u_bound + 1):
        if all(inst.phi(x, u, v) for v in range(inst.v_bound + 1)):
            return PsiValue(True, u)
    return PsiValue(False)


# -- the k table ------------------------------------------------------------

@dataclass(frozen=True)
class KRow:
    values: tuple                 # k_x(0), k_x(1), ... while defined, u <= uBound
    undefined_at: Optional[int]   # first u with k_x(u) undefined, if any

    def k(self, u: int) -> Optional[int]:
        if self.undefined_at is not None and u >= self.undefined_at:
            return None
        if u < len(self.values):
            return self.values[u]
        # beyond the grid phi fails at v = 0, so k grows by one per step
        return self.values[-1] + (u - len(self.values) + 1)

    def u_of(self, k: int) -> Optional[int]:
        """The ``u`` with ``k_x(u) == k``, if any (uses ``u <= k_x(u)``)."""
        for u in range(k + 1):
            val = self.k(u)
            if val is None or val > k:
                return None
            if val == k:
                return u
        return None


@dataclass(frozen=True)
class KTable:
    rows: tuple

    def __getitem__(self, x) -> KRow:
        return self.rows[x]

    def to_json(self):
        return [{"values": list(r.values), "undefinedAt": r.undefined_at} for r in self.rows]


def build_k_table(inst: Sigma2Instance) -> KTable:
    rows = []
    for x in range(inst.n):
        values, prev, stop = [], 0, None
        for u in range(inst.u_bound + 1):
            fails = [v for v in range(inst.v_bound + 1) if not inst.phi(x, u, v)]
            if not fails:
                stop = u
                break
            k = max(prev + 1, fails[0])
            values.append(k)
            prev = k
        rows.append(KRow(tuple(values), stop))
    table = KTable(tuple(rows))
    _check_k_table(inst, table)
    return table


def _check_k_table(inst, table):
    for x, row in enumerate(table.rows):
        vals = row.values
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise InternalConsistencyError(f"k_{x} is not strictly increasing")
        if any(u > k for u, k in enumerate(vals)):
            raise InternalConsistencyError(f"k_{x}(u) < u")
        psi = brute_force_psi(inst, x)
        if (row.undefined_at is not None) != psi.holds or \
                (psi.holds and row.undefined_at != psi.min_u):
            raise InternalConsistencyError(f"k_{x} disagrees with the brute-force oracle")


# -- blocks and families ----------------------------------------------------

@dataclass(frozen=True)
class Block:
    """A suborder of the positive naturals: finite or of type w."""
    y: int
    kind: str                       # "code" or "separator"
    finite: Optional[tuple] = None  # the elements when finite
    nth: object = field(default=None, compare=False, repr=False)  # r -> r-th element
    index: object = field(default=None, compare=False, repr=False)  # k -> r or None

    @property
    def size(self):
        return len(self.finite) if self.finite is not None else None

    def element(self, r: int) -> int:
        if self.finite is not None:
            return self.finite[r]
        return self.nth(r)

    def rank(self, k: int) -> Optional[int]:
        if self.finite is not None:
            try:
                return self.finite.index(k)
            except ValueError:
                return None
        return self.index(k)

    def contains(self, k) -> bool:
        return type(k) is int and k >= 1 and self.rank(k) is not None

    def head(self, m: int) -> list:
        if self.finite is not None:
            return list(self.finite[:m])
        return [self.nth(r) for r in range(m)]

    def to_json(self):
        out = {"y": self.y, "kind": self.kind}
        if self.finite is not None:
            out["elements"] = list(self.finite)
            out["type"] = len(self.finite)
        else:
            out["type"] = OMEGA
            out["first"] = self.head(5)
        return out


def _separator(y) -> Block:
    return Block(y, "separator", None, lambda r: r + 1, lambda k: k - 1 if k >= 1 else None)


def _code_block(y, row: KRow, i: int) -> Block:
    """``{k_x(u) : u >= i}``."""
    if row.undefined_at is not None:
        vals = tuple(row.k(u) for u in range(i, row.undefined_at))
        return Block(y, "code", vals)

    def index(k):
        u = row.u_of(k)
        return None if u is None or u < i else u - i
    return Block(y, "code", None, lambda r: row.k(i + r), index)


def _primed_block(y, row: KRow, i: int) -> Block:
    """``{1, ..., i} + {i + k_x(u)}``: type ``i + u`` or w."""
    if row.undefined_at is not None:
        vals = tuple(range(1, i + 1)) + tuple(i + row.k(u) for u in range(row.undefined_at))
        return Block(y, "code", vals)

    def nth(r):
        return r + 1 if r < i else i + row.k(r - i)

    def index(k):
        if 1 <= k <= i:
            return k - 1
        u = row.u_of(k - i) if k > i else None
        return None if u is None else i + u
    return Block(y, "code", None, nth, index)


@dataclass(frozen=True)
class BlockFamily:
    i: int
    primed: bool
    blocks: tuple

    def __len__(self):
        return len(self.blocks)

    def contains(self, code) -> bool:
        if not (isinstance(code, tuple) and len(code) == 2):
            return False
        y, k = code
        if type(y) is not int or not 0 <= y < len(self.blocks):
            return False
        return k == 0 or self.blocks[y].contains(k)

    @staticmethod
    def compare(a, b) -> int:
        return (a > b) - (a < b)

    def presentation(self) -> Presentation:
        def source():
            its = [iter(self._block_points(y)) for y in range(len(self.blocks))]
            while its:
                alive = []
                for it in its:
                    for p in it:
                        yield p
                        alive.append(it)
                        break
                its = alive
        return Presentation(self.compare, self.contains, source,
                            name=f"N{'prime' if self.primed else ''}_{self.i}")

    def _block_points(self, y):
        yield (y, 0)
        b = self.blocks[y]
        r = 0
        while b.size is None or r < b.size:
            yield (y, b.element(r))
            r += 1

    def sample(self, per_block: int = SEPARATOR_SAMPLE) -> list:
        """All points of finite blocks and the first ``per_block`` of the others."""
        out = []
        for y, b in enumerate(self.blocks):
            m = b.size if b.size is not None else per_block
            out.append((y, 0))
            out.extend((y, k) for k in b.head(m))
        return out

    def sample_presentation(self, per_block: int = SEPARATOR_SAMPLE) -> Presentation:
        pts = self.sample(per_block)
        return Presentation(self.compare, self.contains, lambda: iter(pts), len(pts),
                            name=f"sample({'N prime' if self.primed else 'N'}_{self.i})")

    def order_type(self) -> list:
        """Summand types ``1 + M_y`` in order: naturals, or ``'w'``."""
        return [OMEGA if b.size is None else 1 + b.size for b in self.blocks]

    def to_json(self):
        return {"i": self.i, "primed": self.primed,
                "blocks": [b.to_json() for b in self.blocks],
                "summands": self.order_type(),
                "cnf": family_cnf(self)}


def family_cnf(fam: BlockFamily) -> list:
    """Exponents of the Cantor normal form (each entry 0 or 1)."""
    out = []
    for t in fam.order_type():
        if t == OMEGA:
            out = [e for e in out if e >= 1] + [1]
        else:
            out += [0] * t
    return out


def build_family(inst: Sigma2Instance, i: int, table: Optional[KTable] = None) -> BlockFamily:
    if i < 0:
        raise DomainError("family index must be non-negative")
    table = table or build_k_table(inst)
    blocks = []
    for x in range(inst.n):
        blocks.append(_code_block(2 * x, table[x], i))
        blocks.append(_separator(2 * x + 1))
    fam = BlockFamily(i, False, tuple(blocks))
    _check_characterization(inst, fam)
    return fam


def build_family_primed(inst: Sigma2Instance, i: int,
                        table: Optional[KTable] = None) -> BlockFamily:
    if i < 0:
        raise DomainError("family index must be non-negative")
    table = table or build_k_table(inst)
    blocks = []
    for x in range(inst.n):
        blocks.append(_code_block(4 * x, table[x], i))
        blocks.append(_separator(4 * x + 1))
        blocks.append(_primed_block(4 * x + 2, table[x], i))
        blocks.append(_separator(4 * x + 3))
    fam = BlockFamily(i, True, tuple(blocks))
    _check_characterization(inst, fam)
    return fam


def family(inst, i, primed=False, table=None) -> BlockFamily:
    return (build_family_primed if primed else build_family)(inst, i, table)


def expected_sizes(inst: Sigma2Instance, x: int, i: int):
    """Predicted sizes of the coding blocks for ``x``: ``max(0, u - i)`` and
    ``i + u`` when ``psi(x)`` holds with least witness ``u``, else w."""
    psi = brute_force_psi(inst, x)
    if not psi.holds:
        return None, None
    return max(0, psi.min_u - i), i + psi.min_u


def _check_characterization(inst, fam):
    step = 4 if fam.primed else 2
    for x in range(inst.n):
        main, primed = expected_sizes(inst, x, fam.i)
        got = fam.blocks[step * x].size
        if got != main:
            raise InternalConsistencyError(f"block {step * x}: size {got}, expected {main}")
        if fam.primed and fam.blocks[4 * x + 2].size != primed:
            raise InternalConsistencyError(f"block {4 * x + 2} has the wrong type")


def descending_chain_check(inst: Sigma2Instance, up_to: int,
                           sample: int = SEPARATOR_SAMPLE) -> bool:
    """For ``m < k <= up_to``: ``M_{k,2x}`` is contained in ``M_{m,2x}`` and the
    inclusion ``N_k -> N_m`` is an embedding on samples."""
    table = build_k_table(inst)
    fams = [build_family(inst, i, table) for i in range(up_to + 1)]
    for k in range(up_to + 1):
        for m in range(k):
            hi, lo = fams[k], fams[m]
            for y in range(0, len(hi), 2):
                for e in hi.blocks[y].head(hi.blocks[y].size or sample):
                    if not lo.blocks[y].contains(e):
                        raise InternalConsistencyError(
                            f"M_({k},{y}) is not contained in M_({m},{y}): {e}")
            inc = rule("inclusion", lambda a: a, hi.sample_presentation(sample),
                       lo.presentation())
            v = verify_embedding(inc, sample_size=len(hi.sample(sample)))
            if not v:
                raise InternalConsistencyError(f"inclusion N_{k} -> N_{m} fails at {v.pair}")
    return True


# -- the canonical embedding -------------------------------------------------

def _coding_positions(fam: BlockFamily):
    return [y for y, b in enumerate(fam.blocks) if b.kind == "code"]


def construct_embedding(inst: Sigma2Instance, i: int, j: int, primed: bool = False,
                        table: Optional[KTable] = None) -> EmbeddingWitness:
    """Canonical embedding ``N_i -> N_j`` (primed: ``N'_i -> N'_j``).

    Coding blocks map in order; when the source block is longer, its excess
    goes to the start of the next separator (a copy of w, head included),
    and that separator is shifted up by the number of spilled points.
    """
    if primed:
        if i == j:
            raise DomainError("primed embeddings need i != j")
    elif not i < j:
        raise DomainError("unprimed embeddings need i < j")
    table = table or build_k_table(inst)
    src = family(inst, i, primed, table)
    tgt = family(inst, j, primed, table)
    spill = {}
    for y in _coding_positions(src):
        a, b = src.blocks[y].size, tgt.blocks[y].size
        if (a is None) != (b is None):
            raise InternalConsistencyError(f"block {y}: finite against infinite")
        spill[y] = max(0, a - b) if a is not None else 0

    def fn(code):
        if not src.contains(code):
            raise DomainError(f"{code!r} is not a point of N_{i}")
        y, k = code
        block = src.blocks[y]
        if block.kind == "separator":
            return (y, k + spill.get(y - 1, 0))
        if k == 0:
            return code
        r = block.rank(k)
        tb = tgt.blocks[y]
        if tb.size is None or r < tb.size:
            return (y, tb.element(r))
        return (y + 1, r - tb.size)

    spills = {str(y): s for y, s in sorted(spill.items()) if s}
    return rule("canonicalFamilyEmbedding", fn, src.sample_presentation(),
                tgt.presentation(), i=i, j=j, primed=primed, spills=spills)


def positional_invariant_check(F: EmbeddingWitness, src: BlockFamily, tgt: BlockFamily,
                               separator_points: int = 30) -> Verification:
    """``F(y, 0) >= (y, 0)`` for every block, and separators stay below the
    next block head: ``F(y, k) < (y + 1, 0)``."""
    checked = 0
    for y, b in enumerate(src.blocks):
        img = F((y, 0))
        checked += 1
        if img < (y, 0):
            return Verification(False, checked, ((y, 0), img))
        if b.kind != "separator" or y + 1 >= len(tgt):
            continue
        for k in [0] + b.head(separator_points):
            img = F((y, k))
            checked += 1
            if not img < (y + 1, 0):
                return Verification(False, checked, ((y, k), img))
    return Verification(True, checked)


# -- extraction ------------------------------------------------------------

@dataclass
class ExtractionReport:
    i: int
    j: int
    primed: bool
    X: List[int]
    per_position: List[Dict]
    equivalence_holds: bool
    spill_sound: bool
    positional: bool
    witness: Optional[EmbeddingWitness] = None

    def to_json(self):
        out = {"i": self.i, "j": self.j, "primed": self.primed, "X": self.X,
               "perPosition": self.per_position,
               "equivalenceHolds": self.equivalence_holds,
               "spillSound": self.spill_sound, "positional": self.positional}
        if self.witness is not None:
            out["F"] = self.witness.to_json()
        return out

    def table(self) -> str:
        rows = [f"{'x':>3}  {'in X':>5}  {'clause':>12}  {'recovered':>9}  {'oracle':>6}"]
        for p in self.per_position:
            rows.append(f"{p['x']:>3}  {str(p['inX']):>5}  {p['clause']:>12}  "
                        f"{str(p['recovered']):>9}  {str(p['oracle']):>6}")
        return "\n".join(rows)


def _bounded_clause(inst, x, i) -> bool:
    return any(all(inst.phi(x, u, v) for v in range(inst.v_bound + 1))
               for u in range(min(i, inst.u_bound) + 1))


def extract_x(inst: Sigma2Instance, i: int, j: int, F: EmbeddingWitness,
              primed: bool = False, scan: int = SCAN) -> ExtractionReport:
    """Recover the truth of ``psi`` below ``n`` from an embedding ``F``.

    ``x`` is put in ``X`` when some point of its coding block (block ``2x``;
    block ``4x + 2`` for primed families with ``i > j``, block ``4x`` for
    primed families with ``i < j``) is sent at or beyond the head of the next
    block.  Infinite blocks are scanned on their first ``scan`` points.
    """
    table = build_k_table(inst)
    src = family(inst, i, primed, table)
    tgt = family(inst, j, primed, table)
    v = verify_embedding(F, src.sample_presentation(), tgt.presentation(),
                         sample_size=len(src.sample()))
    if not v:
        raise ViolationError("F is not an embedding between the families", v.pair)
    if primed:
        step, offset = 4, (2 if i > j else 0)
    else:
        step, offset = 2, 0
    X = []
    for x in range(inst.n):
        y = step * x + offset
        b = src.blocks[y]
        if any(F((y, k)) >= (y + 1, 0) for k in b.head(b.size if b.size is not None else scan)):
            X.append(x)
    per, ok, sound = [], True, True
    for x in range(inst.n):
        oracle = brute_force_psi(inst, x)
        in_x = x in X
        bounded = not (primed and i > j) and _bounded_clause(inst, x, i)
        recovered = in_x or bounded
        clause = "x in X" if in_x else (f"exists u<={i}" if bounded else "none")
        per.append({"x": x, "inX": in_x, "clause": clause, "recovered": recovered,
                    "oracle": oracle.holds, "minU": oracle.min_u})
        ok &= recovered == oracle.holds
        sound &= not in_x or oracle.holds
    pos = positional_invariant_check(F, src, tgt)
    return ExtractionReport(i, j, primed, X, per, ok, sound, bool(pos), F)


def search_family_embedding(inst: Sigma2Instance, i: int, j: int, primed: bool = False,
                            prefix_size: int = 24):
    """Bounded backtracking fallback on enumeration prefixes (tiny instances)."""
    table = build_k_table(inst)
    return search_embedding(family(inst, i, primed, table).presentation(),
                            family(inst, j, primed, table).presentation(), prefix_size)


def demo(inst: Sigma2Instance, i: int, j: int, primed: bool = False) -> ExtractionReport:
    F = construct_embedding(inst, i, j, primed)
    return extract_x(inst, i, j, F, primed)

