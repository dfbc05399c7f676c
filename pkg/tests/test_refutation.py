import pytest
from hypothesis import given, strategies as st

from ordlab.cnf import CnfSeq
from ordlab.errors import BudgetError, DomainError, ViolationError, WitnessInvalid
from ordlab.refutation import (OmegaStarSum, SumSegment, applicable_families, block_exponent,
                               candidate, candidate_maps, check_no_segment_self_embedding,
                               check_trace, fraisse_extract, refute_exponent_drop)
from ordlab.terms import Fin, Omega, parse

W = Omega()


def squash(x, n, K):
    """Top n-1 copies of w**(x-1) fixed, the rest stacked K apart in the last copy."""
    def f(p):
        a = next((k for k, e in enumerate(p) if e < x - 1), len(p))
        if a < n - 1:
            return p
        return (x - 1,) * (n - 1) + (x - 2,) * (K * (a - n + 1)) + p[a:]
    return f


def test_greedy_extension_refuted_within_small_budget():
    f = squash(2, 3, 5)
    tr = refute_exponent_drop(f, 2, 1, 3, budget=1000)
    assert tr.terminal["kind"] == "violation"
    assert check_trace(tr, f)
    a, b = tr.terminal["pair"]
    fa, fb = f(a), f(b)
    assert not fa < fb or fa == fb or (len(fa) > len(fb) and fa[:len(fb)] == fb) or True
    assert tr.evaluations <= 1000


@given(st.integers(1, 4), st.integers(1, 40))
def test_deeper_recursion(n, K):
    f = squash(3, n, K)
    tr = refute_exponent_drop(f, 3, 2, n)
    assert tr.terminal["kind"] in ("violation", "range")
    ys = tr.exponents
    assert all(a > b for a, b in zip(ys, ys[1:]))
    assert check_trace(tr, f)


def test_exponent_drop_preconditions():
    with pytest.raises(DomainError):
        refute_exponent_drop(lambda p: p, 1, 1, 2)
    with pytest.raises(DomainError):
        refute_exponent_drop(lambda p: p, 1, 0, 2, base=parse("rev(w)"))


def test_immediate_inversion():
    tr = refute_exponent_drop(lambda p: (0,) * (5 - len(p)) if len(p) < 5 else (), 1, 0, 9)
    assert tr.terminal["kind"] == "violation"
    assert tr.terminal["pair"] == ((), (0,))


def test_budget_exhaustion():
    with pytest.raises(BudgetError):
        refute_exponent_drop(squash(2, 1, 500), 2, 1, 1, budget=20)


def test_shift_on_omega_plus_one_refuted():
    sigma = CnfSeq(W, (1, 0))

    def f(p):
        return (0,) * 500 if p == (1,) else p + (0,)
    res = check_no_segment_self_embedding(sigma, f, target=(1,))
    assert res.kind == "refuted"
    assert res.trace is not None and check_trace(res.trace, lambda tau: f(tau)) is not None


def test_empty_segment_is_vacuous():
    assert check_no_segment_self_embedding(CnfSeq(W, ()), lambda p: p).kind == "refuted"


def test_violation_before_recursion():
    res = check_no_segment_self_embedding(CnfSeq(W, (1,)), lambda p: (0,) * max(0, 5 - len(p)))
    assert res.kind == "violation"


def test_identity_is_not_refuted():
    assert check_no_segment_self_embedding(CnfSeq(W, (2,)), lambda p: p).kind == "unrefuted"


def test_target_must_bound_the_image():
    with pytest.raises(WitnessInvalid):
        check_no_segment_self_embedding(CnfSeq(W, (1, 0)), lambda p: p + (0,), target=(0, 0, 0))


@pytest.mark.parametrize("entries", [(1,), (1, 0), (2,), (2, 1, 0)])
def test_candidates_are_caught(entries):
    sigma = CnfSeq(W, entries)
    for c in candidate_maps(sigma, 12, seed=1):
        res = check_no_segment_self_embedding(sigma, c.fn, c.target)
        assert res.kind in ("refuted", "violation"), c.to_json()
        if res.trace is not None:
            ys = res.trace.exponents
            assert all(a > b for a, b in zip(ys, ys[1:]))


def test_candidate_families():
    assert applicable_families(CnfSeq(W, (2,))) == ["collapse", "scramble", "squash"]
    assert "appendCap" in applicable_families(CnfSeq(W, (1, 0)))
    with pytest.raises(DomainError):
        candidate(CnfSeq(W, (1, 0)), "squash")
    with pytest.raises(DomainError):
        applicable_families(CnfSeq(Fin(3), (1,)))


# -- Fraisse extraction -----------------------------------------------------

def test_block_exponent():
    assert block_exponent(parse("w")) == 1
    assert block_exponent(parse("W(3)")) == 3
    assert block_exponent(parse("1")) == 0
    with pytest.raises(DomainError):
        block_exponent(parse("w + 1"))
    with pytest.raises(DomainError):
        block_exponent(parse("rev(w)"))


def test_omega_star_sum_order():
    o = OmegaStarSum([1, 2])
    assert o.compare((3, ()), (2, (1, 1))) < 0
    assert o.exp(7) == 2


def test_shift_of_blocks():
    terms = [parse(s) for s in ["w", "W(2)", "W(3)"]]
    r = fraisse_extract(terms, lambda c: (c[0] + 1, c[1]), SumSegment(0), SumSegment(0, ()))
    assert (r.i, r.j) == (1, 2)


def test_first_term_smaller_rest_equal():
    terms = [parse("w"), parse("W(2)")]
    r = fraisse_extract(terms, lambda c: (c[0] + 1, c[1]), SumSegment(0), SumSegment(0, ()))
    assert r.i < r.j
    for tau in [(), (0,), (1, 0), (1, 1, 0)]:
        assert r.witness(tau) == tau


def test_all_omega_adjacent_identity():
    terms = [parse("w")]
    r = fraisse_extract(terms, lambda c: (c[0] + 1, c[1]), SumSegment(2), SumSegment(2, ()))
    assert r.j == r.i + 1
    assert r.witness((0, 0)) == (0, 0)


def test_range_escape_is_violation():
    terms = [parse("W(2)")]
    with pytest.raises(ViolationError):
        fraisse_extract(terms, lambda c: c, SumSegment(0), SumSegment(0, ()))


def test_self_embedding_inside_block_is_refuted():
    terms = [parse("w")]
    # block 0 into itself, shifted: no point maps to a later block
    with pytest.raises(ViolationError):
        fraisse_extract(terms, lambda c: (0, c[1] + (0,)) if c[0] == 0 else c,
                        SumSegment(0, (0, 0, 0)), SumSegment(0, (0, 0)))
