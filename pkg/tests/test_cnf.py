import itertools

import pytest
from hypothesis import given, strategies as st

from ordlab.cnf import (CnfSeq, RawSeq, cnf_add, lex_compare, normalize, omega_power_times,
                        parse_seq, segment_of, structural_cnf, sum_of_powers,
                        sum_to_segment_map)
from ordlab.errors import DomainError
from ordlab.terms import Fin, Omega, parse

W = Omega()


def seq(*entries, base=W):
    return CnfSeq(base, entries)


def test_lex_examples():
    assert lex_compare(seq(), seq(0)) == -1
    assert lex_compare(seq(0, 0), seq(1)) == -1
    assert lex_compare(seq(2, 1), seq(2, 1, 0)) == -1
    assert lex_compare(seq(2, 1), seq(2, 1)) == 0


def test_mismatched_bases():
    with pytest.raises(DomainError):
        lex_compare(seq(1), seq(1, base=Fin(3)))
    with pytest.raises(DomainError):
        cnf_add(seq(1), seq(0, base=Fin(3)))


def test_entries_validated():
    with pytest.raises(DomainError):
        seq(0, 1)
    with pytest.raises(DomainError):
        seq(3, base=Fin(3))


@pytest.mark.parametrize("s, t, out", [
    ((1, 0), (2,), (2,)), ((2, 1), (1,), (2, 1, 1)), ((3, 1, 0), (1, 1), (3, 1, 1, 1)),
    ((), (2,), (2,)), ((2,), (), (2,)),
])
def test_add_examples(s, t, out):
    assert cnf_add(seq(*s), seq(*t)).entries == out


def test_omega_power_times():
    assert omega_power_times(W, 2, 3).entries == (2, 2, 2)
    assert omega_power_times(W, 2, 0).entries == ()
    for x in range(6):
        for n in range(6):
            assert lex_compare(omega_power_times(W, x, n), omega_power_times(W, x, n + 1)) == -1


@pytest.mark.parametrize("raw, out", [((1, 0, 2, 1), (2, 1)), ((2, 2, 1), (2, 2, 1)), ((0, 3), (3,))])
def test_normalize_examples(raw, out):
    assert normalize(RawSeq(W, raw)).entries == out


def test_segment_examples():
    assert segment_of(seq(0)).prefix(5) == [()]
    assert segment_of(seq()).prefix(5) == []
    p = segment_of(seq(1))
    assert p.prefix(4) == [(), (0,), (0, 0), (0, 0, 0)]


def _nonincreasing(max_len, top):
    for n in range(max_len + 1):
        for c in itertools.combinations_with_replacement(range(top, -1, -1), n):
            yield c


def test_lex_total_over_fin3():
    base = Fin(3)
    seqs = [CnfSeq(base, s) for s in _nonincreasing(3, 2)]
    for a in seqs:
        for b in seqs:
            c = lex_compare(a, b)
            assert c == -lex_compare(b, a)
            assert (c == 0) == (a.entries == b.entries)
            for d in seqs:
                if c < 0 and lex_compare(b, d) < 0:
                    assert lex_compare(a, d) < 0


def test_add_associative_and_right_monotone():
    seqs = [seq(*s) for s in _nonincreasing(3, 3)]
    for a in seqs:
        for b in seqs:
            ab = cnf_add(a, b)
            for c in seqs:
                assert cnf_add(ab, c) == cnf_add(a, cnf_add(b, c))
                if lex_compare(b, c) < 0:
                    assert lex_compare(ab, cnf_add(a, c)) != 1


@given(st.lists(st.integers(0, 5), max_size=8))
def test_normalize_idempotent(entries):
    n = normalize(RawSeq(W, entries))
    assert len(n) <= len(entries)
    assert normalize(RawSeq(W, n.entries)) == n


@given(st.lists(st.integers(0, 3), max_size=4))
def test_sum_map_is_isomorphism_on_prefix(entries):
    raw = RawSeq(W, entries)
    seg = segment_of(normalize(raw))
    src = sum_of_powers(raw)
    f = sum_to_segment_map(raw)
    pts = src.prefix(30)
    imgs = [f(a) for a in pts]
    assert all(seg.contains(b) for b in imgs)
    for a, fa in zip(pts, imgs):
        for b, fb in zip(pts, imgs):
            assert src.compare(a, b) == seg.compare(fa, fb)


def test_structural_cnf_examples():
    assert structural_cnf(parse("w + w + 3")).entries == ((0, 1), (0, 1), (0, 0), (0, 0), (0, 0))
    assert structural_cnf(parse("W(w)")).entries == ((1, 0),)
    assert structural_cnf(parse("rev(rev(w))")).entries == ((0, 1),)
    with pytest.raises(DomainError):
        structural_cnf(parse("rev(w)"))


def test_parse_seq():
    assert parse_seq("[2,1]", "w") == seq(2, 1)
    with pytest.raises(DomainError):
        parse_seq("[1,", "w")
    with pytest.raises(DomainError):
        parse_seq("{}", "w")
