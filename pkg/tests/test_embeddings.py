import pytest

from conftest import terms_up_to
from ordlab.embeddings import (DENSE_TERM, WitnessInvalid, compose, dense_embed, dense_target,
                               extract_descending, finite_map, identity, interval_lift, rule,
                               search_embedding, self_embed_ill_founded,
                               self_embed_non_scattered, shift_rev_omega, verify_embedding,
                               wwo_witness)
from ordlab.errors import DomainError, IncompleteWitness
from ordlab.presentation import denote, descending_sequence
from ordlab.terms import (Fin, Omega, OmegaExp, Rationals, Rev, Sum, contains_rationals,
                          is_scattered, is_well_order, parse, show)


def test_identity_verifies():
    assert verify_embedding(identity(denote(Omega())), sample_size=20)


def test_shift_on_reversed_omega():
    w = shift_rev_omega()
    assert verify_embedding(w, sample_size=50)
    assert extract_descending(w, 0, 6) == [0, 1, 2, 3, 4, 5]


def test_swap_reports_pair():
    p = denote(Omega())
    swap = rule("swap", lambda i: {0: 1, 1: 0}.get(i, i), p, p)
    v = verify_embedding(swap, sample_size=20)
    assert not v and v.pair == (0, 1)


def test_image_outside_codomain():
    p = denote(Omega())
    w = rule("bad", lambda i: i + 1, p, denote(Fin(3)))
    with pytest.raises(WitnessInvalid):
        verify_embedding(w, sample_size=10)


def test_finite_map_undefined_point():
    p = denote(Omega())
    w = finite_map([(0, 0), (1, 1)], domain=p, codomain=p)
    with pytest.raises(IncompleteWitness):
        verify_embedding(w, sample_size=5)


def test_identity_orbit_is_invalid():
    with pytest.raises(WitnessInvalid):
        extract_descending(identity(denote(Omega())), 3, 4)


def test_dense_embed_examples():
    w = dense_embed(denote(Fin(3)))
    imgs = [w(i) for i in range(3)]
    y = dense_target()
    assert all(y.less(a, b) for a, b in zip(imgs, imgs[1:]))
    assert verify_embedding(dense_embed(denote(Rationals())), sample_size=15)


def test_dense_between_rule():
    from ordlab.embeddings import _y_between
    y = denote(DENSE_TERM)
    assert y.less((2,), (1,))
    assert _y_between((2,), (1,)) == (2, 2)


@pytest.mark.parametrize("src", ["rev(w)", "q", "w + rev(w)"])
def test_self_embed_ill_founded(src):
    t = parse(src)
    w = self_embed_ill_founded(t)
    v = verify_embedding(w, sample_size=100)
    assert v
    x0 = (w.params["x0"],)
    whole = denote(OmegaExp(t))
    assert all(whole.less(w(a), x0) for a in whole.prefix(100))


def test_self_embed_ill_founded_orbit():
    # on W(rev(w)) itself the substitution map needs no dense stage
    t = Rev(Omega())
    w = self_embed_ill_founded(t, dense=False)
    whole = denote(OmegaExp(t))
    orbit = extract_descending(w, (0,), 10, whole)
    assert orbit == [(k,) for k in range(10)]


def test_self_embed_ill_founded_needs_descent():
    with pytest.raises(DomainError):
        self_embed_ill_founded(Omega())
    with pytest.raises(DomainError):
        self_embed_ill_founded(Rev(Omega()), descent=[1, 0])


@pytest.mark.parametrize("src", ["q", "w + q", "rev(W(q)) + 3", "W(q)", "q + rev(q)"])
def test_self_embed_non_scattered(src):
    w = self_embed_non_scattered(parse(src))
    assert verify_embedding(w, sample_size=50)


def test_non_scattered_needs_rationals():
    with pytest.raises(DomainError):
        self_embed_non_scattered(Omega())


def test_interval_lift_examples():
    outer = Sum(Omega(), Rev(Omega()))
    lifted = interval_lift(outer, "R", shift_rev_omega())
    assert verify_embedding(lifted, sample_size=50)
    assert lifted((0, 7)) == (0, 7)
    assert lifted((1, 3)) == (1, 4)

    outer = Sum(Fin(2), Rationals())
    assert verify_embedding(interval_lift(outer, "R", self_embed_non_scattered(Rationals())),
                            sample_size=50)


def test_interval_lift_empty_prefix_matches_witness():
    outer = Sum(Rev(Omega()), Omega())
    base = shift_rev_omega()
    lifted = interval_lift(outer, "L", base)
    for i in range(10):
        assert lifted((0, i)) == (0, base(i))


def test_interval_lift_bad_path():
    with pytest.raises(DomainError):
        interval_lift(Omega(), "L", shift_rev_omega())


def test_compose():
    w = shift_rev_omega()
    ww = compose(w, w)
    assert ww(3) == 5


def test_search_examples():
    assert search_embedding(denote(Fin(3)), denote(Omega()), 3).found
    assert not search_embedding(denote(parse("w + 1")), denote(Fin(3)), 4).found
    res = search_embedding(denote(parse("w + w")), denote(Omega()), 10, horizon=40)
    assert res.found
    assert verify_embedding(res.witness, sample_size=10)


def test_all_rule_witnesses_verify():
    for t in terms_up_to(3):
        if is_well_order(t):
            continue
        if not is_scattered(t) and contains_rationals(t):
            w = self_embed_non_scattered(t)
        else:
            w = self_embed_ill_founded(t, length=8)
        assert verify_embedding(w, sample_size=50), show(t)


def test_wwo_witness_examples():
    assert wwo_witness(parse("rev(w)")).name == "shift"
    assert wwo_witness(parse("rev(W(2))")).name == "insertPoint"
    w = wwo_witness(parse("rev(w + 3)"))
    assert w.name == "reversedSumLift" and w.params["side"] == "L"
    assert wwo_witness(parse("rev(W(2))"))((1, 0)) == (1, 0, 0)
    with pytest.raises(DomainError):
        wwo_witness(parse("W(w) + 4"))


def test_wwo_witness_on_every_ill_founded_term(depth3_terms):
    for t in depth3_terms:
        if is_well_order(t):
            continue
        w = wwo_witness(t)
        assert verify_embedding(w, sample_size=20), show(t)
        assert any(not w.codomain.contains(x) for x in w.domain.prefix(200)), show(t)
