import itertools
import os
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ordlab.terms import Empty, Fin, Omega, OmegaExp, Rationals, Rev, Sum

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ATOMS = [Empty(), Fin(1), Fin(2), Fin(3), Omega(), Rationals()]


def terms_up_to(depth, atoms=ATOMS, ops=("rev", "W", "sum")):
    """Every term of depth <= ``depth`` (atoms have depth 1)."""
    levels = [list(atoms)]
    for _ in range(depth - 1):
        prev = [t for lvl in levels for t in lvl]
        last = levels[-1]
        new = []
        if "rev" in ops:
            new += [Rev(t) for t in last]
        if "W" in ops:
            new += [OmegaExp(t) for t in last]
        if "sum" in ops:
            new += [Sum(a, b) for a, b in itertools.product(prev, prev)
                    if a in last or b in last]
        levels.append(new)
    return [t for lvl in levels for t in lvl]


def random_term(rng, depth):
    if depth <= 1 or rng.random() < 0.25:
        k = rng.randrange(6)
        return [Empty(), Fin(rng.randint(1, 12)), Omega(), Rationals(), Fin(1), Omega()][k]
    op = rng.choice(["rev", "W", "sum", "sum"])
    if op == "rev":
        return Rev(random_term(rng, depth - 1))
    if op == "W":
        return OmegaExp(random_term(rng, depth - 1))
    return Sum(random_term(rng, depth - 1), random_term(rng, depth - 1))


def term_corpus(n=200, seed=7, depth=5):
    rng = random.Random(seed)
    return [random_term(rng, depth) for _ in range(n)]


atom_st = st.one_of(st.just(Empty()), st.builds(Fin, st.integers(1, 20)),
                    st.just(Omega()), st.just(Rationals()))
term_st = st.recursive(
    atom_st,
    lambda inner: st.one_of(st.builds(Rev, inner), st.builds(OmegaExp, inner),
                            st.builds(Sum, inner, inner)),
    max_leaves=8)


@pytest.fixture(scope="session")
def depth3_terms():
    return terms_up_to(3)


def random_instance(rng, n, bound=8):
    """Each x gets a planted least witness u (or none); other rows fail at a random v."""
    from ordlab.sigma2 import Sigma2Instance
    exc = []
    for x in range(n):
        u_star = rng.choice([None, None] + list(range(bound + 1)))
        for u in range(bound + 1):
            if u == u_star:
                continue
            if u_star is None or u < u_star or rng.random() < 0.5:
                for v in rng.sample(range(bound + 1), rng.randint(1, 3)):
                    exc.append(((x, u, v), False))
    return Sigma2Instance(n, bound, bound, True, tuple(exc))


def sigma2_corpus(count=24, seed=11):
    from ordlab.sigma2 import worked_instance
    rng = random.Random(seed)
    return [worked_instance()] + [random_instance(rng, rng.randint(1, 4)) for _ in range(count)]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
