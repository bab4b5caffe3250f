from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dendrokit.omega import (
    MorphismError,
    OmegaMorphism,
    automorphism_morphisms,
    compose,
    factorize,
    hom_omega,
    identity,
)
from dendrokit.trees import corolla, enumerate_trees, eta, from_code, linear


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("n", range(4))
def test_linear_hom_is_monotone_count(m, n):
    assert len(hom_omega(linear(m), linear(n))) == comb(m + n + 1, m + 1)


@pytest.mark.parametrize(
    "src,tgt,count",
    [(".", "(...)", 4), ("(..)", "((..).)", 4), ("((..).)", "(...)", 0), ("(...)", "((..).)", 6), ("(.)", "((.))", 6)],
)
def test_hom_counts(src, tgt, count):
    assert len(hom_omega(from_code(src), from_code(tgt))) == count


def test_compose_rejects_mismatch():
    f = identity(corolla(2))
    g = identity(corolla(3))
    with pytest.raises(MorphismError):
        compose(g, f)


def test_automorphisms_of_corolla():
    assert len(automorphism_morphisms(corolla(3))) == 6


trees = st.sampled_from(enumerate_trees(2, 2))


@settings(max_examples=40, deadline=None)
@given(trees, trees, trees)
def test_composition_associative_and_closed(a, b, c):
    hab, hbc = hom_omega(a, b), hom_omega(b, c)
    hac = set(hom_omega(a, c))
    for f in hab[:4]:
        for g in hbc[:4]:
            assert compose(g, f) in hac
            assert compose(identity(c), compose(g, f)) == compose(g, f)


@settings(max_examples=40, deadline=None)
@given(trees, trees)
def test_factorization_recomposes(a, b):
    for f in hom_omega(a, b):
        assert factorize(f).composite() == f
