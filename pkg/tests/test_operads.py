import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dendrokit.omega import compose, hom_omega
from dendrokit.operads import (
    UNIT,
    FreeOperadMap,
    J,
    J_map,
    Leaf,
    Node,
    OperadError,
    arity,
    elements,
    gamma,
    generator,
    hom_free,
    is_element,
    partial,
    perm_compose,
    replan,
    sigma_action,
    size,
    term_from_json,
    term_to_json,
)
from dendrokit.trees import GradedSet, corolla, enumerate_trees, from_code

X2 = GradedSet.of(x=2)
XY = GradedSet.of(x=2, y=3)
x = generator("x", 2)


def test_element_counts_frozen():
    # planar binary trees times leaf labellings
    assert [len(elements(X2, n, max(n - 1, 0))) for n in range(1, 5)] == [1, 2, 12, 120]
    assert len(elements(XY, 3, 2)) == 18
    assert elements(X2, 1, 0) == [UNIT]
    assert elements(X2, 0, 3) == []


def test_gamma_blocks():
    t = gamma(x, [x, UNIT])
    assert t == Node("x", (Node("x", (Leaf(1), Leaf(2))), Leaf(3)))
    assert arity(t) == 3 and size(t) == 2
    with pytest.raises(OperadError):
        gamma(x, [x])


def test_partial_matches_gamma():
    assert partial(x, 2, x) == gamma(x, [UNIT, x])


def test_hom_free_counts():
    assert len(hom_free(GradedSet.of(v=2), X2, 1)) == 2
    assert len(hom_free(GradedSet.of(v=3), X2, 2)) == 12


def test_bad_map_rejected():
    with pytest.raises(OperadError):
        FreeOperadMap(GradedSet.of(v=2), X2, (("v", generator("x", 2)), ("w", UNIT)))


def test_term_json_round_trip():
    t = gamma(x, [x, gamma(x, [UNIT, x])])
    assert term_from_json(term_to_json(t)) == t


def test_replan_rejects_composite_label():
    S = corolla(3)
    v = S.vertices[0].id
    with pytest.raises(OperadError):
        replan(S, {v: gamma(x, [x, UNIT])})


terms3 = st.sampled_from(elements(X2, 3, 2))
terms2 = st.sampled_from(elements(X2, 2, 1))
terms1 = st.sampled_from(elements(X2, 1, 0))
perms3 = st.permutations([1, 2, 3])


@settings(max_examples=80, deadline=None)
@given(terms2, terms2, terms2, terms1)
def test_gamma_associative(f, a, b, c):
    # (f;a,b);(c,...) in block form equals f;(a;..),(b;..)
    inner = [c] * arity(a) + [c] * arity(b)
    lhs = gamma(gamma(f, [a, b]), inner)
    rhs = gamma(f, [gamma(a, [c] * arity(a)), gamma(b, [c] * arity(b))])
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(terms3)
def test_unit_laws(f):
    assert gamma(f, [UNIT] * 3) == f
    assert gamma(UNIT, [f]) == f


@settings(max_examples=60, deadline=None)
@given(terms3, perms3, perms3)
def test_sigma_is_right_action(f, s, t):
    assert sigma_action(sigma_action(f, s), t) == sigma_action(f, perm_compose(s, t))
    assert is_element(sigma_action(f, s), X2)


trees = st.sampled_from(enumerate_trees(2, 3))


@settings(max_examples=40, deadline=None)
@given(trees, trees, trees)
def test_J_functorial(a, b, c):
    for f in hom_omega(a, b)[:5]:
        for g in hom_omega(b, c)[:5]:
            assert J_map(f).then(J_map(g)) == J_map(compose(g, f))


def test_J_of_tree_is_valences():
    t = from_code("((..)().)")
    assert sorted(k for _, k in J(t).gens) == [0, 2, 3]
