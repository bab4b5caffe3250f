import pytest
from hypothesis import given, settings, strategies as st

from dendrokit.kan import (
    KanError,
    QuotientSet,
    colim_quotient,
    verify_lke,
    verify_lknerve,
    verify_pullback_hom,
    verify_splitsc,
)
from dendrokit.trees import GradedSet, corolla, eta, from_code

V1, V2, V3 = GradedSet.of(v=1), GradedSet.of(v=2), GradedSet.of(v=3)
S22 = from_code("((..).)")


def naive_classes(n, pairs):
    label = list(range(n))
    changed = True
    while changed:
        changed = False
        for a, b in pairs:
            m = min(label[a], label[b])
            if label[a] != m or label[b] != m:
                label[a] = label[b] = m
                changed = True
    return len(set(label))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=15))))
def test_quotient_matches_naive(data):
    n, pairs = data
    q = QuotientSet(range(n))
    for a, b in pairs:
        q.merge(a, b)
    assert q.n_classes == naive_classes(n, pairs)
    for a, b in pairs:
        assert q.same(a, b)


def test_dangling_relation_rejected():
    q = QuotientSet([1, 2])
    with pytest.raises(KanError):
        q.merge(1, 3)


def test_colim_quotient_tags_components():
    q = colim_quotient({"a": [1, 2], "b": [1]}, [(("a", 1), ("b", 1))])
    assert q.n_classes == 2


@pytest.mark.parametrize(
    "S,N,count",
    [(corolla(2), V2, 2), (S22, V2, 4), (eta(), GradedSet(()), 1), (corolla(3), V3, 6)],
)
def test_lke_bijective_frozen(S, N, count):
    r = verify_lke(S, N, 3, 2)
    assert r.bijective
    assert r.classes == r.hom_count == count


@pytest.mark.parametrize("S,N,count", [(corolla(2), V2, 2), (S22, V2, 4), (eta(), V2, 0), (S22, V1, 1)])
def test_splitsc_frozen(S, N, count):
    r = verify_splitsc(S, N, 3, 2)
    assert r.bijective and r.classes == count


def test_lknerve_and_pullback():
    r = verify_lknerve(GradedSet.of(x=2), V2, 3, 2)
    assert r.bijective and r.classes == 2
    assert verify_pullback_hom(GradedSet.of(x=2), 3).passed


def test_unary_source_is_flagged_truncated():
    r = verify_lke(corolla(1), V1, 2, 2)
    assert r.truncated
