import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dendrokit import group_actions as ga
from dendrokit.operads import elements
from dendrokit.trees import GradedSet, enumerate_trees, from_code

GROUPS = ga.groups_up_to_order(8)


def test_group_list():
    assert len(GROUPS) == 14
    assert [G.order for G in GROUPS].count(8) == 5
    for G in GROUPS:
        assert ga.group_axioms(G.table, G.identity)[0]
    for G, H in itertools.combinations(GROUPS, 2):
        assert not ga.is_isomorphic(G, H)


def test_isomorphism_detects_relabelling():
    G = ga.dihedral(4)
    perm = [0] + list(range(7, 0, -1))
    inv = {p: i for i, p in enumerate(perm)}
    table = tuple(tuple(perm[G.mul(inv[a], inv[b])] for b in range(8)) for a in range(8))
    assert ga.is_isomorphic(G, ga.FiniteGroup("relabelled", table, 0))


def test_endomorphism_action_fixed_points():
    G = ga.cyclic(2)
    A = ga.endomorphism_action(G, ga.regular_action(G), 2)
    assert ga.validate_group_action(A).passed
    assert [len(A.P[n]) for n in range(3)] == [2, 4, 16]
    # g acts by post-composition with the swap: no function is fixed
    assert len(ga.fixed_points(A, 1, 1)) == 0
    assert len(ga.orbits(A, 1)) == 2


def test_swap_action_on_binary_operad():
    P = {2: elements(GradedSet.of(x=2), 2, 1)}
    a, b = P[2]
    act = {2: {(0, a): a, (0, b): b, (1, a): b, (1, b): a}}
    assert ga.validate_group_action(ga.GroupActionOnOperad(ga.cyclic(2), P, act)).passed


def test_non_associative_table_rejected():
    G = ga.cyclic(3)
    P = {1: ["p", "q", "r"]}
    # 1 and 2 both act as the same transposition, violating 1*1 = 2
    swap = {"p": "q", "q": "p", "r": "r"}
    act = {1: {(g, s): (s if g == 0 else swap[s]) for g in range(3) for s in P[1]}}
    r = ga.validate_group_action(ga.GroupActionOnOperad(G, P, act))
    assert not r.passed
    assert r.failures[0]["axiom"] == "associativity" and len(r.failures[0]["witness"]) == 3


@pytest.mark.parametrize("G", [ga.cyclic(2), ga.symmetric(3)])
def test_goper_coproduct(G):
    P = {n: elements(GradedSet.of(x=2), n, 2) for n in range(4)}
    r = ga.goper_coproduct_special(P, G)
    assert all(len(r.P[n]) == G.order * len(P[n]) for n in P)
    assert len(ga.balanced_product(G, list(G.elements), r, 3).classes()) == len(r.P[3])
    triv = ga.goper_coproduct_special(P, ga.cyclic(1))
    assert all(len(triv.P[n]) == len(P[n]) for n in P)


def test_theory_objects():
    assert ga.lambda_minus1([1]).describe()["group"] == "F_1"
    assert ga.lambda_n([1, 2], 2) == ga.GOpObject(0, (2, 2))
    assert ga.coproduct_all([]) == ga.TERMINAL_GOP
    t = from_code("((..)().)")
    assert ga.do_object_image(2, t) == ga.GOpObject(2, (0, 2, 3))


@pytest.mark.parametrize("n", range(4))
def test_do_functor_records_valences(n):
    for R in enumerate_trees(3, 3):
        assert sorted(ga.do_object_image(n, R).arities) == sorted(v.valence for v in R.vertices)
        assert ga.do_object_image(n, R).rank == n


def test_cat_action_fixtures():
    assert ga.validate_cat_action(ga.groupoid_action()).passed
    r = ga.validate_cat_action(ga.broken_moment_action())
    assert not r.passed and r.failures[0]["axiom"] == "composition_moment"


def test_do_hom_small_objects():
    A = ga.groupoid_action()
    assert len(ga.do_hom(0, None, A)) == 2
    assert len(ga.do_hom(1, None, A)) == 4
    assert len(ga.do_hom(0, from_code("."), A)) == 2


def test_do_core_groupoid():
    A = ga.groupoid_action()
    for n in range(4):
        for R in [None] + list(enumerate_trees(2, 3)):
            c = ga.check_do_core(n, R, A)
            assert c["bijective"] or c["unit_tree_level"]
    assert ga.do_segal_core(3, None).gammas == [(0, 1), (1, 2), (2, 3)]


def test_do_core_fails_for_monoid():
    C = ga.commuting_monoid()
    P = ga.FiniteColoredOperad(("a",), {"id_a": (("a",), "a")}, {"a": "id_a"}, {("id_a", ("id_a",)): "id_a"})
    A = ga.CatActionOnColoredOperad(C, P, {"id_a": 0}, {("1", "id_a"): "id_a", ("z", "id_a"): "id_a"})
    assert ga.validate_cat_action(A).passed
    assert not ga.check_do_core(2, None, A)["bijective"]


def test_hall_examples():
    Z3 = ga.PointedMagma(tuple(tuple((a - b) % 3 for b in range(3)) for a in range(3)))
    r = ga.hall_extract(Z3)
    assert r.round_trip and ga.is_isomorphic(r.group, ga.cyclic(3))
    proj = ga.PointedMagma(((0, 0), (1, 1)))
    assert ga.hall_extract(proj).failed_relation == "[a,a]=e"
    assert ga.hall_extract(ga.PointedMagma(((0,),))).group.order == 1


@pytest.mark.parametrize("order,passing", [(1, 1), (2, 1), (3, 1), (4, 4)])
def test_hall_search(order, passing):
    r = ga.hall_search(order)
    assert r.passed and r.passing == passing


@pytest.mark.parametrize("G", [G for G in GROUPS if G.order <= 6], ids=lambda G: G.name)
def test_bousfield_groups(G):
    X = ga.nerve_of_monoid(G.table, G.identity, 3)
    assert ga.bousfield_bijective(X, 2)[0] and ga.bousfield_bijective(X, 3)[0]


def test_bousfield_monoid_fails():
    X = ga.nerve_of_monoid([[0, 1], [1, 1]], 0, 3)
    ok, w = ga.bousfield_bijective(X, 2)
    assert not ok and "collision" in w


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_hall_bracket_round_trip(G, data):
    r = ga.hall_extract(ga.PointedMagma.from_group(G))
    assert r.relations_hold and r.round_trip and ga.is_isomorphic(r.group, G)
    a, b = data.draw(st.integers(0, G.order - 1)), data.draw(st.integers(0, G.order - 1))
    assert r.group.mul(a, b) == G.mul(a, b)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.sampled_from(GROUPS))
def test_direct_product_is_group(G, H):
    if G.order * H.order > 16:
        return
    P = ga.direct_product(G, H)
    assert ga.group_axioms(P.table, P.identity)[0]


def test_json_round_trips():
    A = ga.groupoid_action()
    B = ga.cat_action_from_json(ga.cat_action_to_json(A))
    assert ga.validate_cat_action(B).passed
    E = ga.endomorphism_action(ga.cyclic(2), ga.regular_action(ga.cyclic(2)), 1)
    assert ga.group_action_from_json(ga.group_action_to_json(E)).P == E.P
