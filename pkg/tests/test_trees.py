import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dendrokit.trees import (
    GradedSet,
    Tree,
    TreeError,
    Vertex,
    automorphisms,
    canonical_form,
    canonical_tree,
    codegeneracy,
    contract,
    corolla,
    enumerate_trees,
    eta,
    from_code,
    inner_coface,
    isomorphisms,
    linear,
    subtrees,
    to_dot,
)


def graft_all(max_vertices, max_valence):
    """Oracle: grow trees by attaching corollas at leaves, dedupe by code."""
    seen = {eta().code}
    frontier = [eta()]
    counter = itertools.count()
    while frontier:
        nxt = []
        for t in frontier:
            if t.n_vertices == max_vertices:
                continue
            for leaf in sorted(t.leaves):
                for k in range(max_valence + 1):
                    ins = tuple(f"g{next(counter)}" for _ in range(k))
                    u = Tree(t.root, t.vertices + (Vertex(f"w{next(counter)}", leaf, ins),))
                    if u.code not in seen:
                        seen.add(u.code)
                        nxt.append(u)
        frontier = nxt
    return seen


@pytest.mark.parametrize("nv,val", [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)])
def test_enumeration_matches_grafting(nv, val):
    codes = {t.code for t in enumerate_trees(nv, val)}
    assert codes == graft_all(nv, val)


def test_enumeration_counts_frozen():
    assert [len(enumerate_trees(a, b)) for a, b in [(1, 1), (2, 2), (3, 3), (4, 3)]] == [3, 10, 73, 357]


@pytest.mark.parametrize(
    "code,order", [(".", 1), ("(.)", 1), ("(..)", 2), ("(...)", 6), ("((..).)", 2), ("((..)(..))", 8), ("((.)(.))", 2)]
)
def test_automorphism_orders(code, order):
    assert len(automorphisms(from_code(code))) == order


def test_basic_shapes():
    assert eta().n_vertices == 0 and len(eta().edges) == 1
    c = corolla(3)
    assert c.n_vertices == 1 and len(c.leaves) == 3 and not c.inner_edges
    assert linear(3).is_linear() and linear(3).n_vertices == 3
    assert corolla(0).leaves == frozenset()


def test_invalid_trees_rejected():
    with pytest.raises(TreeError):
        Tree("r", (Vertex("v", "r", ("a",)), Vertex("w", "a", ("r",))))
    with pytest.raises(TreeError):
        Tree("r", (Vertex("v", "r", ("a", "a")),))


def test_json_round_trip():
    t = from_code("((..)().)")
    assert Tree.from_json(t.to_json()) == t
    M = GradedSet.of(x=2, y=3)
    assert GradedSet.from_json(M.to_json()) == M


def test_subtrees_of_corolla():
    # one eta per edge plus the corolla itself
    assert len(subtrees(corolla(2))) == 4


def test_inner_coface_and_contract_inverse():
    c = corolla(3)
    v = c.vertices[0]
    t, e = inner_coface(c, v.id, v.ins[:2])
    assert t.n_vertices == 2 and e in t.inner_edges
    assert canonical_form(t) == "((..).)"
    assert canonical_form(contract(t, e)) == "(...)"


def test_codegeneracy_removes_unary_vertex():
    t = linear(2)
    v = t.vertices[0].id
    assert codegeneracy(t, v).n_vertices == 1


def test_dot_output():
    d = to_dot(corolla(2))
    assert d.startswith("digraph") and d.rstrip().endswith("}")


codes = st.sampled_from([t.code for t in enumerate_trees(3, 3)])


@settings(max_examples=60, deadline=None)
@given(codes, st.randoms(use_true_random=False))
def test_relabelled_tree_has_same_code(code, rnd):
    t = from_code(code)
    edges = sorted(t.edges)
    names = [f"q{i}" for i in range(len(edges))]
    rnd.shuffle(names)
    ren = t.rename(dict(zip(edges, names)))
    assert ren.code == code
    assert canonical_tree(ren) == canonical_tree(t)
    assert next(isomorphisms(t, ren), None) is not None


@settings(max_examples=40, deadline=None)
@given(codes)
def test_automorphisms_form_group(code):
    t = from_code(code)
    auts = [tuple(sorted(a.items())) for a in automorphisms(t)]
    aset = set(auts)
    for a in auts:
        for b in auts:
            da, db = dict(a), dict(b)
            assert tuple(sorted((e, da[db[e]]) for e in db)) in aset


def test_inner_coface_nullary_split():
    c = corolla(2)
    v = c.vertices[0]
    t, e = inner_coface(c, v.id, (), position=0)
    assert sorted(t.valences().values()) == [0, 3]
    assert contract(t, e).code == "(..)"


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([t for t in enumerate_trees(3, 3) if t.n_vertices]), st.data())
def test_inner_coface_properties(t, data):
    v = data.draw(st.sampled_from(sorted(t.vertex)))
    ins = t.vertex[v].ins
    mask = data.draw(st.lists(st.booleans(), min_size=len(ins), max_size=len(ins)))
    upper = tuple(e for e, m in zip(ins, mask) if m)
    pos = data.draw(st.integers(0, len(ins) - len(upper)))
    s, e = inner_coface(t, v, upper, position=pos)
    assert s.edges == t.edges | {e}
    assert contract(s, e).code == t.code
    if len(upper) == len(ins):
        # the lower vertex is unary; collapsing it undoes the split
        assert codegeneracy(s, s.producer[t.vertex[v].out].id).code == t.code
