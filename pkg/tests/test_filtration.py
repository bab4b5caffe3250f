from hypothesis import given, settings, strategies as st

from dendrokit.dendroidal import default_skeleton, nerve_free
from dendrokit.filtration import (
    is_primitive_dendrex,
    primitive_dendrices,
    primitive_orbit_representatives,
    primitives,
    psi,
    spread_apart,
    total_size,
    verify_filtration,
)
from dendrokit.operads import UNIT, gamma, generator
from dendrokit.trees import GradedSet, corolla, from_code, linear

X2 = GradedSet.of(x=2)
x = generator("x", 2)
SK = default_skeleton(3, 3)
NX = nerve_free(X2, SK)


def test_spread_single_composite():
    r = spread_apart(corolla(3), (("v0", gamma(x, [x, UNIT])),))
    assert len(r.chain) == 1
    assert r.terminal_tree.code == "((..).)"
    assert sorted(r.primitive_labels.values()) == ["x", "x"]


def test_spread_unit_label_degenerates():
    r = spread_apart(linear(1), (("v0", UNIT),))
    assert r.terminal_tree.n_vertices == 0


def test_primitive_counts():
    # labelings V(S) -> M and their Aut(S)-orbits
    labs, orbits = primitives(from_code("((..).)"), GradedSet.of(x=2, y=2))
    assert len(labs) == 4 and orbits == 4
    labs, orbits = primitives(from_code("((..)(..))"), X2)
    assert len(labs) == 1 and orbits == 1
    # permuted generators at a binary vertex: 2 per vertex
    assert len(primitive_dendrices(corolla(2), X2)) == 2
    assert len(primitive_orbit_representatives(corolla(2), X2, NX)) == 1


def test_full_filtration_report():
    r = verify_filtration(X2, 3)
    assert r.passed and r.exhaustive and r.pushout_counts_match and r.oracle_match


def test_empty_generators():
    assert verify_filtration(GradedSet(()), 3).passed


def test_psi_monotone_and_exhausts_small_dendrices():
    p2, p3 = psi(X2, 2, SK, NX), psi(X2, 3, SK, NX)
    for T in SK.trees:
        assert p2._level_set(T) <= p3._level_set(T)
        inside = {e for e in NX.level(T) if total_size(e) <= 3}
        assert p3._level_set(T) == inside
        # what is missing needs trees with more than three vertices
        assert all(total_size(e) > 3 for e in NX._level_set(T) - p3._level_set(T))


elems = st.sampled_from([(T, e) for T in SK.trees for e in NX.level(T)])


@settings(max_examples=80, deadline=None)
@given(elems)
def test_spread_recomposes(pair):
    T, e = pair
    r = spread_apart(T, e)
    assert is_primitive_dendrex(r.terminal)
    assert NX.act(r.composite(), r.terminal) == e
    assert r.terminal_tree.n_vertices == total_size(e)
