"""The category of trees.

A morphism ``R -> S`` is a map of the free colored operads generated by
the trees.  Since every edge of ``S`` is a distinct color, an operation of
``S`` is pinned down by its signature, so a morphism is stored as its edge
map alone; the image of a vertex is recovered on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping

from .trees import Tree, TreeError, _subtree_vertex_sets, canonical_tree, codegeneracy, contract


class MorphismError(ValueError):
    pass


def subtree_vertices(t: Tree, root: str, leaves) -> frozenset[str] | None:
    """Vertex set of the subtree of ``t`` with the given root and leaf set,
    or ``None`` if there is no such subtree with at least one vertex."""
    leaves = set(leaves)
    if root not in t.producer:
        return None
    found = set()
    stack = [root]
    hit = set()
    while stack:
        e = stack.pop()
        if e in leaves and e != root:
            hit.add(e)
            continue
        u = t.producer.get(e)
        if u is None:
            return None
        found.add(u.id)
        stack.extend(u.ins)
    if hit != leaves:
        return None
    return frozenset(found)


@dataclass(frozen=True)
class OmegaMorphism:
    source: Tree
    target: Tree
    edge_map: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_map", tuple(sorted(self.edge_map)))

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.source, self.target, self.edge_map))
            self.__dict__["_hash"] = h
        return h

    @classmethod
    def make(cls, source: Tree, target: Tree, edge_map: Mapping[str, str], check: bool = True) -> "OmegaMorphism":
        f = cls(source, target, tuple(edge_map.items()))
        if check:
            f.validate()
        return f

    @cached_property
    def emap(self) -> dict[str, str]:
        return dict(self.edge_map)

    def __call__(self, e: str) -> str:
        return self.emap[e]

    def validate(self):
        if set(self.emap) != set(self.source.edges):
            raise MorphismError("edge map must be total on the source")
        if not set(self.emap.values()) <= self.target.edges:
            raise MorphismError("edge map leaves the target")
        for v in self.source.vertices:
            if self._image(v) is False:
                raise MorphismError(f"vertex {v.id} has no image operation")

    def _image(self, v):
        out = self.emap[v.out]
        ins = [self.emap[e] for e in v.ins]
        if len(ins) == 1 and ins[0] == out:
            return frozenset()
        if len(set(ins)) != len(ins):
            return False
        vs = subtree_vertices(self.target, out, ins)
        return False if vs is None else vs

    @cached_property
    def vertex_images(self) -> dict[str, frozenset[str]]:
        """Vertex -> vertex set of its image subtree (empty for an identity)."""
        return {v.id: self._image(v) for v in self.source.vertices}

    def is_identity_on(self, v: str) -> bool:
        return not self.vertex_images[v]

    def is_constant(self) -> bool:
        return len(set(self.emap.values())) == 1 and all(not s for s in self.vertex_images.values())

    def image_vertices(self) -> frozenset[str]:
        return frozenset().union(*self.vertex_images.values()) if self.vertex_images else frozenset()

    def is_iso(self) -> bool:
        return (
            self.source.n_vertices == self.target.n_vertices
            and len(set(self.emap.values())) == len(self.emap) == len(self.target.edges)
            and all(len(s) == 1 for s in self.vertex_images.values())
        )

    def __repr__(self):
        pairs = ",".join(f"{a}>{b}" for a, b in self.edge_map)
        return f"<{self.source!r}->{self.target!r} {pairs}>"


def identity(t: Tree) -> OmegaMorphism:
    return OmegaMorphism(t, t, tuple((e, e) for e in t.edges))


def compose(g: OmegaMorphism, f: OmegaMorphism) -> OmegaMorphism:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise MorphismError("morphisms are not composable")
    return OmegaMorphism(f.source, g.target, tuple((e, g.emap[x]) for e, x in f.edge_map))


# --- Hom enumeration ---------------------------------------------------------


def _cuts(t: Tree) -> dict[str, list[tuple[str, ...]]]:
    """Edge -> leaf sets (sorted tuples) of the subtrees rooted there."""
    res = {}
    for e in t.edges:
        leafsets = []
        for vs in _subtree_vertex_sets(t, e):
            lv = sorted(x for w in vs for x in t.vertex[w].ins if t.producer.get(x) is None or t.producer[x].id not in vs)
            leafsets.append(tuple(lv))
        res[e] = leafsets
    return res


def _top_down(t: Tree) -> list:
    order = []
    stack = [t.root]
    while stack:
        e = stack.pop()
        u = t.producer.get(e)
        if u is not None:
            order.append(u)
            stack.extend(u.ins)
    return order


def iter_hom(R: Tree, S: Tree) -> Iterator[OmegaMorphism]:
    cuts = _cuts(S)
    by_size: dict[str, dict[int, list]] = {}
    for e, lst in cuts.items():
        d: dict[int, list] = {}
        for c in lst:
            d.setdefault(len(c), []).append(c)
        by_size[e] = d
    order = _top_down(R)

    def rec(i: int, assign: dict):
        if i == len(order):
            yield OmegaMorphism(R, S, tuple(assign.items()))
            return
        v = order[i]
        c = assign[v.out]
        k = v.valence
        if k == 1:
            assign[v.ins[0]] = c
            yield from rec(i + 1, assign)
            del assign[v.ins[0]]
        for cut in by_size[c].get(k, ()):
            for perm in itertools.permutations(cut):
                for e, x in zip(v.ins, perm):
                    assign[e] = x
                yield from rec(i + 1, assign)
            for e in v.ins:
                assign.pop(e, None)

    for c in sorted(S.edges):
        yield from rec(0, {R.root: c})


def hom_omega(R: Tree, S: Tree) -> list[OmegaMorphism]:
    return sorted(iter_hom(R, S), key=lambda f: f.edge_map)


@lru_cache(maxsize=None)
def hom_cached(R: Tree, S: Tree) -> tuple[OmegaMorphism, ...]:
    return tuple(hom_omega(R, S))


def automorphism_morphisms(t: Tree) -> list[OmegaMorphism]:
    return [f for f in hom_cached(t, t) if f.is_iso()]


def terminal_map(R: Tree, target: Tree) -> OmegaMorphism:
    """The unique map from a linear tree to a one-edge tree."""
    if not R.is_linear() or target.n_vertices:
        raise MorphismError("only linear trees map to the unit tree")
    (e,) = target.edges
    return OmegaMorphism(R, target, tuple((x, e) for x in R.edges))


# --- elementary maps and factorization ---------------------------------------


def inclusion(sub: Tree, t: Tree) -> OmegaMorphism:
    """Inclusion of a tree whose edge names are a subset of ``t``'s (faces
    built by contraction or by subtree selection keep names)."""
    return OmegaMorphism.make(sub, t, {e: e for e in sub.edges})


def degeneracy_map(t: Tree, v: str) -> OmegaMorphism:
    u = t.vertex[v]
    reduced = codegeneracy(t, v)
    emap = {e: e for e in t.edges}
    emap[u.ins[0]] = u.out
    return OmegaMorphism.make(t, reduced, emap)


@dataclass
class Factorization:
    degeneracies: list[OmegaMorphism]
    iso: OmegaMorphism
    faces: list[OmegaMorphism]

    def steps(self) -> list[OmegaMorphism]:
        return self.degeneracies + [self.iso] + self.faces

    def composite(self) -> OmegaMorphism:
        steps = self.steps()
        out = steps[0]
        for s in steps[1:]:
            out = compose(s, out)
        return out


def factorize(f: OmegaMorphism) -> Factorization:
    """Codegeneracies, then an isomorphism, then single-edge faces (inner
    then outer) whose composite is ``f``."""
    R, S = f.source, f.target
    degs = []
    cur = R
    fm = dict(f.emap)
    for v in sorted(f.vertex_images):
        if f.vertex_images[v]:
            continue
        d = degeneracy_map(cur, v)
        degs.append(d)
        cur = d.target
        fm = {e: fm[e] for e in cur.edges}
    image_vs = f.image_vertices()
    if image_vs:
        root = fm[R.root]
        image = Tree(root, tuple(S.vertex[v] for v in image_vs))
    else:
        (e,) = set(fm.values())
        image = Tree(e, ())
    used = set(fm.values())
    to_contract = sorted(e for e in image.inner_edges if e not in used)
    chain = [image]
    for e in to_contract:
        chain.append(contract(chain[-1], e))
    chain.reverse()
    iso = OmegaMorphism.make(cur, chain[0], fm)
    faces = [inclusion(a, b) for a, b in zip(chain, chain[1:])]
    # outer faces: grow the image one vertex at a time inside S
    grown = image
    while grown.n_vertices < S.n_vertices or (grown.n_vertices == 0 and S.n_vertices > 0):
        nxt = _grow(grown, S)
        faces.append(inclusion(grown, nxt))
        grown = nxt
    return Factorization(degs, iso, faces)


def _grow(sub: Tree, S: Tree) -> Tree:
    vs = {v.id for v in sub.vertices}
    below = S.consumer.get(sub.root)
    if below is not None:
        return Tree(below.out, tuple(S.vertex[v] for v in vs | {below.id}))
    for e in sorted(sub.leaves):
        above = S.producer.get(e)
        if above is not None:
            return Tree(sub.root, tuple(S.vertex[v] for v in vs | {above.id}))
    raise TreeError("subtree is already everything")


def canonical_target_iso(t: Tree) -> OmegaMorphism:
    from .trees import canonical_iso

    return OmegaMorphism.make(t, canonical_tree(t), canonical_iso(t))
