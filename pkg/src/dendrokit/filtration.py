"""Primitive dendrices and the filtration of a free-operad nerve.

A dendrex of ``nerve(T_M)`` at ``S`` labels each vertex by an element of
``T_M``.  It is *primitive* when every label is a single generator with
permuted inputs; after reordering the inputs (:func:`replan`) the labels
become bare generators, i.e. a valence-preserving map ``V(S) -> M``.
``Psi^n`` is generated by primitives on trees with at most ``n`` vertices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .dendroidal import (
    BASEPOINT,
    Generated,
    NerveFree,
    Reduced,
    Representable,
    Skeleton,
    default_skeleton,
    external_boundary,
    to_skeleton,
)
from .omega import OmegaMorphism, automorphism_morphisms, compose, degeneracy_map, identity
from .operads import Leaf, Node, Term, UNIT, generator, relabel, replan, size
from .trees import GradedSet, Tree, automorphisms, codegeneracy, inner_coface, vertex_map_of_iso


# --- labelings ---------------------------------------------------------------


def labelings(S: Tree, M: GradedSet) -> list[tuple[tuple[str, str], ...]]:
    """Valence-preserving maps ``V(S) -> M``."""
    pools = [[(v.id, m) for m in M.with_valence(v.valence)] for v in S.vertices]
    return [tuple(c) for c in itertools.product(*pools)]


def primitives(S: Tree, M: GradedSet) -> tuple[list, int]:
    """All labelings and the number of their orbits under ``Aut(S)``."""
    labs = labelings(S, M)
    vmaps = [vertex_map_of_iso(S, S, a) for a in automorphisms(S)]
    seen = set()
    orbits = 0
    for lab in labs:
        if lab in seen:
            continue
        orbits += 1
        d = dict(lab)
        for vm in vmaps:
            seen.add(tuple(sorted((vm[v], m) for v, m in d.items())))
    return labs, orbits


def is_permuted_generator(t: Term) -> bool:
    return isinstance(t, Node) and all(isinstance(a, Leaf) for a in t.args)


def is_primitive_dendrex(x) -> bool:
    return all(is_permuted_generator(t) for _, t in x)


def primitive_dendrices(S: Tree, M: GradedSet) -> list[tuple]:
    """Dendrices at ``S`` whose labels are permuted generators."""
    pools = []
    for v in S.vertices:
        k = v.valence
        opts = []
        for m in M.with_valence(k):
            for p in itertools.permutations(range(1, k + 1)):
                opts.append((v.id, Node(m, tuple(Leaf(i) for i in p))))
        pools.append(opts)
    return [tuple(c) for c in itertools.product(*pools)]


def primitive_orbit_representatives(S: Tree, M: GradedSet, X: NerveFree) -> list[tuple]:
    """One primitive dendrex per ``Aut(S)``-orbit, the least in ``repr``
    order."""
    auts = automorphism_morphisms(S)
    prims = sorted(primitive_dendrices(S, M), key=repr)
    seen = set()
    reps = []
    for p in prims:
        if p in seen:
            continue
        reps.append(p)
        for a in auts:
            seen.add(X.act(a, p))
    return reps


# --- spreading apart ---------------------------------------------------------


@dataclass
class SpreadResult:
    source: Tree
    chain: list[OmegaMorphism]
    terminal_tree: Tree
    terminal: tuple
    planar_tree: Tree
    primitive_labels: dict[str, str]

    def composite(self) -> OmegaMorphism:
        f = identity(self.source)
        for g in self.chain:
            f = compose(g, f)
        return f

    def to_json(self):
        return {
            "source": self.source.code,
            "steps": [repr(g) for g in self.chain],
            "terminal_tree": self.terminal_tree.to_json(),
            "labels": self.primitive_labels,
        }


def _split(label: Node) -> tuple[int, Node] | None:
    for i, a in enumerate(label.args):
        if isinstance(a, Node):
            return i, a
    return None


def spread_apart(S: Tree, beta: tuple) -> SpreadResult:
    """Factor ``beta`` as the pullback of a primitive dendrex along a chain
    of inner cofaces and codegeneracies, followed by a planar adjustment."""
    T = S
    labels = dict(beta)
    chain: list[OmegaMorphism] = []
    while True:
        unit = next((v for v in sorted(labels) if labels[v] == UNIT), None)
        if unit is not None:
            d = degeneracy_map(T, unit)
            chain.append(d)
            T = d.target
            del labels[unit]
            continue
        target = None
        for v in sorted(labels):
            cut = _split(labels[v])
            if cut is not None:
                target = (v, cut)
                break
        if target is None:
            break
        v, (i, child) = target
        vert = T.vertex[v]
        lab = labels[v]
        child_leaves = sorted(_leaf_labels(child))
        upper = tuple(vert.ins[l - 1] for l in child_leaves)
        rest_labels = [l for l in range(1, vert.valence + 1) if l not in child_leaves]
        T2, e = inner_coface(T, v, upper, position=len(rest_labels))
        v1 = T2.producer[vert.out].id
        v2 = T2.producer[e].id
        upper_label = relabel(child, {l: j + 1 for j, l in enumerate(child_leaves)})
        new_leaf = len(rest_labels) + 1
        lower_map = {l: j + 1 for j, l in enumerate(rest_labels)}
        args = list(lab.args)
        args[i] = Leaf(-1)
        lower = relabel(Node(lab.op, tuple(args)), {**lower_map, -1: new_leaf})
        f = OmegaMorphism.make(T, T2, {x: x for x in T.edges})
        chain.append(f)
        del labels[v]
        labels[v1] = lower
        labels[v2] = upper_label
        T = T2
    terminal = tuple(sorted(labels.items()))
    planar, bare = replan(T, labels)
    P = T.with_planar(planar)
    prim = {v: t.op for v, t in bare.items()}
    return SpreadResult(S, chain, T, terminal, P, prim)


def _leaf_labels(t: Term) -> list[int]:
    if isinstance(t, Leaf):
        return [t.label]
    return [x for a in t.args for x in _leaf_labels(a)]


# --- Psi filtration ----------------------------------------------------------


def total_size(x) -> int:
    return sum(size(t) for _, t in x)


def psi(M: GradedSet, n: int, skeleton: Skeleton | None = None, X: NerveFree | None = None) -> Generated:
    """Sub-presheaf of ``nerve(T_M)`` generated by primitive dendrices on
    skeleton trees with at most ``n`` vertices."""
    sk = skeleton or default_skeleton()
    X = X or NerveFree(M, sk)
    seeds = []
    for T in sk.trees:
        if T.n_vertices <= n:
            seeds.extend((T, p) for p in primitive_dendrices(T, M))
    return Generated(X, seeds)


def psi_oracle(X: NerveFree, n: int) -> dict[str, frozenset]:
    """Independent description: dendrices of total label size at most ``n``."""
    return {T.code: frozenset(x for x in X.level(T) if total_size(x) <= n) for T in X.skeleton.trees}


@dataclass
class FiltrationReport:
    exhaustive: bool
    recomposition: bool
    subtree_property: bool
    oracle_match: bool
    pushout_counts_match: bool
    monotone: bool
    per_level_sizes: dict
    pushout_table: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    truncated: bool = False

    @property
    def passed(self) -> bool:
        return all(
            [
                self.exhaustive,
                self.recomposition,
                self.subtree_property,
                self.oracle_match,
                self.pushout_counts_match,
                self.monotone,
            ]
        )

    def to_json(self):
        return {
            "passed": self.passed,
            "exhaustive": self.exhaustive,
            "recomposition": self.recomposition,
            "subtree_property": self.subtree_property,
            "oracle_match": self.oracle_match,
            "pushout_counts_match": self.pushout_counts_match,
            "monotone": self.monotone,
            "per_level_sizes": self.per_level_sizes,
            "pushout_table": self.pushout_table,
            "witnesses": self.witnesses,
            "truncated": self.truncated,
        }


def verify_filtration(M: GradedSet, bound: int = 3, max_valence: int | None = None) -> FiltrationReport:
    mv = max_valence if max_valence is not None else max([2] + [k + 1 for _, k in M.gens])
    sk = default_skeleton(bound, mv)
    X = NerveFree(M, sk)
    witnesses: dict = {}
    psis = {n: psi(M, n, sk, X) for n in range(0, bound + 1)}

    # (i) every dendrex spreads apart to a primitive and recomposes
    exhaustive = True
    recomposition = True
    for S in sk.trees:
        for x in X.level(S):
            r = spread_apart(S, x)
            if not is_primitive_dendrex(r.terminal):
                exhaustive = False
                witnesses.setdefault("not_primitive", repr(x))
            comp = r.composite()
            if X.act(comp, r.terminal) != x:
                recomposition = False
                witnesses.setdefault("recomposition", repr(x))
            n = r.terminal_tree.n_vertices
            if n <= bound and r.terminal_tree.code in sk.by_code:
                canon, iso = to_skeleton(r.terminal_tree)
                # move the terminal onto the canonical tree
                inv = OmegaMorphism.make(canon, r.terminal_tree, {b: a for a, b in iso.emap.items()})
                moved = X.act(inv, r.terminal)
                if not psis[n].contains(canon, moved) or not psis[n].contains(S, x):
                    exhaustive = False
                    witnesses.setdefault("not_in_psi", repr(x))

    # (ii) restrictions of primitives to proper subtrees drop a filtration step
    from .dendroidal import face_inclusion
    from .trees import subtrees

    subtree_ok = True
    for S in sk.trees:
        if S.n_vertices == 0:
            continue
        for p in primitive_dendrices(S, M):
            for R, _ in subtrees(S):
                if R.n_vertices >= S.n_vertices:
                    continue
                f = face_inclusion(R, S, sk)
                if not psis[S.n_vertices - 1].contains(f.source, X.act(f, p)):
                    subtree_ok = False
                    witnesses.setdefault("subtree", [S.code, repr(p), R.code])

    # oracle and monotonicity
    oracle_ok = True
    monotone = True
    sizes = {}
    for n, P in psis.items():
        orc = psi_oracle(X, n)
        sizes[n] = {T.code: len(P.level(T)) for T in sk.trees}
        for T in sk.trees:
            if P._level_set(T) != orc[T.code]:
                oracle_ok = False
                witnesses.setdefault("oracle", [n, T.code])
            if n and not psis[n - 1]._level_set(T) <= P._level_set(T):
                monotone = False

    # (iii) pushout counts
    pushout_ok = True
    table = []
    for n in range(1, bound + 1):
        attach = []
        for T in sk.trees:
            if T.n_vertices != n:
                continue
            reps = primitive_orbit_representatives(T, M, X)
            if not reps:
                continue
            free_part = Reduced(Representable(T, sk))
            bdry = external_boundary(T, sk)
            attach.append((T, len(reps), free_part, bdry))
        for S in sk.trees:
            added = 0
            for T, k, full, bdry in attach:
                added += k * len(full._level_set(S) - bdry._level_set(S))
            lhs = len(psis[n].level(S))
            rhs = len(psis[n - 1].level(S)) + added
            table.append({"n": n, "tree": S.code, "psi_n": lhs, "psi_prev_plus_cells": rhs})
            if lhs != rhs:
                pushout_ok = False
                witnesses.setdefault("pushout", [n, S.code, lhs, rhs])

    return FiltrationReport(
        exhaustive,
        recomposition,
        subtree_ok,
        oracle_ok,
        pushout_ok,
        monotone,
        {str(n): s for n, s in sizes.items()},
        table,
        witnesses,
        X.truncated,
    )
