"""Finite rooted non-planar trees.

A tree is stored as a root edge plus one record per vertex giving its
outgoing edge and a tuple of incoming edges.  The tuple order is a planar
structure; it is scaffolding only, and all identity questions go through
:func:`canonical_form` or explicit edge bijections.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    out: str
    ins: tuple[str, ...]

    @property
    def valence(self) -> int:
        return len(self.ins)


@dataclass(frozen=True, eq=True)
class Tree:
    root: str
    vertices: tuple[Vertex, ...]

    def __post_init__(self):
        verts = tuple(sorted(self.vertices, key=lambda v: v.id))
        object.__setattr__(self, "vertices", verts)
        self._validate()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.root, self.vertices))
            self.__dict__["_hash"] = h
        return h

    def _validate(self):
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise TreeError("duplicate vertex identifiers")
        outs = [v.out for v in self.vertices]
        if len(set(outs)) != len(outs):
            raise TreeError("two vertices share an outgoing edge")
        consumed = [e for v in self.vertices for e in v.ins]
        if len(set(consumed)) != len(consumed):
            raise TreeError("an edge is incoming to two vertices")
        if self.root in consumed:
            raise TreeError("root edge cannot be an incoming edge")
        for v in self.vertices:
            if v.out in v.ins:
                raise TreeError(f"vertex {v.id} has a loop")
        if self.vertices and self.root not in outs:
            raise TreeError("root edge must be the outgoing edge of a vertex")
        # every vertex must reach the root; this also rules out cycles
        seen = set()
        stack = [self.root]
        while stack:
            e = stack.pop()
            u = self.producer.get(e)
            if u is None:
                continue
            if u.id in seen:
                raise TreeError("cycle detected")
            seen.add(u.id)
            stack.extend(u.ins)
        if len(seen) != len(self.vertices):
            raise TreeError("tree is not connected")

    # --- derived structure -------------------------------------------------

    @cached_property
    def producer(self) -> dict[str, Vertex]:
        """Edge -> the vertex whose outgoing edge it is."""
        return {v.out: v for v in self.vertices}

    @cached_property
    def consumer(self) -> dict[str, Vertex]:
        """Edge -> the vertex it is an incoming edge of."""
        return {e: v for v in self.vertices for e in v.ins}

    @cached_property
    def vertex(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edges(self) -> frozenset[str]:
        es = {self.root}
        for v in self.vertices:
            es.add(v.out)
            es.update(v.ins)
        return frozenset(es)

    @cached_property
    def leaves(self) -> frozenset[str]:
        return frozenset(e for e in self.edges if e not in self.producer)

    @cached_property
    def inner_edges(self) -> frozenset[str]:
        return frozenset(e for e in self.edges if e in self.producer and e in self.consumer)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def valences(self) -> dict[str, int]:
        return {v.id: v.valence for v in self.vertices}

    def is_linear(self) -> bool:
        return all(v.valence == 1 for v in self.vertices)

    @cached_property
    def code(self) -> str:
        return canonical_form(self)

    def preorder_edges(self) -> list[str]:
        out = []
        stack = [self.root]
        while stack:
            e = stack.pop()
            out.append(e)
            u = self.producer.get(e)
            if u is not None:
                stack.extend(reversed(u.ins))
        return out

    def above(self, e: str) -> frozenset[str]:
        """Vertices lying above edge ``e`` (the branch rooted at ``e``)."""
        res = set()
        stack = [e]
        while stack:
            x = stack.pop()
            u = self.producer.get(x)
            if u is not None:
                res.add(u.id)
                stack.extend(u.ins)
        return frozenset(res)

    def rename(self, edge_names: Mapping[str, str], vertex_names: Mapping[str, str] | None = None) -> "Tree":
        vn = vertex_names or {}
        return Tree(
            edge_names.get(self.root, self.root),
            tuple(
                Vertex(vn.get(v.id, v.id), edge_names.get(v.out, v.out), tuple(edge_names.get(e, e) for e in v.ins))
                for v in self.vertices
            ),
        )

    def with_planar(self, planar: Mapping[str, tuple[str, ...]]) -> "Tree":
        verts = []
        for v in self.vertices:
            order = tuple(planar.get(v.id, v.ins))
            if sorted(order) != sorted(v.ins):
                raise TreeError(f"planar order for {v.id} does not cover its incoming edges")
            verts.append(Vertex(v.id, v.out, order))
        return Tree(self.root, tuple(verts))

    def planar_structure(self) -> dict[str, tuple[str, ...]]:
        return {v.id: v.ins for v in self.vertices}

    def __repr__(self):
        return f"Tree({self.code})" if self.vertices else "Tree(eta)"

    # --- JSON ----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "vertices": [{"id": v.id, "out": v.out, "in": list(v.ins)} for v in self.vertices],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Tree":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(
                data["root"],
                tuple(Vertex(str(v["id"]), str(v["out"]), tuple(str(e) for e in v["in"])) for v in data.get("vertices", [])),
            )
        except KeyError as exc:
            raise TreeError(f"missing field {exc}") from None


@dataclass(frozen=True)
class GradedSet:
    """A finite set whose elements carry valences."""

    gens: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(sorted(self.gens)))
        names = [g for g, _ in self.gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        if any(k < 0 for _, k in self.gens):
            raise ValueError("valences must be non-negative")

    @classmethod
    def of(cls, **valences: int) -> "GradedSet":
        return cls(tuple(valences.items()))

    @cached_property
    def valence(self) -> dict[str, int]:
        return dict(self.gens)

    @property
    def names(self) -> list[str]:
        return [g for g, _ in self.gens]

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def with_valence(self, k: int) -> list[str]:
        return [g for g, v in self.gens if v == k]

    def to_json(self) -> dict:
        return {"gens": [{"name": g, "valence": k} for g, k in self.gens]}

    @classmethod
    def from_json(cls, data: dict | str) -> "GradedSet":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple((str(g["name"]), int(g["valence"])) for g in data["gens"]))


EMPTY = GradedSet(())


# --- constructors ------------------------------------------------------------


def eta(edge: str = "e0") -> Tree:
    return Tree(edge, ())


def corolla(n: int) -> Tree:
    if n < 0:
        raise ValueError("valence must be non-negative")
    return Tree("e0", (Vertex("v0", "e0", tuple(f"e{i + 1}" for i in range(n))),))


def linear(n: int) -> Tree:
    """Chain of ``n`` unary vertices; ``linear(0)`` is the unit tree."""
    if n < 0:
        raise ValueError("length must be non-negative")
    return Tree("e0", tuple(Vertex(f"v{i}", f"e{i}", (f"e{i + 1}",)) for i in range(n)))


def from_valences_chain(valences: list[int]) -> Tree:
    """Some tree whose vertex valences are exactly ``valences``.

    Vertices are attached greedily on the first free input of earlier
    vertices.  Raises if no tree has this valence profile.
    """
    if not valences:
        return eta()
    order = sorted(valences, reverse=True)
    if sum(order) < len(order) - 1:
        raise TreeError("not enough inputs to connect the vertices")
    verts: list[list] = []
    free: list[tuple[int, int]] = []
    counter = itertools.count(1)
    verts.append(["v0", "e0", [f"e{next(counter)}" for _ in range(order[0])]])
    free.extend((0, i) for i in range(order[0]))
    for k, val in enumerate(order[1:], start=1):
        if not free:
            raise TreeError("not enough inputs to connect the vertices")
        vi, slot = free.pop(0)
        out = verts[vi][2][slot]
        verts.append([f"v{k}", out, [f"e{next(counter)}" for _ in range(val)]])
        free.extend((k, i) for i in range(val))
    return Tree("e0", tuple(Vertex(i, o, tuple(ins)) for i, o, ins in verts))


# --- canonical forms ---------------------------------------------------------


def _branch_code(t: Tree, e: str, memo: dict) -> str:
    if e in memo:
        return memo[e]
    u = t.producer.get(e)
    if u is None:
        c = "."
    else:
        c = "(" + "".join(sorted(_branch_code(t, i, memo) for i in u.ins)) + ")"
    memo[e] = c
    return c


def branch_codes(t: Tree) -> dict[str, str]:
    memo: dict[str, str] = {}
    for e in t.edges:
        _branch_code(t, e, memo)
    return memo


def canonical_form(t: Tree) -> str:
    """Isomorphism-class code: ``.`` for a leaf, ``(...)`` for a vertex
    with the sorted codes of its inputs inside."""
    return _branch_code(t, t.root, {})


def _parse_code(code: str, pos: int = 0) -> tuple[object, int]:
    if code[pos] == ".":
        return None, pos + 1
    if code[pos] != "(":
        raise TreeError(f"bad tree code at position {pos}")
    pos += 1
    kids = []
    while code[pos] != ")":
        kid, pos = _parse_code(code, pos)
        kids.append(kid)
    return kids, pos + 1


def from_code(code: str) -> Tree:
    """The canonical representative of a code, with edges ``e0, e1, ...``
    and vertices ``v0, v1, ...`` numbered in preorder."""
    shape, end = _parse_code(code)
    if end != len(code):
        raise TreeError("trailing characters in tree code")
    verts = []
    ecount = itertools.count()
    vcount = itertools.count()

    def build(node, edge):
        if node is None:
            return
        vid = f"v{next(vcount)}"
        ins = [f"e{next(ecount)}" for _ in node]
        verts.append(Vertex(vid, edge, tuple(ins)))
        for kid, e in zip(node, ins):
            build(kid, e)

    root = f"e{next(ecount)}"
    build(shape, root)
    return Tree(root, tuple(verts))


def canonical_tree(t: Tree) -> Tree:
    return from_code(canonical_form(t))


def _iso_branches(s: Tree, es: str, t: Tree, et: str, cs: dict, ct: dict) -> Iterator[dict[str, str]]:
    if cs[es] != ct[et]:
        return
    us, ut = s.producer.get(es), t.producer.get(et)
    if us is None:
        yield {es: et}
        return
    # pair inputs with equal codes in every admissible way
    groups: dict[str, list[str]] = {}
    for e in us.ins:
        groups.setdefault(cs[e], []).append(e)
    tgroups: dict[str, list[str]] = {}
    for e in ut.ins:
        tgroups.setdefault(ct[e], []).append(e)
    pairings_per_group = []
    for code, src in sorted(groups.items()):
        tgt = tgroups[code]
        pairings_per_group.append([list(zip(src, perm)) for perm in itertools.permutations(tgt)])
    for choice in itertools.product(*pairings_per_group):
        pairs = [p for grp in choice for p in grp]

        def rec(i):
            if i == len(pairs):
                yield {}
                return
            a, b = pairs[i]
            for sub in _iso_branches(s, a, t, b, cs, ct):
                for rest in rec(i + 1):
                    d = dict(sub)
                    d.update(rest)
                    yield d

        for d in rec(0):
            d[es] = et
            yield d


def isomorphisms(s: Tree, t: Tree) -> Iterator[dict[str, str]]:
    """All root-preserving isomorphisms ``s -> t`` as edge bijections."""
    yield from _iso_branches(s, s.root, t, t.root, branch_codes(s), branch_codes(t))


def canonical_iso(t: Tree) -> dict[str, str]:
    """One isomorphism from ``t`` onto its canonical representative."""
    return next(isomorphisms(t, canonical_tree(t)))


def automorphisms(t: Tree) -> list[dict[str, str]]:
    return list(isomorphisms(t, t))


def vertex_map_of_iso(s: Tree, t: Tree, edge_map: Mapping[str, str]) -> dict[str, str]:
    return {v.id: t.producer[edge_map[v.out]].id for v in s.vertices}


# --- subtrees and surgeries --------------------------------------------------


def _subtree_vertex_sets(t: Tree, e: str) -> list[frozenset[str]]:
    """Non-empty connected vertex sets whose lowest vertex produces ``e``."""
    u = t.producer.get(e)
    if u is None:
        return []
    options = [[frozenset()] + _subtree_vertex_sets(t, i) for i in u.ins]
    return [frozenset({u.id}).union(*combo) for combo in itertools.product(*options)]


def subtree_from_vertices(t: Tree, root: str, vset: frozenset[str]) -> Tree:
    return Tree(root, tuple(t.vertex[v] for v in vset))


def subtrees(t: Tree) -> list[tuple[Tree, dict[str, str]]]:
    """All subtrees with their embeddings (edge names are kept, so every
    embedding is the identity on names)."""
    out = []
    for e in sorted(t.edges):
        sub = eta(e)
        out.append((sub, {e: e}))
    for e in sorted(t.producer):
        for vs in _subtree_vertex_sets(t, e):
            sub = subtree_from_vertices(t, e, vs)
            out.append((sub, {x: x for x in sub.edges}))
    return out


def _fresh(base: str, taken) -> str:
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def inner_coface(t: Tree, v: str, upper: tuple[str, ...], position: int = 0) -> tuple[Tree, str]:
    """Split vertex ``v`` in two.

    The new upper vertex takes the incoming edges ``upper`` (in that order);
    the lower vertex keeps the rest and receives the new edge at index
    ``position`` among its inputs.  Returns the new tree and new edge.
    """
    if v not in t.vertex:
        raise TreeError(f"unknown vertex {v}")
    old = t.vertex[v]
    if len(set(upper)) != len(upper) or not set(upper) <= set(old.ins):
        raise TreeError("upper inputs must be distinct incoming edges of the vertex")
    rest = [e for e in old.ins if e not in upper]
    if not 0 <= position <= len(rest):
        raise TreeError("graft position out of range")
    new_edge = _fresh(f"{v}_e", t.edges)
    ids = set(t.vertex)
    v1 = _fresh(f"{v}_1", ids)
    v2 = _fresh(f"{v}_2", ids | {v1})
    lower_ins = tuple(rest[:position] + [new_edge] + rest[position:])
    verts = [w for w in t.vertices if w.id != v]
    verts.append(Vertex(v1, old.out, lower_ins))
    verts.append(Vertex(v2, new_edge, tuple(upper)))
    return Tree(t.root, tuple(verts)), new_edge


def contract(t: Tree, e: str) -> Tree:
    """Contract inner edge ``e``; the merged vertex keeps the lower id."""
    if e not in t.inner_edges:
        raise TreeError(f"{e} is not an inner edge")
    upper = t.producer[e]
    lower = t.consumer[e]
    ins = []
    for x in lower.ins:
        if x == e:
            ins.extend(upper.ins)
        else:
            ins.append(x)
    verts = [w for w in t.vertices if w.id not in (upper.id, lower.id)]
    verts.append(Vertex(lower.id, lower.out, tuple(ins)))
    return Tree(t.root, tuple(verts))


def codegeneracy(t: Tree, v: str) -> Tree:
    """Remove unary vertex ``v``, merging its two edges under the name of
    its outgoing edge."""
    if v not in t.vertex:
        raise TreeError(f"unknown vertex {v}")
    old = t.vertex[v]
    if old.valence != 1:
        raise TreeError(f"vertex {v} is not unary")
    (inc,) = old.ins
    verts = []
    for w in t.vertices:
        if w.id == v:
            continue
        out = old.out if w.out == inc else w.out
        verts.append(Vertex(w.id, out, w.ins))
    return Tree(t.root, tuple(verts))


# --- enumeration -------------------------------------------------------------


def _codes(n_vertices: int, max_valence: int, memo: dict) -> list[str]:
    """Branch codes with exactly ``n_vertices`` vertices."""
    key = n_vertices
    if key in memo:
        return memo[key]
    if n_vertices == 0:
        res = ["."]
    else:
        res_set = set()
        for k in range(max_valence + 1):
            # distribute n_vertices - 1 among k children as a multiset
            for parts in _partitions(n_vertices - 1, k):
                pools = [_codes(p, max_valence, memo) for p in parts]
                for combo in itertools.product(*pools):
                    res_set.add("(" + "".join(sorted(combo)) + ")")
        res = sorted(res_set)
    memo[key] = res
    return res


def _partitions(total: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _partitions(total - first, k - 1):
            yield (first,) + rest


def enumerate_codes(max_vertices: int, max_valence: int) -> list[str]:
    memo: dict = {}
    out = []
    for n in range(max_vertices + 1):
        out.extend(_codes(n, max_valence, memo))
    return out


def enumerate_trees(max_vertices: int, max_valence: int) -> list[Tree]:
    """Canonical trees with at most ``max_vertices`` vertices, each of
    valence at most ``max_valence``, ordered by size then code."""
    return [from_code(c) for c in enumerate_codes(max_vertices, max_valence)]


def to_dot(t: Tree) -> str:
    lines = ["digraph tree {", "  rankdir=BT;"]
    for v in t.vertices:
        lines.append(f'  "{v.id}" [shape=circle];')
    lines.append('  "root" [shape=point];')
    for e in sorted(t.edges):
        top = t.producer.get(e)
        bottom = t.consumer.get(e)
        a = f'"{top.id}"' if top else f'"leaf_{e}"'
        b = f'"{bottom.id}"' if bottom else '"root"'
        if top is None:
            lines.append(f'  "leaf_{e}" [shape=point];')
        lines.append(f'  {a} -> {b} [label="{e}"];')
    lines.append("}")
    return "\n".join(lines)
