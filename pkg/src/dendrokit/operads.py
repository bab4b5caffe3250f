"""Free symmetric operads on graded sets.

Elements of the free operad ``T_M`` are planar terms whose leaves carry a
bijective labelling by ``1..n``.  The generators carry no symmetric-group
action, so no quotient is needed: two terms are equal exactly when they
are structurally equal.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .omega import OmegaMorphism
from .trees import EMPTY, GradedSet, Tree


class OperadError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Leaf:
    label: int

    def __repr__(self):
        return str(self.label)


@dataclass(frozen=True, order=True)
class Node:
    op: str
    args: tuple["Term", ...]

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = hash((self.op, self.args))
        return h

    def __repr__(self):
        return f"{self.op}({','.join(map(repr, self.args))})"


Term = Union[Leaf, Node]
UNIT = Leaf(1)


def leaves_in_order(t: Term) -> list[int]:
    if isinstance(t, Leaf):
        return [t.label]
    return [x for a in t.args for x in leaves_in_order(a)]


def arity(t: Term) -> int:
    return len(leaves_in_order(t))


def size(t: Term) -> int:
    """Number of generator occurrences."""
    if isinstance(t, Leaf):
        return 0
    return 1 + sum(size(a) for a in t.args)


def ops_used(t: Term) -> set[str]:
    if isinstance(t, Leaf):
        return set()
    return {t.op}.union(*(ops_used(a) for a in t.args)) if t.args else {t.op}


def is_element(t: Term, M: GradedSet) -> bool:
    def ok(x):
        if isinstance(x, Leaf):
            return True
        return M.valence.get(x.op) == len(x.args) and all(ok(a) for a in x.args)

    labels = leaves_in_order(t)
    return ok(t) and sorted(labels) == list(range(1, len(labels) + 1))


def relabel(t: Term, mapping: Mapping[int, int]) -> Term:
    if isinstance(t, Leaf):
        return Leaf(mapping[t.label])
    return Node(t.op, tuple(relabel(a, mapping) for a in t.args))


def substitute(t: Term, slots: Mapping[int, Term]) -> Term:
    """Replace leaf ``i`` by ``slots[i]`` (labels inside ``slots`` are kept)."""
    if isinstance(t, Leaf):
        return slots[t.label]
    return Node(t.op, tuple(substitute(a, slots) for a in t.args))


def generator(op: str, valence: int) -> Term:
    return Node(op, tuple(Leaf(i + 1) for i in range(valence)))


# --- operad structure --------------------------------------------------------


def gamma(f: Term, args: Sequence[Term]) -> Term:
    """Operadic composition; the i-th argument's inputs occupy the i-th block."""
    n = arity(f)
    if len(args) != n:
        raise OperadError(f"expected {n} arguments, got {len(args)}")
    slots = {}
    offset = 0
    for i, a in enumerate(args, start=1):
        k = arity(a)
        slots[i] = relabel(a, {j: offset + j for j in range(1, k + 1)})
        offset += k
    return substitute(f, slots)


def partial(f: Term, i: int, g: Term) -> Term:
    """``f o_i g``: graft ``g`` into input ``i`` of ``f``."""
    n = arity(f)
    if not 1 <= i <= n:
        raise OperadError("input index out of range")
    return gamma(f, [UNIT] * (i - 1) + [g] + [UNIT] * (n - i))


def sigma_action(f: Term, perm: Sequence[int]) -> Term:
    """Right action: ``perm[i-1]`` is the image of ``i``; leaf ``i`` of ``f``
    becomes leaf ``perm^{-1}(i)``."""
    n = arity(f)
    if sorted(perm) != list(range(1, n + 1)):
        raise OperadError("permutation size does not match arity")
    inv = {p: i + 1 for i, p in enumerate(perm)}
    return relabel(f, inv)


def perm_compose(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``s`` after ``t``."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


# --- enumeration -------------------------------------------------------------


def _shapes(M: GradedSet, k: int, budget: int, memo: dict) -> list[tuple[Term, int]]:
    """Planar shapes with ``k`` unlabelled leaves (all ``Leaf(0)``) and at most
    ``budget`` vertices, paired with their vertex counts."""
    key = (k, budget)
    if key in memo:
        return memo[key]
    res: list[tuple[Term, int]] = []
    if k == 1:
        res.append((Leaf(0), 0))
    if budget > 0:
        for op, val in M.gens:
            for parts in _compositions(k, val):
                res.extend(_fill(M, op, parts, budget - 1, memo))
    memo[key] = res
    return res


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _fill(M, op, parts, budget, memo):
    def rec(i, remaining):
        if i == len(parts):
            yield (), 0
            return
        for sh, n in _shapes(M, parts[i], remaining, memo):
            for tail, m in rec(i + 1, remaining - n):
                yield (sh,) + tail, n + m

    for kids, n in rec(0, budget):
        yield Node(op, kids), n + 1


def _fill_labels(shape: Term, labels: Iterable[int]) -> Term:
    it = iter(labels)

    def go(x):
        if isinstance(x, Leaf):
            return Leaf(next(it))
        return Node(x.op, tuple(go(a) for a in x.args))

    return go(shape)


def elements(M: GradedSet, n: int, max_vertices: int) -> list[Term]:
    """Elements of ``T_M(n)`` with at most ``max_vertices`` generator
    occurrences.  See :func:`is_complete` for when this is all of it."""
    return list(_elements_cached(M, n, max_vertices))


@lru_cache(maxsize=None)
def _elements_cached(M: GradedSet, n: int, max_vertices: int) -> tuple[Term, ...]:
    if max_vertices < 0 or n < 0:
        return ()
    memo: dict = {}
    out = []
    for shape, _ in _shapes(M, n, max_vertices, memo):
        for perm in itertools.permutations(range(1, n + 1)):
            out.append(_fill_labels(shape, perm))
    return tuple(sorted(set(out), key=_term_key))


def _term_key(t: Term):
    return (size(t), repr(t))


def is_complete(M: GradedSet, n: int, max_vertices: int) -> bool:
    """Whether ``elements(M, n, max_vertices)`` is all of ``T_M(n)``."""
    vals = [k for _, k in M.gens]
    if not vals:
        return max_vertices >= 0
    if min(vals) >= 2:
        return max_vertices >= max(n - 1, 0)
    if max(vals) == 0:
        return max_vertices >= 1
    return False


def complete_bound(M: GradedSet, n: int) -> int | None:
    for b in range(0, n + 2):
        if is_complete(M, n, b):
            return b
    return None


# --- maps between free operads -----------------------------------------------


@dataclass(frozen=True)
class FreeOperadMap:
    """A map ``T_N -> T_M`` given by generator images."""

    source: GradedSet
    target: GradedSet
    images: tuple[tuple[str, Term], ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(sorted(self.images)))
        if not self.check:
            return
        img = dict(self.images)
        if set(img) != set(self.source.names):
            raise OperadError("images must cover the source generators")
        for g, k in self.source.gens:
            if not is_element(img[g], self.target) or arity(img[g]) != k:
                raise OperadError(f"image of {g} is not an arity-{k} element of the target")

    @property
    def image(self) -> dict[str, Term]:
        return dict(self.images)

    def apply(self, t: Term) -> Term:
        img = self.image
        return _apply(t, img)

    def then(self, other: "FreeOperadMap") -> "FreeOperadMap":
        """``other`` after ``self``."""
        if self.target != other.source:
            raise OperadError("maps are not composable")
        img = other.image
        return FreeOperadMap(self.source, other.target, tuple((g, _apply(t, img)) for g, t in self.images), check=False)

    def key(self):
        return self.images

    def size(self) -> int:
        return max((size(t) for _, t in self.images), default=0)

    def to_json(self) -> dict:
        return {g: term_to_json(t) for g, t in self.images}


def _apply(t: Term, img: Mapping[str, Term]) -> Term:
    if isinstance(t, Leaf):
        return t
    return substitute(img[t.op], {i + 1: _apply(a, img) for i, a in enumerate(t.args)})


def hom_free(N: GradedSet, M: GradedSet, max_vertices: int) -> list[FreeOperadMap]:
    pools = [elements(M, k, max_vertices) for _, k in N.gens]
    names = N.names
    return [FreeOperadMap(N, M, tuple(zip(names, combo))) for combo in itertools.product(*pools)]


def hom_free_complete(N: GradedSet, M: GradedSet, max_vertices: int) -> bool:
    return all(is_complete(M, k, max_vertices) for _, k in N.gens)


def unit_map(N: GradedSet, M: GradedSet) -> FreeOperadMap:
    """Every generator to the unit; only exists when all valences are 1."""
    return FreeOperadMap(N, M, tuple((g, UNIT) for g in N.names))


# --- trees as theory objects -------------------------------------------------


def J(S: Tree) -> GradedSet:
    """The graded set of vertices of ``S``; ``T_{J(S)}`` is the free operad
    on it.  Generator ``v`` has its inputs in ``S``'s planar order."""
    return GradedSet(tuple((v.id, v.valence) for v in S.vertices))


def subtree_term(S: Tree, root: str, leaf_order: Sequence[str]) -> Term:
    """The element of ``T_{J(S)}`` read off the subtree of ``S`` with root
    ``root`` whose leaf ``leaf_order[i]`` is labelled ``i+1``."""
    if len(leaf_order) == 1 and leaf_order[0] == root:
        return UNIT
    label = {e: i + 1 for i, e in enumerate(leaf_order)}

    def go(e):
        if e in label:
            return Leaf(label[e])
        u = S.producer[e]
        return Node(u.id, tuple(go(x) for x in u.ins))

    return go(root)


def J_map(f: OmegaMorphism) -> FreeOperadMap:
    """The induced map ``T_{J(R)} -> T_{J(S)}`` (memoized on ``f``)."""
    cached = f.__dict__.get("_J")
    if cached is None:
        cached = f.__dict__["_J"] = _J_map(f)
    return cached


def _J_map(f: OmegaMorphism) -> FreeOperadMap:
    R, S = f.source, f.target
    imgs = []
    for v in R.vertices:
        imgs.append((v.id, subtree_term(S, f.emap[v.out], [f.emap[e] for e in v.ins])))
    return FreeOperadMap(J(R), J(S), tuple(imgs))


@dataclass(frozen=True)
class ColoredMapToFree:
    """A colored-operad map ``Omega(R) -> T_M``: one label per vertex,
    relative to ``R``'s planar order (all colors go to the single color)."""

    tree: Tree
    M: GradedSet
    labels: tuple[tuple[str, Term], ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(sorted(self.labels)))

    @property
    def label(self) -> dict[str, Term]:
        return dict(self.labels)


def I(a: ColoredMapToFree) -> FreeOperadMap:
    return FreeOperadMap(J(a.tree), a.M, a.labels)


def I_inverse(m: FreeOperadMap, R: Tree) -> ColoredMapToFree:
    if m.source != J(R):
        raise OperadError("map source is not J(R)")
    return ColoredMapToFree(R, m.target, m.images)


def hom_colored_to_free(R: Tree, M: GradedSet, max_vertices: int) -> list[ColoredMapToFree]:
    """Colored-operad maps ``Omega(R) -> T_M`` built vertex by vertex from
    the operations of ``T_M`` (no reference to ``J``)."""
    pools = [[(v.id, t) for t in elements(M, v.valence, max_vertices)] for v in R.vertices]
    return [ColoredMapToFree(R, M, combo) for combo in itertools.product(*pools)]


def precompose_colored(a: ColoredMapToFree, f: OmegaMorphism) -> ColoredMapToFree:
    """``a`` after ``f``: evaluate each source vertex's image subtree."""
    if f.target != a.tree:
        raise OperadError("morphism target is not the dendrex's tree")
    lab = a.label
    out = []
    for v in f.source.vertices:
        t = subtree_term(a.tree, f.emap[v.out], [f.emap[e] for e in v.ins])
        out.append((v.id, _apply(t, lab)))
    return ColoredMapToFree(f.source, a.M, tuple(out))


# --- planar adjustment -------------------------------------------------------


def replan(S: Tree, labels: Mapping[str, Term]) -> tuple[dict[str, tuple[str, ...]], dict[str, Term]]:
    """Given labels of the form ``x . tau`` (a single generator with permuted
    leaves), return a planar structure under which every label is the bare
    generator, and the relabelled assignment."""
    planar = {}
    new = {}
    for v in S.vertices:
        t = labels[v.id]
        if not isinstance(t, Node) or any(not isinstance(a, Leaf) for a in t.args):
            raise OperadError(f"label of {v.id} is not a permuted generator")
        order = tuple(v.ins[a.label - 1] for a in t.args)
        planar[v.id] = order
        new[v.id] = generator(t.op, len(t.args))
    return planar, new


# --- JSON --------------------------------------------------------------------


def term_to_json(t: Term):
    if isinstance(t, Leaf):
        return {"leaf": t.label}
    return {"op": t.op, "args": [term_to_json(a) for a in t.args]}


def term_from_json(data) -> Term:
    if isinstance(data, str):
        data = json.loads(data)
    if "leaf" in data:
        return Leaf(int(data["leaf"]))
    return Node(str(data["op"]), tuple(term_from_json(a) for a in data.get("args", [])))


