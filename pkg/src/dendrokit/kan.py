"""Left Kan extensions along J, computed as colimits over comma categories.

Objects of the comma category are pairs ``(R, g)`` with ``g: T_N -> J(R)``
an operad map.  A morphism ``(R, g) -> (R', g')`` is a tree map
``b: R -> R'`` with ``g' = J(b) g``.  The value of the Kan extension of a
presheaf ``X`` at ``T_N`` is the quotient of ``disjoint union X_R`` by
``(R, g, b^* x') ~ (R', J(b) g, x')``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .dendroidal import (
    BASEPOINT,
    DendroidalSet,
    NerveFree,
    Reduced,
    Representable,
    Skeleton,
    default_skeleton,
    segal_core,
)
from .omega import OmegaMorphism, identity
from .operads import (
    UNIT,
    FreeOperadMap,
    I,
    I_inverse,
    J,
    J_map,
    hom_free,
    hom_free_complete,
    ops_used,
)
from .trees import GradedSet, Tree, canonical_iso, canonical_tree, from_valences_chain, TreeError


class KanError(ValueError):
    pass


# --- quotients ---------------------------------------------------------------


class QuotientSet:
    """A finite set with an equivalence relation generated by merges.

    Elements are interned to integers so that the partition structure only
    ever hashes small keys.
    """

    def __init__(self, carrier: Iterable[Hashable] = ()):
        self._ds = DisjointSet()
        self._ids: dict = {}
        self._elts: list = []
        for x in carrier:
            self.add(x)

    def add(self, x: Hashable):
        if x not in self._ids:
            self._ids[x] = len(self._elts)
            self._elts.append(x)
            self._ds.add(self._ids[x])

    def __contains__(self, x) -> bool:
        return x in self._ids

    def __iter__(self):
        return iter(self._elts)

    def __len__(self):
        return len(self._elts)

    def _id(self, x) -> int:
        try:
            return self._ids[x]
        except KeyError:
            raise KanError(f"relation refers to an element outside the carrier: {x!r}") from None

    def merge(self, a: Hashable, b: Hashable):
        self._ds.merge(self._id(a), self._id(b))

    def same(self, a, b) -> bool:
        return self._ds.connected(self._id(a), self._id(b))

    def find(self, x) -> int:
        """Integer label of the class of ``x``."""
        return self._ds[self._id(x)]

    def classes(self) -> list[list]:
        return [[self._elts[i] for i in sorted(c)] for c in self._ds.subsets()]

    @property
    def n_classes(self) -> int:
        return self._ds.n_subsets

    def representatives(self) -> list:
        return sorted((min(c, key=repr) for c in self.classes()), key=repr)


def colim_quotient(components: dict[Hashable, Iterable[Hashable]], relations: Iterable[tuple]) -> QuotientSet:
    """``components`` maps an index to its set; carrier elements are
    ``(index, element)`` pairs and relations are pairs of those."""
    q = QuotientSet((i, x) for i, xs in components.items() for x in xs)
    for a, b in relations:
        q.merge(a, b)
    return q


# --- comma category ----------------------------------------------------------


@dataclass(frozen=True)
class CommaObject:
    R: Tree
    g: FreeOperadMap

    def key(self):
        return (self.R.code, self.g.images)


def comma_objects(N: GradedSet, skeleton: Skeleton, elt_bound: int) -> list[CommaObject]:
    return [CommaObject(R, g) for R in skeleton.trees for g in hom_free(N, J(R), elt_bound)]


def _skeleton_for(tree_bound: int, *valence_sources) -> Skeleton:
    vals = [1]
    for src in valence_sources:
        vals.extend(src)
    return default_skeleton(tree_bound, max(vals))


def unit_images(N: GradedSet) -> tuple | None:
    """Images of the map sending every generator to the unit, if it exists."""
    if any(k != 1 for _, k in N.gens):
        return None
    return tuple((g, UNIT) for g in N.names)


# --- generic pipeline --------------------------------------------------------


@dataclass
class KanReport:
    proposition: str
    classes: int
    hom_count: int
    well_defined: bool
    injective: bool
    surjective: bool
    truncated: bool
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def bijective(self) -> bool:
        return self.well_defined and self.injective and self.surjective and self.classes == self.hom_count

    def to_json(self) -> dict:
        return {
            "proposition": self.proposition,
            "classes": self.classes,
            "hom_count": self.hom_count,
            "well_defined": self.well_defined,
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
            "truncated": self.truncated,
            "witnesses": self.witnesses,
            "details": self.details,
        }


@dataclass
class KanComputation:
    quotient: QuotientSet
    objects: list[CommaObject]
    dropped: int

    def carrier(self):
        return list(self.quotient)


def kan_colimit(X: DendroidalSet, N: GradedSet, elt_bound: int) -> KanComputation:
    """The quotient computing ``(J_! X)(T_N)`` over the bounded comma category.
    Carrier elements are ``(tree code, g.images, x)``."""
    sk = X.skeleton
    objs = comma_objects(N, sk, elt_bound)
    by_tree: dict[str, set] = {}
    for o in objs:
        by_tree.setdefault(o.R.code, set()).add(o.g.images)
    q = QuotientSet()
    for o in objs:
        for x in X.level(o.R):
            q.add((o.R.code, o.g.images, x))
    dropped = 0
    for o in objs:
        R = o.R
        for R2 in sk.trees:
            xs2 = X.level(R2)
            if not xs2:
                continue
            for b in sk.hom(R, R2):
                g2 = o.g.then(J_map(b))
                if g2.images not in by_tree.get(R2.code, ()):
                    dropped += 1
                    continue
                for x2 in xs2:
                    q.merge((R.code, o.g.images, X.act(b, x2)), (R2.code, g2.images, x2))
    return KanComputation(q, objs, dropped)


def _check_upsilon(
    comp: KanComputation,
    upsilon: Callable,
    targets: Sequence[Hashable],
    hom_witness: Callable[[Hashable], Hashable],
) -> tuple[bool, bool, bool, int, dict]:
    """Descends ``upsilon`` to classes and checks it is a bijection onto
    ``targets``.  ``hom_witness(h)`` returns a carrier element that should
    map to ``h``."""
    q = comp.quotient
    values: dict = {}
    wd = True
    witnesses: dict = {}
    for x in comp.carrier():
        r = q.find(x)
        v = upsilon(x)
        if r in values and values[r] != v:
            wd = False
            witnesses.setdefault("not_well_defined", [repr(x), repr(values[r]), repr(v)])
        values.setdefault(r, v)
    by_value: dict = {}
    injective = True
    for r, v in values.items():
        if v in by_value and by_value[v] != r:
            injective = False
            witnesses.setdefault("not_injective", [repr(by_value[v]), repr(r), repr(v)])
        by_value.setdefault(v, r)
    tset = set(targets)
    surjective = True
    for h in targets:
        w = hom_witness(h)
        if w is None or w not in q or upsilon(w) != h:
            surjective = False
            witnesses.setdefault("not_hit", repr(h))
    if set(by_value) - tset:
        surjective = False
        witnesses.setdefault("outside_target", repr(next(iter(set(by_value) - tset))))
    return wd, injective, surjective, q.n_classes, witnesses


# --- verifiers ----------------------------------------------------------------


def _lke_truncated(S: Tree, N: GradedSet, elt_bound: int) -> bool:
    if any(k <= 1 for _, k in N.gens) or any(v.valence <= 1 for v in S.vertices):
        return True
    return not hom_free_complete(N, J(S), elt_bound)


def verify_lke(S: Tree, N: GradedSet, tree_bound: int = 3, elt_bound: int = 2) -> KanReport:
    """``J_! Omega[S]_*`` evaluated at ``T_N`` against ``Hom(T_N, J(S))``."""
    S = canonical_tree(S)
    sk = _skeleton_for(max(tree_bound, S.n_vertices), [v.valence for v in S.vertices], [k for _, k in N.gens])
    X = Reduced(Representable(S, sk))
    comp = kan_colimit(X, N, elt_bound)
    unit = unit_images(N)
    target_maps = hom_free(N, J(S), elt_bound)
    targets = [h.images for h in target_maps]

    def upsilon(el):
        code, g_images, a = el
        if a is BASEPOINT:
            return unit
        g = FreeOperadMap(N, J(sk.by_code[code]), g_images)
        return g.then(J_map(a)).images

    idS = identity(S)
    if idS in X._collapsed(S):
        idS = BASEPOINT
    wd, inj, surj, n, wit = _check_upsilon(comp, upsilon, targets, lambda h: (S.code, h, idS))
    zigzags = 0
    for el in comp.carrier():
        code, g_images, a = el
        if a is BASEPOINT:
            continue
        h = upsilon(el)
        if (S.code, h, idS) in comp.quotient and comp.quotient.same(el, (S.code, h, idS)):
            zigzags += 1
    return KanReport(
        "lke",
        n,
        len(targets),
        wd,
        inj,
        surj,
        _lke_truncated(S, N, elt_bound),
        wit,
        {"comma_objects": len(comp.objects), "carrier": len(comp.carrier()), "zigzags": zigzags, "dropped_relations": comp.dropped},
    )


def tree_with_vertices(N: GradedSet) -> tuple[Tree, dict[str, str]]:
    """A canonical tree ``S_N`` with a bijection from its vertices to the
    generators of ``N`` that preserves valences."""
    raw = from_valences_chain([k for _, k in N.gens])
    S = canonical_tree(raw)
    pending = {k: sorted(N.with_valence(k)) for k in {k for _, k in N.gens}}
    h = {}
    for v in S.vertices:
        h[v.id] = pending[v.valence].pop(0)
    return S, h


def verify_lknerve(M: GradedSet, N: GradedSet, tree_bound: int = 3, elt_bound: int = 2) -> KanReport:
    """``J_! nerve(T_M)`` evaluated at ``T_N`` against ``Hom(T_N, T_M)``."""
    sk = _skeleton_for(tree_bound, [k for _, k in M.gens], [k for _, k in N.gens])
    complete_m = all(k >= 2 for _, k in M.gens)
    X = NerveFree(M, sk, None if complete_m else elt_bound)
    comp = kan_colimit(X, N, elt_bound)
    target_maps = hom_free(N, M, elt_bound)
    targets = [h.images for h in target_maps]

    def upsilon(el):
        code, g_images, a = el
        R = sk.by_code[code]
        g = FreeOperadMap(N, J(R), g_images)
        return g.then(FreeOperadMap(J(R), M, a)).images

    try:
        SN, hmap = tree_with_vertices(N)
    except TreeError:
        SN, hmap = None, None
    if SN is not None and SN.code not in sk.by_code:
        SN = None
    checked = 0
    failures = []

    def witness(h_images):
        nonlocal checked
        if SN is None:
            return None
        SNk = sk.by_code[SN.code]
        g = FreeOperadMap(N, M, h_images)
        Ih = FreeOperadMap(J(SNk), N, tuple((v, _gen(N, n)) for v, n in hmap.items()))
        Ih_inv = FreeOperadMap(N, J(SNk), tuple((n, _gen(J(SNk), v)) for v, n in hmap.items()))
        a = I_inverse(Ih.then(g), SNk)
        el = (SNk.code, Ih_inv.images, a.labels)
        checked += 1
        if upsilon(el) != h_images:
            failures.append(repr(h_images))
        return el

    wd, inj, surj, n, wit = _check_upsilon(comp, upsilon, targets, witness)
    truncated = X.truncated or any(k <= 1 for _, k in N.gens) or not hom_free_complete(N, M, elt_bound)
    wit["surjectivity_formula_failures"] = failures
    return KanReport(
        "lknerve",
        n,
        len(targets),
        wd,
        inj,
        surj,
        truncated,
        wit,
        {
            "comma_objects": len(comp.objects),
            "carrier": len(comp.carrier()),
            "witness_tree": SN.code if SN is not None else None,
            "witnesses_checked": checked,
            "dropped_relations": comp.dropped,
        },
    )


def _gen(M: GradedSet, name: str):
    from .operads import generator

    return generator(name, M.valence[name])


@dataclass
class PullbackReport:
    levels: dict
    passed: bool
    truncated: bool
    witness: dict | None = None

    def to_json(self):
        return {"passed": self.passed, "truncated": self.truncated, "levels": self.levels, "witness": self.witness}


def verify_pullback_hom(M: GradedSet, bound: int = 3, elt_bound: int = 2, max_valence: int | None = None) -> PullbackReport:
    """``nerve(T_M)_S`` against ``Hom(J(S), T_M)`` through ``I``, per tree."""
    sk = default_skeleton(bound, max_valence if max_valence is not None else max([3] + [k for _, k in M.gens]))
    complete_m = all(k >= 2 for _, k in M.gens)
    X = NerveFree(M, sk, None if complete_m else elt_bound)
    levels = {}
    passed = True
    witness = None
    for S in sk.trees:
        nerve_side = X.level(S)
        images = [I(X.as_colored(S, a)).images for a in nerve_side]
        if complete_m:
            from .operads import complete_bound

            b = max([0] + [complete_bound(M, v.valence) or 0 for v in S.vertices])
        else:
            b = elt_bound
        homs = {h.images for h in hom_free(J(S), M, b)}
        ok = len(set(images)) == len(images) and set(images) == homs
        roundtrip = all(I_inverse(FreeOperadMap(J(S), M, h), S).labels == h for h in homs)
        ok = ok and roundtrip
        levels[S.code] = {"nerve": len(nerve_side), "hom": len(homs), "ok": ok}
        if not ok and witness is None:
            witness = {"tree": S.code}
        passed &= ok
    return PullbackReport(levels, passed, X.truncated, witness)


def verify_splitsc(S: Tree, N: GradedSet, tree_bound: int = 3, elt_bound: int = 2) -> KanReport:
    """``J_! Sc[S]_*`` at ``T_N`` against the wedge of ``Hom(T_N, T_{v})``
    over vertices ``v``, unit maps identified."""
    S = canonical_tree(S)
    sk = _skeleton_for(max(tree_bound, S.n_vertices), [v.valence for v in S.vertices], [k for _, k in N.gens])
    core = segal_core(S, sk)
    X = Reduced(core)
    comp = kan_colimit(X, N, elt_bound)
    unit = unit_images(N)
    WEDGE = "*"

    def collapse(images):
        return WEDGE if unit is not None and images == unit else images

    def upsilon(el):
        code, g_images, a = el
        if a is BASEPOINT:
            return WEDGE
        g = FreeOperadMap(N, J(sk.by_code[code]), g_images)
        imgs = g.then(J_map(a)).images
        if collapse(imgs) == WEDGE:
            return WEDGE
        used = set().union(*(ops_used(t) for _, t in imgs))
        if len(used) != 1:
            raise KanError("core element uses more than one vertex")
        return (used.pop(), imgs)

    targets = [WEDGE] if unit is not None else []
    for v in S.vertices:
        Mv = GradedSet(((v.id, v.valence),))
        for h in hom_free(N, Mv, elt_bound):
            if collapse(h.images) != WEDGE:
                targets.append((v.id, h.images))

    incs = {}
    from .dendroidal import corolla_inclusions

    for vid, f in corolla_inclusions(S, sk):
        incs[vid] = f

    def witness(t):
        if t == WEDGE:
            # any basepoint element at a linear tree
            for el in comp.carrier():
                if el[2] is BASEPOINT:
                    return el
            return None
        vid, imgs = t
        f = incs[vid]
        C = f.source
        # T_N -> J(C): rename the vertex of C
        (cv,) = [u.id for u in C.vertices]
        from .operads import Node, Leaf

        def ren(term):
            if isinstance(term, Leaf):
                return term
            return Node(cv, tuple(ren(x) for x in term.args))

        g = tuple((n, ren(term)) for n, term in imgs)
        return (C.code, g, f)

    wd, inj, surj, n, wit = _check_upsilon(comp, upsilon, targets, witness)
    return KanReport(
        "splitsc",
        n,
        len(targets),
        wd,
        inj,
        surj,
        _lke_truncated(S, N, elt_bound),
        wit,
        {"comma_objects": len(comp.objects), "carrier": len(comp.carrier()), "dropped_relations": comp.dropped},
    )
