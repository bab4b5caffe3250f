"""Finite dendroidal sets on a bounded skeleton of the tree category.

A presheaf is given by a finite set per canonical tree and an action
``act(f, x)`` for every morphism ``f: R -> S`` between skeleton trees.
Subclasses compute levels lazily and cache them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from .omega import OmegaMorphism, compose, hom_cached, identity, inclusion, terminal_map
from .operads import (
    ColoredMapToFree,
    J_map,
    _apply,
    complete_bound,
    elements,
    is_complete,
)
from .trees import GradedSet, Tree, canonical_iso, canonical_tree, enumerate_trees, from_code, subtrees


class PresheafError(ValueError):
    pass


class _Basepoint:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Basepoint, ())

    def __lt__(self, other):
        return not isinstance(other, _Basepoint)


BASEPOINT = _Basepoint()


# --- skeleton ----------------------------------------------------------------


@dataclass(frozen=True)
class Skeleton:
    """Canonical trees with at most ``max_vertices`` vertices, each of
    valence at most ``max_valence``."""

    max_vertices: int
    max_valence: int

    @cached_property
    def trees(self) -> tuple[Tree, ...]:
        return tuple(enumerate_trees(self.max_vertices, self.max_valence))

    @cached_property
    def by_code(self) -> dict[str, Tree]:
        return {t.code: t for t in self.trees}

    def __contains__(self, t: Tree) -> bool:
        return self.by_code.get(t.code) == t

    def hom(self, R: Tree, S: Tree) -> tuple[OmegaMorphism, ...]:
        return hom_cached(R, S)

    @cached_property
    def eta(self) -> Tree:
        return self.by_code["."]

    def linear_trees(self) -> list[Tree]:
        return [t for t in self.trees if t.is_linear()]

    def canonical(self, t: Tree) -> Tree:
        return self.by_code[t.code]


def default_skeleton(max_vertices: int = 3, max_valence: int = 3) -> Skeleton:
    return _skeleton(max_vertices, max_valence)


@lru_cache(maxsize=None)
def _skeleton(a, b):
    return Skeleton(a, b)


def to_skeleton(t: Tree) -> tuple[Tree, OmegaMorphism]:
    """The canonical representative of ``t`` and an isomorphism ``t -> canon``."""
    c = canonical_tree(t)
    return c, OmegaMorphism.make(t, c, canonical_iso(t))


# --- base class --------------------------------------------------------------


class DendroidalSet:
    skeleton: Skeleton
    truncated: bool = False

    def __init__(self, skeleton: Skeleton):
        self.skeleton = skeleton
        self._levels: dict[str, tuple] = {}

    def _compute_level(self, S: Tree) -> Iterable[Hashable]:
        raise NotImplementedError

    def level(self, S: Tree) -> tuple:
        key = S.code
        if key not in self._levels:
            self._levels[key] = tuple(sorted(set(self._compute_level(S)), key=_sort_key))
        return self._levels[key]

    def act(self, f: OmegaMorphism, x):
        """``f^*(x)`` for ``f: R -> S`` and ``x`` in the level at ``S``."""
        raise NotImplementedError

    def sizes(self) -> dict[str, int]:
        return {t.code: len(self.level(t)) for t in self.skeleton.trees}

    def total_size(self) -> int:
        return sum(self.sizes().values())

    def contains(self, S: Tree, x) -> bool:
        return x in self._level_set(S)

    def _level_set(self, S: Tree) -> frozenset:
        cache = self.__dict__.setdefault("_sets", {})
        if S.code not in cache:
            cache[S.code] = frozenset(self.level(S))
        return cache[S.code]

    def is_reduced(self) -> bool:
        return len(self.level(self.skeleton.eta)) == 1

    def elements(self) -> Iterable[tuple[Tree, object]]:
        for t in self.skeleton.trees:
            for x in self.level(t):
                yield t, x


def _sort_key(x):
    return (0, "") if x is BASEPOINT else (1, repr(x))


# --- concrete presheaves -----------------------------------------------------


class Representable(DendroidalSet):
    """``Omega[S]``: the level at ``R`` is ``hom(R, S)``."""

    def __init__(self, S: Tree, skeleton: Skeleton):
        super().__init__(skeleton)
        self.S = canonical_tree(S)

    def _compute_level(self, R):
        return self.skeleton.hom(R, self.S)

    def act(self, f, x):
        return compose(x, f)

    def identity_element(self) -> OmegaMorphism:
        return identity(self.S)


def representable(S: Tree, skeleton: Skeleton | None = None) -> Representable:
    return Representable(S, skeleton or default_skeleton())


class NerveFree(DendroidalSet):
    """Nerve of a free operad ``T_M``.  An element at ``R`` assigns to each
    vertex an element of ``T_M`` of matching arity (stored as a sorted tuple
    of ``(vertex, term)`` pairs)."""

    def __init__(self, M: GradedSet, skeleton: Skeleton, elt_bound: int | None = None):
        super().__init__(skeleton)
        self.M = M
        self.elt_bound = elt_bound
        self.truncated = False
        for k in range(skeleton.max_valence + 1):
            if self._bound(k) is None:
                self.truncated = True

    def _bound(self, k: int) -> int | None:
        if self.elt_bound is not None:
            if not is_complete(self.M, k, self.elt_bound):
                return None
            return self.elt_bound
        return complete_bound(self.M, k)

    def _pool(self, k: int):
        b = self._bound(k)
        if b is None:
            b = self.elt_bound if self.elt_bound is not None else k
        return elements(self.M, k, b)

    def _compute_level(self, R):
        names = [v.id for v in R.vertices]
        pools = [self._pool(v.valence) for v in R.vertices]
        for combo in itertools.product(*pools):
            yield tuple(zip(names, combo))

    def act(self, f, x):
        img = J_map(f).images
        lab = dict(x)
        return tuple((v, _apply(t, lab)) for v, t in img)

    def as_colored(self, R: Tree, x) -> ColoredMapToFree:
        return ColoredMapToFree(R, self.M, x)


def nerve_free(M: GradedSet, skeleton: Skeleton | None = None, elt_bound: int | None = None) -> NerveFree:
    return NerveFree(M, skeleton or default_skeleton(), elt_bound)


class NerveCommutative(DendroidalSet):
    """Nerve of the commutative operad: one operation in each arity, fixed by
    every permutation.  Each level is a single point."""

    def _compute_level(self, R):
        return [()]

    def act(self, f, x):
        return ()


class NerveTreeOperad(DendroidalSet):
    """Nerve of the colored operad generated by a tree ``S``, computed from
    its operations (identities and subtrees) by brute force over color
    maps.  Independent of the Hom enumeration in :mod:`omega`."""

    def __init__(self, S: Tree, skeleton: Skeleton):
        super().__init__(skeleton)
        self.S = S
        ops = {}
        for sub, _ in subtrees(S):
            if sub.n_vertices:
                ops[(sub.root, frozenset(sub.leaves))] = sub
        self.operations = ops

    def _has_operation(self, out: str, ins: Sequence[str]) -> bool:
        if len(ins) == 1 and ins[0] == out:
            return True
        if len(set(ins)) != len(ins):
            return False
        return (out, frozenset(ins)) in self.operations

    def _compute_level(self, R):
        # operations of Omega(S) indexed by output color and arity
        by_out: dict[tuple[str, int], list[frozenset]] = {}
        for (out, ins) in self.operations:
            by_out.setdefault((out, len(ins)), []).append(ins)
        order = []
        stack = [R.root]
        while stack:
            e = stack.pop()
            u = R.producer.get(e)
            if u is not None:
                order.append(u)
                stack.extend(u.ins)
        results = []

        def rec(i, cmap):
            if i == len(order):
                results.append(tuple(sorted(cmap.items())))
                return
            v = order[i]
            c = cmap[v.out]
            options = [(c,)] if v.valence == 1 else []
            for ins in by_out.get((c, v.valence), ()):
                options.extend(itertools.permutations(sorted(ins)))
            for colors in options:
                if not self._has_operation(c, colors):
                    continue
                for e, x in zip(v.ins, colors):
                    cmap[e] = x
                rec(i + 1, cmap)
            for e in v.ins:
                cmap.pop(e, None)

        for c in sorted(self.S.edges):
            rec(0, {R.root: c})
        return results

    def act(self, f, x):
        cmap = dict(x)
        return tuple(sorted((e, cmap[f.emap[e]]) for e in f.source.edges))


class Reduced(DendroidalSet):
    """The reduction: at linear trees, elements pulled back from the unit
    tree collapse to the basepoint."""

    def __init__(self, X: DendroidalSet):
        super().__init__(X.skeleton)
        self.X = X
        self.truncated = X.truncated

    def _collapsed(self, R: Tree) -> frozenset:
        cache = self.__dict__.setdefault("_collapse_cache", {})
        if R.code not in cache:
            if R.is_linear():
                t = terminal_map(R, self.skeleton.eta)
                cache[R.code] = frozenset(self.X.act(t, y) for y in self.X.level(self.skeleton.eta))
            else:
                cache[R.code] = frozenset()
        return cache[R.code]

    def _compute_level(self, R):
        if not R.is_linear():
            return self.X.level(R)
        col = self._collapsed(R)
        return [BASEPOINT] + [x for x in self.X.level(R) if x not in col]

    def act(self, f, x):
        if x is BASEPOINT:
            return BASEPOINT
        y = self.X.act(f, x)
        if y in self._collapsed(f.source):
            return BASEPOINT
        return y


def reduce(X: DendroidalSet) -> DendroidalSet:
    return Reduced(X)


class Product(DendroidalSet):
    """``X x K`` for a finite set ``K`` (constant presheaf)."""

    def __init__(self, X: DendroidalSet, K: Sequence[Hashable]):
        super().__init__(X.skeleton)
        self.X = X
        self.K = tuple(K)
        self.truncated = X.truncated

    def _compute_level(self, R):
        return [(x, k) for x in self.X.level(R) for k in self.K]

    def act(self, f, x):
        return (self.X.act(f, x[0]), x[1])


class Tensor(DendroidalSet):
    """Discrete tensor ``X (x) K`` of a reduced presheaf with a finite set:
    ``X_S x K`` at nonlinear trees, the smash ``X_S ^ K_+`` at linear ones."""

    def __init__(self, X: DendroidalSet, K: Sequence[Hashable]):
        super().__init__(X.skeleton)
        self.X = X
        self.K = tuple(K)
        self.truncated = X.truncated

    def _compute_level(self, R):
        if not R.is_linear():
            return [(x, k) for x in self.X.level(R) for k in self.K]
        return [BASEPOINT] + [(x, k) for x in self.X.level(R) if x is not BASEPOINT for k in self.K]

    def act(self, f, x):
        if x is BASEPOINT:
            return BASEPOINT
        y = self.X.act(f, x[0])
        if y is BASEPOINT:
            return BASEPOINT
        return (y, x[1])


def tensor_discrete(X: DendroidalSet, K: Sequence[Hashable]) -> Tensor:
    if not X.is_reduced():
        raise PresheafError("tensor is defined on reduced presheaves")
    return Tensor(X, K)


class ReducedCoproduct(DendroidalSet):
    """Coproduct of reduced presheaves: disjoint union at nonlinear trees,
    wedge at linear trees."""

    def __init__(self, parts: Sequence[DendroidalSet]):
        if not parts:
            raise PresheafError("need at least one summand (use Empty for none)")
        super().__init__(parts[0].skeleton)
        self.parts = tuple(parts)
        self.truncated = any(p.truncated for p in parts)

    def _compute_level(self, R):
        out = [BASEPOINT] if R.is_linear() else []
        for i, p in enumerate(self.parts):
            out.extend((i, x) for x in p.level(R) if x is not BASEPOINT)
        return out

    def act(self, f, x):
        if x is BASEPOINT:
            return BASEPOINT
        y = self.parts[x[0]].act(f, x[1])
        return BASEPOINT if y is BASEPOINT else (x[0], y)


class Empty(DendroidalSet):
    def _compute_level(self, R):
        return []

    def act(self, f, x):
        raise PresheafError("empty presheaf has no elements")


class SubPresheaf(DendroidalSet):
    """A levelwise subset of ``parent``, assumed closed under the action."""

    def __init__(self, parent: DendroidalSet, chosen: Mapping[str, Iterable]):
        super().__init__(parent.skeleton)
        self.parent = parent
        self.chosen = {k: frozenset(v) for k, v in chosen.items()}
        self.truncated = parent.truncated

    def _compute_level(self, R):
        return self.chosen.get(R.code, ())

    def act(self, f, x):
        return self.parent.act(f, x)

    def is_closed(self) -> tuple[bool, object]:
        sk = self.skeleton
        for S in sk.trees:
            for x in self.level(S):
                for R in sk.trees:
                    for f in sk.hom(R, S):
                        if not self.contains(R, self.act(f, x)):
                            return False, {"tree": S.code, "element": repr(x), "morphism": repr(f)}
        return True, None


class Generated(SubPresheaf):
    """Sub-presheaf generated by seeds ``(T, s)``: the level at ``Y`` is
    ``{f^* s : f in hom(Y, T)}``."""

    def __init__(self, parent: DendroidalSet, seeds: Sequence[tuple[Tree, object]]):
        self.seeds = tuple(seeds)
        sk = parent.skeleton
        chosen: dict[str, set] = {t.code: set() for t in sk.trees}
        for T, s in self.seeds:
            for Y in sk.trees:
                for f in sk.hom(Y, T):
                    chosen[Y.code].add(parent.act(f, s))
        super().__init__(parent, chosen)


def generated(parent: DendroidalSet, seeds: Sequence[tuple[Tree, object]]) -> Generated:
    return Generated(parent, seeds)


# --- Segal cores and boundaries ---------------------------------------------


def corolla_inclusions(S: Tree, skeleton: Skeleton) -> list[tuple[str, OmegaMorphism]]:
    """For each vertex ``v`` the inclusion of the corolla ``C_v`` into ``S``,
    with the corolla taken from the skeleton."""
    out = []
    for v in S.vertices:
        C = skeleton.by_code["(" + "." * v.valence + ")"]
        for f in skeleton.hom(C, S):
            vi = f.vertex_images
            if len(vi) == 1 and next(iter(vi.values())) == frozenset({v.id}):
                out.append((v.id, f))
                break
    return out


def segal_core(S: Tree, skeleton: Skeleton | None = None) -> Generated:
    sk = skeleton or default_skeleton()
    rep = Representable(S, sk)
    return Generated(rep, [(f.source, f) for _, f in corolla_inclusions(rep.S, sk)])


def face_inclusion(R: Tree, S: Tree, skeleton: Skeleton) -> OmegaMorphism:
    """The morphism ``canon(R) -> S`` for a subtree ``R`` that shares edge
    names with ``S``."""
    c, iso = to_skeleton(R)
    inv = {b: a for a, b in iso.emap.items()}
    return OmegaMorphism.make(skeleton.canonical(c), S, {e: inv[e] for e in c.edges})


def external_boundary(S: Tree, skeleton: Skeleton | None = None) -> Generated:
    sk = skeleton or default_skeleton()
    if S.n_vertices == 0:
        raise PresheafError("the unit tree has no external boundary")
    X = Reduced(Representable(S, sk))
    S = X.X.S
    seeds = []
    for R, _ in subtrees(S):
        if R.n_vertices == S.n_vertices - 1:
            f = face_inclusion(R, S, sk)
            y = BASEPOINT if f in X._collapsed(f.source) else f
            seeds.append((f.source, y))
    return Generated(X, seeds)


# --- maps of presheaves ------------------------------------------------------


def generating_seeds(X: DendroidalSet) -> list[tuple[Tree, object]]:
    """A set of elements generating ``X``: scan from the largest trees down
    and keep anything not already generated."""
    sk = X.skeleton
    covered: dict[str, set] = {t.code: set() for t in sk.trees}
    seeds = []
    for T in reversed(sk.trees):
        for x in X.level(T):
            if x in covered[T.code]:
                continue
            seeds.append((T, x))
            for Y in sk.trees:
                for f in sk.hom(Y, T):
                    covered[Y.code].add(X.act(f, x))
    return seeds


def _representations(X: DendroidalSet, seeds) -> list[list[tuple[Tree, OmegaMorphism, object]]]:
    sk = X.skeleton
    reps = []
    for T, s in seeds:
        lst = []
        for R in sk.trees:
            for f in sk.hom(R, T):
                lst.append((R, f, X.act(f, s)))
        reps.append(lst)
    return reps


def seed_images(X: DendroidalSet, Y: DendroidalSet, seeds=None, limit: int | None = None) -> tuple[list, list[tuple]]:
    """Natural transformations ``X -> Y`` encoded by the images of a
    generating set of seeds.  Only elements reachable from the seeds in more
    than one way impose constraints, so only those are checked."""
    if seeds is None:
        seeds = X.seeds if isinstance(X, Generated) else generating_seeds(X)
    reps = _representations(X, seeds)
    count: dict = {}
    for lst in reps:
        for R, _, x in lst:
            count[(R.code, x)] = count.get((R.code, x), 0) + 1
    constrained = [[(R, f, x) for R, f, x in lst if count[(R.code, x)] > 1] for lst in reps]
    out: list[tuple] = []

    def rec(i, phi, chosen):
        if limit is not None and len(out) >= limit:
            return
        if i == len(seeds):
            out.append(tuple(chosen))
            return
        for cand in Y.level(seeds[i][0]):
            added = []
            ok = True
            for R, f, x in constrained[i]:
                y = Y.act(f, cand)
                key = (R.code, x)
                prev = phi.get(key)
                if prev is None:
                    phi[key] = y
                    added.append(key)
                elif prev != y:
                    ok = False
                    break
            if ok:
                chosen.append(cand)
                rec(i + 1, phi, chosen)
                chosen.pop()
            for key in added:
                del phi[key]

    rec(0, {}, [])
    return list(seeds), out


def hom_presheaf(X: DendroidalSet, Y: DendroidalSet, limit: int | None = None) -> list[dict]:
    """All natural transformations ``X -> Y``, as dicts
    ``(tree code, element) -> element``."""
    seeds, tuples = seed_images(X, Y, limit=limit)
    reps = _representations(X, seeds)
    out = []
    for tup in tuples:
        phi = {}
        for lst, cand in zip(reps, tup):
            for R, f, x in lst:
                phi[(R.code, x)] = Y.act(f, cand)
        out.append(phi)
    return out


def is_natural(phi: Mapping, X: DendroidalSet, Y: DendroidalSet) -> bool:
    sk = X.skeleton
    for S in sk.trees:
        for x in X.level(S):
            if not Y.contains(S, phi[(S.code, x)]):
                return False
            for R in sk.trees:
                for f in sk.hom(R, S):
                    if phi[(R.code, X.act(f, x))] != Y.act(f, phi[(S.code, x)]):
                        return False
    return True


# --- checks ------------------------------------------------------------------


@dataclass
class NormalityReport:
    normal: bool
    witness: dict | None = None

    def to_json(self):
        return {"normal": self.normal, "witness": self.witness}


def is_normal(X: DendroidalSet, Y: DendroidalSet) -> NormalityReport:
    """Whether ``X -> Y`` (a sub-presheaf, or empty) has free automorphism
    action on every complement ``Y_S - X_S``."""
    sk = Y.skeleton
    for S in sk.trees:
        inner = X._level_set(S)
        auts = [f for f in sk.hom(S, S) if f.is_iso() and f != identity(S)]
        for y in Y.level(S):
            if y in inner:
                continue
            for s in auts:
                if Y.act(s, y) == y:
                    return NormalityReport(False, {"tree": S.code, "element": repr(y), "automorphism": repr(s)})
    return NormalityReport(True)


@dataclass
class SegalLevel:
    tree: str
    size: int
    core_maps: int
    injective: bool
    surjective: bool

    @property
    def bijective(self):
        return self.injective and self.surjective

    def to_json(self):
        return {
            "tree": self.tree,
            "size": self.size,
            "core_maps": self.core_maps,
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
        }


@dataclass
class SegalReport:
    levels: list[SegalLevel]
    eta: SegalLevel | None
    truncated: bool = False
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return all(lv.bijective for lv in self.levels)

    def to_json(self):
        return {
            "passed": self.passed,
            "truncated": self.truncated,
            "levels": [lv.to_json() for lv in self.levels],
            "eta": self.eta.to_json() if self.eta else None,
            "witness": self.witness,
        }


def core_restriction(X: DendroidalSet, S: Tree) -> tuple[list, list]:
    """Restriction ``X_S -> Hom(Sc[S], X)`` encoded by images of the corolla
    inclusions, plus the list of all compatible tuples."""
    sk = X.skeleton
    incs = [f for _, f in corolla_inclusions(S, sk)]
    core = Generated(Representable(S, sk), [(f.source, f) for f in incs])
    _, tuples = seed_images(core, X)
    restr = [tuple(X.act(f, x) for f in incs) for x in X.level(S)]
    return restr, tuples


def check_strict_segal(X: DendroidalSet, trees: Iterable[Tree] | None = None) -> SegalReport:
    sk = X.skeleton
    levels = []
    eta_level = None
    witness = None
    for S in trees if trees is not None else sk.trees:
        if S.n_vertices == 0:
            n = len(X.level(S))
            eta_level = SegalLevel(S.code, n, 1, n <= 1, n >= 1)
            continue
        restr, tuples = core_restriction(X, S)
        inj = len(set(restr)) == len(restr)
        surj = set(tuples) <= set(restr)
        lv = SegalLevel(S.code, len(restr), len(tuples), inj, surj)
        levels.append(lv)
        if not lv.bijective and witness is None:
            if not inj:
                seen = {}
                for x, r in zip(X.level(S), restr):
                    if r in seen:
                        witness = {"tree": S.code, "collision": [repr(seen[r]), repr(x)]}
                        break
                    seen[r] = x
            else:
                missing = next(t for t in tuples if t not in set(restr))
                witness = {"tree": S.code, "unfilled_core_map": repr(missing)}
    return SegalReport(levels, eta_level, X.truncated, witness)


# --- JSON tables -------------------------------------------------------------


class TablePresheaf(DendroidalSet):
    """A presheaf given by explicit tables, one per morphism."""

    def __init__(self, skeleton: Skeleton, levels: Mapping[str, Sequence[str]], actions: Mapping):
        super().__init__(skeleton)
        self._given = {k: tuple(v) for k, v in levels.items()}
        self._actions = dict(actions)

    def _compute_level(self, R):
        return self._given.get(R.code, ())

    def act(self, f, x):
        key = (f.source.code, f.target.code, f.edge_map)
        try:
            return self._actions[key][x]
        except KeyError as exc:
            raise PresheafError(f"no action table entry for {f!r} on {x!r}") from exc


def _encode(x) -> str:
    return "*" if x is BASEPOINT else repr(x)


def presheaf_to_json(X: DendroidalSet) -> dict:
    """Tabulate ``X``: element names are ``repr`` strings; the action is
    listed for every morphism between nonempty levels."""
    sk = X.skeleton
    levels = {t.code: [_encode(x) for x in X.level(t)] for t in sk.trees}
    actions = []
    for S in sk.trees:
        xs = X.level(S)
        if not xs:
            continue
        for R in sk.trees:
            for f in sk.hom(R, S):
                actions.append(
                    {
                        "source": R.code,
                        "target": S.code,
                        "edge_map": dict(f.edge_map),
                        "table": {_encode(x): _encode(X.act(f, x)) for x in xs},
                    }
                )
    return {
        "max_vertices": sk.max_vertices,
        "max_valence": sk.max_valence,
        "levels": levels,
        "actions": actions,
    }


def presheaf_from_json(data) -> TablePresheaf:
    if isinstance(data, str):
        data = json.loads(data)
    sk = default_skeleton(int(data["max_vertices"]), int(data["max_valence"]))
    levels = {k: list(v) for k, v in data["levels"].items()}
    unknown = set(levels) - set(sk.by_code)
    if unknown:
        raise PresheafError(f"levels outside the skeleton: {sorted(unknown)}")
    actions = {}
    for a in data.get("actions", []):
        R = sk.by_code[a["source"]]
        S = sk.by_code[a["target"]]
        f = OmegaMorphism.make(R, S, a["edge_map"])
        actions[(R.code, S.code, f.edge_map)] = dict(a["table"])
    return TablePresheaf(sk, levels, actions)


def check_functoriality(X: DendroidalSet) -> tuple[bool, dict | None]:
    """``id^* = id`` and ``(g f)^* = f^* g^*`` on every element."""
    sk = X.skeleton
    for S in sk.trees:
        idS = identity(S)
        for x in X.level(S):
            if X.act(idS, x) != x:
                return False, {"identity": S.code, "element": repr(x)}
    for T in sk.trees:
        xs = X.level(T)
        if not xs:
            continue
        for S in sk.trees:
            for g in sk.hom(S, T):
                for R in sk.trees:
                    for f in sk.hom(R, S):
                        gf = compose(g, f)
                        for x in xs:
                            if X.act(gf, x) != X.act(f, X.act(g, x)):
                                return False, {"f": repr(f), "g": repr(g), "element": repr(x)}
    return True, None


def levelwise_equal(X: DendroidalSet, Y: DendroidalSet, check_action: bool = True) -> tuple[bool, dict | None]:
    """Same elements at every level and, optionally, the same action."""
    sk = X.skeleton
    for S in sk.trees:
        if X._level_set(S) != Y._level_set(S):
            return False, {"tree": S.code, "left": len(X.level(S)), "right": len(Y.level(S))}
    if check_action:
        for S in sk.trees:
            xs = X.level(S)
            if not xs:
                continue
            for R in sk.trees:
                for f in sk.hom(R, S):
                    for x in xs:
                        if X.act(f, x) != Y.act(f, x):
                            return False, {"morphism": repr(f), "element": repr(x)}
    return True, None


def _is_elementary(f: OmegaMorphism) -> bool:
    d = f.target.n_vertices - f.source.n_vertices
    images = set(f.emap.values())
    if d == 0:
        return f.is_iso()
    if d == 1:
        return len(images) == len(f.source.edges)
    if d == -1:
        return len(images) == len(f.target.edges) == len(f.source.edges) - 1
    return False


def isomorphic_via(X: DendroidalSet, Y: DendroidalSet, phi, elementary: bool = False) -> tuple[bool, dict | None]:
    """Whether ``phi`` (applied elementwise) is a levelwise bijection
    ``X -> Y`` commuting with every morphism's action.

    With ``elementary`` only isomorphisms, elementary faces and elementary
    degeneracies are checked; these generate the skeleton, so for genuine
    presheaves the answer is the same.
    """
    sk = X.skeleton
    for S in sk.trees:
        imgs = [phi(x) for x in X.level(S)]
        if len(set(imgs)) != len(imgs) or set(imgs) != Y._level_set(S):
            return False, {"tree": S.code, "left": len(imgs), "right": len(Y.level(S))}
    for S in sk.trees:
        xs = X.level(S)
        if not xs:
            continue
        for R in sk.trees:
            if elementary and abs(R.n_vertices - S.n_vertices) > 1:
                continue
            for f in sk.hom(R, S):
                if elementary and not _is_elementary(f):
                    continue
                for x in xs:
                    if phi(X.act(f, x)) != Y.act(f, phi(x)):
                        return False, {"morphism": repr(f), "element": repr(x)}
    return True, None
