"""Group and category actions on operads, and the group-like Segal data.

Finite groups are multiplication tables on ``range(n)``.  Operads are
handled only through finite, arity-truncated data (sets of operations per
arity, or a small colored operad with explicit composition tables).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Mapping, Sequence

from .kan import QuotientSet
from .trees import Tree

# --- finite groups -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in self.elements if self.table[a][b] == e) for a in self.elements)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def to_json(self) -> dict:
        return {"name": self.name, "identity": self.identity, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data.get("name", "G"), tuple(tuple(r) for r in data["table"]), int(data.get("identity", 0)))


def group_axioms(table: Sequence[Sequence[int]], e: int) -> tuple[bool, str | None]:
    n = len(table)
    if any(len(r) != n or any(not 0 <= x < n for x in r) for r in table):
        return False, "table is not a total binary operation"
    for a in range(n):
        if table[a][e] != a or table[e][a] != a:
            return False, f"unit fails at {a}"
        if not any(table[a][b] == e for b in range(n)):
            return False, f"{a} has no inverse"
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            return False, f"associativity fails at {(a, b, c)}"
    return True, None


def _from_elements(name: str, elts: list, mul: Callable, one) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elts)}
    table = tuple(tuple(index[mul(a, b)] for b in elts) for a in elts)
    return FiniteGroup(name, table, index[one])


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(f"Z{n}", tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    elts = [(g, h) for g in G.elements for h in H.elements]
    return _from_elements(
        f"{G.name}x{H.name}", elts, lambda a, b: (G.mul(a[0], b[0]), H.mul(a[1], b[1])), (G.identity, H.identity)
    )


def _perm_group(name: str, gens: list[tuple[int, ...]]) -> FiniteGroup:
    n = len(gens[0])
    one = tuple(range(n))
    comp = lambda p, q: tuple(p[q[i]] for i in range(n))
    elts = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = comp(g, x)
                if y not in elts:
                    elts.add(y)
                    nxt.append(y)
        frontier = nxt
    ordered = sorted(elts)
    ordered.remove(one)
    return _from_elements(name, [one] + ordered, comp, one)


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return cyclic(1)
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return _perm_group(f"S{n}", gens)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular ``n``-gon (order ``2n``)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group(f"D{n}", [rot, ref])


def quaternion() -> FiniteGroup:
    # units +-1, +-i, +-j, +-k as (sign, basis)
    basis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }  # fmt: skip

    def mul(a, b):
        s, c = basis_mul[(a[1], b[1])]
        return (a[0] * b[0] * s, c)

    elts = [(s, c) for c in "1ijk" for s in (1, -1)]
    return _from_elements("Q8", elts, mul, (1, "1"))


def groups_up_to_order(n: int = 8) -> list[FiniteGroup]:
    """One group per isomorphism class of order at most ``n`` (``n <= 8``)."""
    if n > 8:
        raise ValueError("only orders up to 8 are tabulated")
    Z = cyclic
    cands = [
        Z(1), Z(2), Z(3), Z(4), direct_product(Z(2), Z(2)), Z(5), Z(6), symmetric(3), Z(7),
        Z(8), direct_product(Z(4), Z(2)), direct_product(direct_product(Z(2), Z(2)), Z(2)), dihedral(4), quaternion(),
    ]  # fmt: skip
    return [G for G in cands if G.order <= n]


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    if G.order != H.order:
        return False
    gord = [G.element_order(a) for a in G.elements]
    hord = [H.element_order(a) for a in H.elements]
    if sorted(gord) != sorted(hord):
        return False
    n = G.order
    order_g = sorted(G.elements, key=lambda a: -gord[a])

    def rec(i, phi, used):
        if i == n:
            return all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in G.elements for b in G.elements)
        a = order_g[i]
        for b in H.elements:
            if b in used or hord[b] != gord[a]:
                continue
            phi[a] = b
            ok = all(
                G.mul(x, y) not in phi or phi[G.mul(x, y)] == H.mul(phi[x], phi[y])
                for x in phi
                for y in phi
            )
            if ok:
                used.add(b)
                if rec(i + 1, phi, used):
                    return True
                used.discard(b)
            del phi[a]
        return False

    return rec(0, {}, set())


# --- group actions on truncated operads --------------------------------------


@dataclass
class GroupActionOnOperad:
    """``act[n][(g, x)]`` is ``g . x`` for ``x`` in ``P[n]``."""

    G: FiniteGroup
    P: dict[int, list]
    act: dict[int, dict[tuple[int, Hashable], Hashable]]


@dataclass
class ActionReport:
    passed: bool
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"passed": self.passed, "failures": self.failures}


def validate_group_action(A: GroupActionOnOperad) -> ActionReport:
    failures = []
    G = A.G
    for n, xs in sorted(A.P.items()):
        tbl = A.act.get(n, {})
        xset = set(xs)
        for g in G.elements:
            for x in xs:
                if (g, x) not in tbl or tbl[(g, x)] not in xset:
                    failures.append({"arity": n, "axiom": "total", "witness": [g, repr(x)]})
        if failures:
            continue
        for x in xs:
            if tbl[(G.identity, x)] != x:
                failures.append({"arity": n, "axiom": "unit", "witness": [repr(x)]})
        for g, h in itertools.product(G.elements, repeat=2):
            for x in xs:
                if tbl[(G.mul(g, h), x)] != tbl[(g, tbl[(h, x)])]:
                    failures.append({"arity": n, "axiom": "associativity", "witness": [g, h, repr(x)]})
                    break
    return ActionReport(not failures, failures)


def trivial_action(G: FiniteGroup, P: Mapping[int, Sequence]) -> GroupActionOnOperad:
    return GroupActionOnOperad(G, {n: list(xs) for n, xs in P.items()}, {n: {(g, x): x for g in G.elements for x in xs} for n, xs in P.items()})


def endomorphism_action(G: FiniteGroup, X_action: Sequence[Sequence[int]], arity_bound: int) -> GroupActionOnOperad:
    """``E_X(n)`` = functions ``X^n -> X`` (as value tuples over
    ``itertools.product``), with ``(g . f)(x) = g . f(x)``.

    ``X_action[g][x]`` is the action of ``G`` on ``X = range(len(X_action[0]))``.
    """
    m = len(X_action[0])
    P = {}
    act = {}
    for n in range(arity_bound + 1):
        funcs = list(itertools.product(range(m), repeat=m**n))
        P[n] = funcs
        act[n] = {(g, f): tuple(X_action[g][y] for y in f) for g in G.elements for f in funcs}
    return GroupActionOnOperad(G, P, act)


def regular_action(G: FiniteGroup) -> list[list[int]]:
    return [[G.mul(g, x) for x in G.elements] for g in G.elements]


def fixed_points(A: GroupActionOnOperad, n: int, g: int) -> list:
    return [x for x in A.P[n] if A.act[n][(g, x)] == x]


def orbits(A: GroupActionOnOperad, n: int) -> list[frozenset]:
    seen = set()
    out = []
    for x in A.P[n]:
        if x in seen:
            continue
        orb = frozenset(A.act[n][(g, x)] for g in A.G.elements)
        seen |= orb
        out.append(orb)
    return out


def goper_coproduct_special(P: Mapping[int, Sequence], G: FiniteGroup) -> GroupActionOnOperad:
    """``(e, P) + (G, *) = (G, G x P)``: arity ``n`` is ``G x P(n)`` with ``G``
    acting by left multiplication on the first factor."""
    carrier = {n: [(g, x) for g in G.elements for x in xs] for n, xs in P.items()}
    act = {n: {(h, (g, x)): (G.mul(h, g), x) for h in G.elements for g, x in cs} for n, cs in carrier.items()}
    return GroupActionOnOperad(G, carrier, act)


def balanced_product(H: FiniteGroup, phi: Sequence[int], A: GroupActionOnOperad, n: int) -> QuotientSet:
    """``H x_G P(n)``: pairs ``(h, x)`` modulo ``(h phi(g), x) ~ (h, g x)``,
    for a homomorphism ``phi: G -> H`` given as a list."""
    G = A.G
    q = QuotientSet((h, x) for h in H.elements for x in A.P[n])
    for h in H.elements:
        for g in G.elements:
            for x in A.P[n]:
                q.merge((H.mul(h, phi[g]), x), (h, A.act[n][(g, x)]))
    return q


# --- theory objects ----------------------------------------------------------


@dataclass(frozen=True)
class GOpObject:
    """The object ``(F_rank, F_rank x P_arities)``: a free group of the given
    rank acting freely on the free operad with generators of the listed
    arities.  Purely symbolic."""

    rank: int
    arities: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(sorted(self.arities)))

    def coproduct(self, other: "GOpObject") -> "GOpObject":
        return GOpObject(self.rank + other.rank, self.arities + other.arities)

    def describe(self) -> dict:
        group = "e" if self.rank == 0 else f"F_{self.rank}"
        if not self.arities:
            operad = "*"
        else:
            operad = "free operad on generators of arities " + ",".join(map(str, self.arities))
        if self.rank and self.arities:
            operad = f"{group} x ({operad})"
        return {"group": group, "operad": operad, "rank": self.rank, "arities": list(self.arities)}


TERMINAL_GOP = GOpObject(0, ())


def theory_object_gop(n_minus1: int, arities: Sequence[int]) -> GOpObject:
    return GOpObject(n_minus1, tuple(arities))


def lambda_minus1(S: Sequence) -> GOpObject:
    return GOpObject(len(S), ())


def lambda_n(S: Sequence, n: int) -> GOpObject:
    return GOpObject(0, (n,) * len(S))


def coproduct_all(objs: Sequence[GOpObject]) -> GOpObject:
    out = TERMINAL_GOP
    for o in objs:
        out = out.coproduct(o)
    return out


def do_object_image(n: int, R: Tree | None) -> GOpObject:
    """Image of ``[n, R]`` under ``[n, R] -> (F_n, F_n x J(R))``."""
    return GOpObject(n, tuple(v.valence for v in R.vertices) if R is not None else ())


# --- categories acting on colored operads ------------------------------------


@dataclass
class FiniteCategory:
    objects: tuple
    morphisms: dict[str, tuple]  # name -> (source, target)
    identities: dict  # object -> morphism name
    composition: dict[tuple[str, str], str]  # (g, f) -> g o f

    def source(self, f):
        return self.morphisms[f][0]

    def target(self, f):
        return self.morphisms[f][1]

    def compose(self, g, f):
        return self.composition[(g, f)]

    def is_groupoid(self) -> bool:
        return all(
            any((g, f) in self.composition and self.composition[(g, f)] == self.identities[self.source(f)] for g in self.morphisms)
            for f in self.morphisms
        )


@dataclass
class FiniteColoredOperad:
    colors: tuple
    operations: dict[str, tuple[tuple, Hashable]]  # name -> (inputs, output)
    identities: dict  # color -> operation
    gamma: dict[tuple[str, tuple[str, ...]], str]
    sigma: dict[tuple[str, tuple[int, ...]], str] = field(default_factory=dict)

    def inputs(self, g):
        return self.operations[g][0]

    def output(self, g):
        return self.operations[g][1]

    def act_sigma(self, g, perm):
        if list(perm) == list(range(1, len(perm) + 1)):
            return g
        return self.sigma[(g, tuple(perm))]


@dataclass
class CatActionOnColoredOperad:
    C: FiniteCategory
    P: FiniteColoredOperad
    mu: dict[str, Hashable]
    act: dict[tuple[str, str], str]  # (c-morphism, operation) -> operation

    def mu_color(self, c):
        """Moment of a color, taken as the moment of its identity."""
        return self.mu[self.P.identities[c]]


def validate_cat_action(A: CatActionOnColoredOperad) -> ActionReport:
    C, P, mu, act = A.C, A.P, A.mu, A.act
    fails = []

    def fail(axiom, *w):
        fails.append({"axiom": axiom, "witness": list(w)})

    pairs = [(f, g) for f in C.morphisms for g in P.operations if C.source(f) == mu[g]]
    for f, g in pairs:
        if (f, g) not in act or act[(f, g)] not in P.operations:
            fail("total", f, g)
    if fails:
        return ActionReport(False, fails)
    for f, g in pairs:
        h = act[(f, g)]
        if mu[h] != C.target(f):
            fail("moment", f, g)
        if P.inputs(h) != P.inputs(g):
            fail("source", f, g)
        for f2 in C.morphisms:
            if C.source(f2) == C.target(f) and act[(f2, h)] != act[(C.compose(f2, f), g)]:
                fail("associativity", f2, f, g)
        k = len(P.inputs(g))
        for perm in itertools.permutations(range(1, k + 1)):
            if list(perm) == list(range(1, k + 1)):
                continue
            if act[(f, P.act_sigma(g, perm))] != P.act_sigma(h, perm):
                fail("equivariance", f, g, list(perm))
    for g in P.operations:
        if act[(C.identities[mu[g]], g)] != g:
            fail("unit", g)
    for (g, args), h in P.gamma.items():
        if mu[h] != mu[g]:
            fail("composition_moment", g, list(args))
    return ActionReport(not fails, fails)


# --- Hom sets out of [n, R] --------------------------------------------------


def chains(C: FiniteCategory, n: int) -> list[tuple]:
    """Functors ``[n] -> C``: an object for ``n = 0``, else composable
    ``n``-tuples of morphisms."""
    if n == 0:
        return [(c,) for c in C.objects]
    out = []

    def rec(acc):
        if len(acc) == n:
            out.append(tuple(acc))
            return
        for f in sorted(C.morphisms):
            if not acc or C.source(f) == C.target(acc[-1]):
                rec(acc + [f])

    rec([])
    return out


def chain_start(C: FiniteCategory, n: int, alpha: tuple):
    return alpha[0] if n == 0 else C.source(alpha[0])


def operad_maps(R: Tree, P: FiniteColoredOperad) -> list[tuple]:
    """Colored-operad maps from the tree to ``P``: an operation per vertex
    with matching colors (inputs in the tree's planar order), stored as a
    sorted tuple of ``(vertex or edge, value)`` pairs."""
    if R.n_vertices == 0:
        (e,) = R.edges
        return [((e, c),) for c in P.colors]
    order = []
    stack = [R.root]
    while stack:
        e = stack.pop()
        u = R.producer.get(e)
        if u is not None:
            order.append(u)
            stack.extend(u.ins)
    out = []

    def rec(i, colors, ops):
        if i == len(order):
            out.append(tuple(sorted(list(colors.items()) + list(ops.items()))))
            return
        v = order[i]
        for g in sorted(P.operations):
            ins, o = P.operations[g]
            if len(ins) != v.valence:
                continue
            if v.out in colors and colors[v.out] != o:
                continue
            new = {}
            if v.out not in colors:
                new[v.out] = o
            for e, c in zip(v.ins, ins):
                new[e] = c
            colors.update(new)
            ops[v.id] = g
            rec(i + 1, colors, ops)
            del ops[v.id]
            for e in new:
                del colors[e]

    rec(0, {}, {})
    return out


def do_hom(n: int, R: Tree | None, A: CatActionOnColoredOperad) -> list[tuple]:
    """Pairs ``(alpha, beta)`` with ``alpha(0) = mu(beta(root))``."""
    C = A.C
    alphas = chains(C, n)
    if R is None:
        return [(a, ()) for a in alphas]
    out = []
    for b in operad_maps(R, A.P):
        root_color = dict(b)[R.root]
        c0 = A.mu_color(root_color)
        for a in alphas:
            if chain_start(C, n, a) == c0:
                out.append((a, b))
    return out


def do_hom_oracle(n: int, R: Tree | None, A: CatActionOnColoredOperad) -> int:
    """Independent count: all ``n``-tuples of morphisms (or objects) times
    all color/operation assignments, filtered by every condition."""
    C, P = A.C, A.P
    if n == 0:
        alphas = [(c, c) for c in C.objects]  # (start object, chain)
    else:
        alphas = []
        for tup in itertools.product(sorted(C.morphisms), repeat=n):
            if all(C.morphisms[tup[i]][0] == C.morphisms[tup[i - 1]][1] for i in range(1, n)):
                alphas.append((C.morphisms[tup[0]][0], tup))
    if R is None:
        return len(alphas)
    edges = sorted(R.edges)
    verts = R.vertices
    count = 0
    for cols in itertools.product(P.colors, repeat=len(edges)):
        cmap = dict(zip(edges, cols))
        for ops in itertools.product(sorted(P.operations), repeat=len(verts)):
            if all(
                P.operations[g] == (tuple(cmap[e] for e in v.ins), cmap[v.out]) for v, g in zip(verts, ops)
            ):
                start = A.mu[P.identities[cmap[R.root]]]
                count += sum(1 for s, _ in alphas if s == start)
    return count


@dataclass
class CoreDescription:
    gammas: list[tuple[int, int]]
    zetas: list[str]

    def to_json(self):
        return {
            "gamma": [{"k": k, "sends": {"0": 0, "1": t}} for k, t in self.gammas],
            "zeta": self.zetas,
        }


def do_segal_core(n: int, R: Tree | None) -> CoreDescription:
    return CoreDescription([(k, k + 1) for k in range(n)], [v.id for v in R.vertices] if R is not None else [])


def core_restriction(n: int, R: Tree | None, A: CatActionOnColoredOperad, x: tuple) -> tuple:
    """Restriction of ``(alpha, beta)`` along the core maps: ``gamma^k`` gives
    the composite ``alpha(0 -> k+1)``; ``zeta^v`` gives the moment of the
    output color and the corolla part of ``beta``."""
    C = A.C
    alpha, beta = x
    parts = []
    if n:
        acc = alpha[0]
        parts.append(acc)
        for f in alpha[1:]:
            acc = C.compose(f, acc)
            parts.append(acc)
    if R is not None:
        b = dict(beta)
        for v in R.vertices:
            out_c = b[v.out]
            parts.append((A.mu_color(out_c), b[v.id], out_c, tuple(b[e] for e in v.ins)))
    return tuple(parts)


def core_tuples(n: int, R: Tree | None, A: CatActionOnColoredOperad) -> list[tuple]:
    """Compatible families on the core: the ``gamma`` parts share a source,
    the ``zeta`` parts agree on shared edges, and the root vertex's moment
    is the common source."""
    C, P = A.C, A.P
    fams = []
    gpart = list(itertools.product(sorted(C.morphisms), repeat=n)) if n else [()]
    if R is None:
        vpart = [()]
    else:
        per_vertex = []
        for v in R.vertices:
            opts = []
            for g in sorted(P.operations):
                ins, o = P.operations[g]
                if len(ins) == v.valence:
                    opts.append((A.mu_color(o), g, o, tuple(ins)))
            per_vertex.append(opts)
        vpart = []
        for combo in itertools.product(*per_vertex):
            colors = {}
            ok = True
            for v, (_, _, o, ins) in zip(R.vertices, combo):
                for e, c in [(v.out, o)] + list(zip(v.ins, ins)):
                    if colors.setdefault(e, c) != c:
                        ok = False
            if ok:
                vpart.append(combo)
    for gs in gpart:
        if gs and len({C.source(f) for f in gs}) != 1:
            continue
        for vs in vpart:
            if gs and R is not None and R.n_vertices:
                root_idx = [v.out for v in R.vertices].index(R.root)
                if vs[root_idx][0] != C.source(gs[0]):
                    continue
            fams.append(tuple(gs) + tuple(vs))
    return fams


def check_do_core(n: int, R: Tree | None, A: CatActionOnColoredOperad) -> dict:
    elems = do_hom(n, R, A)
    restr = [core_restriction(n, R, A, x) for x in elems]
    fams = core_tuples(n, R, A)
    injective = len(set(restr)) == len(restr)
    surjective = set(fams) <= set(restr)
    # the core is empty at [0, none] and never sees the edge color of eta
    flagged = (R is None and n == 0) or (R is not None and R.n_vertices == 0)
    return {
        "n": n,
        "tree": R.code if R is not None else None,
        "elements": len(elems),
        "core_families": len(fams),
        "injective": injective,
        "surjective": surjective,
        "bijective": injective and surjective,
        "unit_tree_level": flagged,
        "moment_on_colors": "identity morphism convention",
    }


# --- Bousfield-Segal maps ----------------------------------------------------


@dataclass
class TruncatedSimplicialSet:
    """Levels ``0..k`` with face maps ``faces[n][i][x]`` for ``x`` in level
    ``n``."""

    levels: list[list]
    faces: list[list[dict]]

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def face(self, n: int, i: int, x):
        return self.faces[n][i][x]


def nerve_of_monoid(table: Sequence[Sequence[int]], unit: int, k: int) -> TruncatedSimplicialSet:
    """Nerve of a finite monoid, truncated at level ``k``: level ``n`` is
    ``n``-tuples; inner faces multiply neighbours, outer faces drop."""
    m = len(table)
    levels = [list(itertools.product(range(m), repeat=n)) for n in range(k + 1)]
    faces: list[list[dict]] = [[]]
    for n in range(1, k + 1):
        fs = []
        for i in range(n + 1):
            d = {}
            for x in levels[n]:
                if i == 0:
                    d[x] = x[1:]
                elif i == n:
                    d[x] = x[:-1]
                else:
                    d[x] = x[: i - 1] + (table[x[i - 1]][x[i]],) + x[i + 1 :]
            fs.append(d)
        faces.append(fs)
    return TruncatedSimplicialSet(levels, faces)


def restrict_to_edge(X: TruncatedSimplicialSet, n: int, x, a: int, b: int):
    """Restriction of an ``n``-simplex to the edge ``a -> b`` via faces."""
    keep = [a, b]
    cur, dim = x, n
    for i in reversed(range(n + 1)):
        if i not in keep:
            cur = X.face(dim, i, cur)
            dim -= 1
    return cur


def bousfield_maps(X: TruncatedSimplicialSet, n: int) -> dict:
    """``psi_n: X_n -> (X_1)^n``, ``x -> (x|_{0 -> k+1})_k``."""
    if not 1 <= n <= X.top:
        raise ValueError("level out of range")
    return {x: tuple(restrict_to_edge(X, n, x, 0, k + 1) for k in range(n)) for x in X.levels[n]}


def bousfield_bijective(X: TruncatedSimplicialSet, n: int) -> tuple[bool, dict | None]:
    psi_n = bousfield_maps(X, n)
    seen = {}
    for x, y in psi_n.items():
        if y in seen:
            return False, {"collision": [list(seen[y]), list(x)], "image": list(y)}
        seen[y] = x
    target = len(X.levels[1]) ** n
    if len(seen) != target:
        missing = next(t for t in itertools.product(X.levels[1], repeat=n) if t not in seen)
        return False, {"missing": [list(t) for t in missing]}
    return True, None


# --- Hall brackets -----------------------------------------------------------


@dataclass(frozen=True)
class PointedMagma:
    table: tuple[tuple[int, ...], ...]
    e: int = 0

    @property
    def order(self):
        return len(self.table)

    def br(self, a, b):
        return self.table[a][b]

    @classmethod
    def from_json(cls, data) -> "PointedMagma":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(r) for r in data["table"]), int(data.get("e", 0)))

    @classmethod
    def from_group(cls, G: FiniteGroup) -> "PointedMagma":
        return cls(tuple(tuple(G.mul(a, G.inv(b)) for b in G.elements) for a in G.elements), G.identity)


@dataclass
class HallReport:
    relations_hold: bool
    failed_relation: str | None
    witness: list | None
    group: FiniteGroup | None
    round_trip: bool

    def to_json(self):
        return {
            "relations_hold": self.relations_hold,
            "failed_relation": self.failed_relation,
            "witness": self.witness,
            "group": self.group.to_json() if self.group else None,
            "round_trip": self.round_trip,
        }


def hall_relations(m: PointedMagma) -> tuple[str | None, list | None]:
    n, e, br = m.order, m.e, m.br
    for a in range(n):
        if br(a, e) != a:
            return "[a,e]=a", [a]
        if br(a, a) != e:
            return "[a,a]=e", [a]
    for a, b, c in itertools.product(range(n), repeat=3):
        if br(a, b) != br(br(a, c), br(b, c)):
            return "[a,b]=[[a,c],[b,c]]", [a, b, c]
    return None, None


def hall_extract(m: PointedMagma) -> HallReport:
    rel, wit = hall_relations(m)
    if rel is not None:
        return HallReport(False, rel, wit, None, False)
    n, e, br = m.order, m.e, m.br
    table = tuple(tuple(br(a, br(e, b)) for b in range(n)) for a in range(n))
    ok, why = group_axioms(table, e)
    if not ok:
        return HallReport(True, "group axioms: " + str(why), None, None, False)
    G = FiniteGroup("hall", table, e)
    rt = all(G.mul(a, G.inv(b)) == br(a, b) for a in range(n) for b in range(n))
    return HallReport(True, None, None, G, rt)


@dataclass
class HallSearchReport:
    order: int
    tables_examined: int
    passing: int
    all_extract: bool
    every_group_arises: bool
    group_structures: int

    @property
    def passed(self):
        return self.all_extract and self.every_group_arises and self.passing == self.group_structures

    def to_json(self):
        return {
            "order": self.order,
            "tables_examined": self.tables_examined,
            "passing_tables": self.passing,
            "all_extract": self.all_extract,
            "every_group_arises": self.every_group_arises,
            "group_structures_with_identity_0": self.group_structures,
            "passed": self.passed,
        }


def _bracket_tables(n: int, pruned: bool):
    cells = [(a, b) for a in range(n) for b in range(n)]
    fixed = {}
    if pruned:
        for a in range(n):
            fixed[(a, 0)] = a
            fixed[(a, a)] = 0
    free = [c for c in cells if c not in fixed]
    for vals in itertools.product(range(n), repeat=len(free)):
        t = dict(fixed)
        t.update(zip(free, vals))
        yield tuple(tuple(t[(a, b)] for b in range(n)) for a in range(n))


def count_group_structures(n: int) -> int:
    """Group tables on ``range(n)`` with identity ``0`` (brute force for
    ``n <= 3``, row-by-row Latin-square search beyond)."""
    count = 0
    rows0 = tuple(range(n))

    def rec(rows):
        nonlocal count
        a = len(rows)
        if a == n:
            if group_axioms(rows, 0)[0]:
                count += 1
            return
        for perm in itertools.permutations(range(n)):
            if perm[0] != a:
                continue
            if any(perm[j] == r[j] for r in rows for j in range(n)):
                continue
            rec(rows + (perm,))

    rec((rows0,))
    return count


def hall_search(order: int) -> HallSearchReport:
    """All bracket tables on ``range(order)`` with ``e = 0``; exhaustive for
    order at most 3, with ``[a,e] = a`` and ``[a,a] = e`` imposed up front at
    order 4."""
    if order < 1 or order > 4:
        raise ValueError("order must be between 1 and 4")
    pruned = order == 4
    examined = 0
    passing = 0
    all_extract = True
    found: list[FiniteGroup] = []
    for t in _bracket_tables(order, pruned):
        examined += 1
        m = PointedMagma(t, 0)
        if hall_relations(m)[0] is not None:
            continue
        passing += 1
        r = hall_extract(m)
        if r.group is None or not r.round_trip:
            all_extract = False
            continue
        if not any(is_isomorphic(r.group, H) for H in found):
            found.append(r.group)
    every = all(any(is_isomorphic(G, H) for H in found) for G in groups_up_to_order(order) if G.order == order)
    return HallSearchReport(order, examined, passing, all_extract, every, count_group_structures(order))


# --- test fixtures -----------------------------------------------------------


def two_object_groupoid() -> FiniteCategory:
    mors = {"id0": (0, 0), "id1": (1, 1), "u": (0, 1), "ui": (1, 0)}
    comp = {
        ("id0", "id0"): "id0", ("id1", "id1"): "id1",
        ("u", "id0"): "u", ("id1", "u"): "u",
        ("ui", "id1"): "ui", ("id0", "ui"): "ui",
        ("ui", "u"): "id0", ("u", "ui"): "id1",
    }  # fmt: skip
    return FiniteCategory((0, 1), mors, {0: "id0", 1: "id1"}, comp)


def two_color_operad() -> FiniteColoredOperad:
    """Colors ``a, b``; identities, inverse unary operations ``k: a -> b``,
    ``k': b -> a`` and constants ``z: () -> a``, ``w: () -> b``."""
    ops = {
        "id_a": (("a",), "a"),
        "id_b": (("b",), "b"),
        "k": (("a",), "b"),
        "k'": (("b",), "a"),
        "z": ((), "a"),
        "w": ((), "b"),
    }
    gamma = {}
    unary = {("a", "a"): "id_a", ("b", "b"): "id_b", ("a", "b"): "k", ("b", "a"): "k'"}
    const = {"a": "z", "b": "w"}
    for g, (ins, out) in ops.items():
        if len(ins) != 1:
            continue
        for h, (ins2, out2) in ops.items():
            if out2 != ins[0]:
                continue
            if len(ins2) == 1:
                gamma[(g, (h,))] = unary[(ins2[0], out)]
            else:
                gamma[(g, (h,))] = const[out]
    return FiniteColoredOperad(("a", "b"), ops, {"a": "id_a", "b": "id_b"}, gamma)


def groupoid_action() -> CatActionOnColoredOperad:
    """The groupoid acts by post-composing with ``k`` and ``k'``."""
    C = two_object_groupoid()
    P = two_color_operad()
    mu = {g: (0 if out == "a" else 1) for g, (_, out) in P.operations.items()}
    act = {}
    post = {"u": "k", "ui": "k'"}
    for f in C.morphisms:
        for g in P.operations:
            if C.source(f) != mu[g]:
                continue
            if f in ("id0", "id1"):
                act[(f, g)] = g
            else:
                act[(f, g)] = P.gamma[(post[f], (g,))]
    return CatActionOnColoredOperad(C, P, mu, act)


def discrete_category(objs: Sequence) -> FiniteCategory:
    mors = {f"id{c}": (c, c) for c in objs}
    return FiniteCategory(tuple(objs), mors, {c: f"id{c}" for c in objs}, {(f"id{c}", f"id{c}"): f"id{c}" for c in objs})


def broken_moment_action() -> CatActionOnColoredOperad:
    """Moment map not constant along composition: ``z`` is moved to object
    1 while ``k'`` (which produces it from ``w``) sits over 0."""
    C = discrete_category((0, 1))
    P = two_color_operad()
    mu = {g: (0 if out == "a" else 1) for g, (_, out) in P.operations.items()}
    mu["z"] = 1
    act = {(f"id{mu[g]}", g): g for g in P.operations}
    return CatActionOnColoredOperad(C, P, mu, act)


def commuting_monoid() -> FiniteCategory:
    """The non-groupoid one-object category ``{1, z}`` with ``z z = z``."""
    mors = {"1": (0, 0), "z": (0, 0)}
    comp = {("1", "1"): "1", ("1", "z"): "z", ("z", "1"): "z", ("z", "z"): "z"}
    return FiniteCategory((0,), mors, {0: "1"}, comp)


# --- JSON --------------------------------------------------------------------


def group_action_to_json(A: GroupActionOnOperad) -> dict:
    return {
        "group": A.G.to_json(),
        "P": {str(n): list(xs) for n, xs in sorted(A.P.items())},
        "act": {str(n): [[g, x, y] for (g, x), y in sorted(t.items(), key=repr)] for n, t in sorted(A.act.items())},
    }


def _hashable(x):
    return tuple(_hashable(y) for y in x) if isinstance(x, list) else x


def group_action_from_json(data) -> GroupActionOnOperad:
    if isinstance(data, str):
        data = json.loads(data)
    G = FiniteGroup.from_json(data["group"])
    P = {int(n): [_hashable(x) for x in xs] for n, xs in data["P"].items()}
    act = {int(n): {(g, _hashable(x)): _hashable(y) for g, x, y in rows} for n, rows in data.get("act", {}).items()}
    return GroupActionOnOperad(G, P, act)


def cat_action_to_json(A: CatActionOnColoredOperad) -> dict:
    C, P = A.C, A.P
    return {
        "category": {
            "objects": [str(c) for c in C.objects],
            "morphisms": {f: [str(s), str(t)] for f, (s, t) in sorted(C.morphisms.items())},
            "identities": {str(c): f for c, f in C.identities.items()},
            "composition": sorted([g, f, h] for (g, f), h in C.composition.items()),
        },
        "operad": {
            "colors": list(P.colors),
            "operations": {g: {"in": list(i), "out": o} for g, (i, o) in sorted(P.operations.items())},
            "identities": dict(P.identities),
            "gamma": sorted([g, list(args), h] for (g, args), h in P.gamma.items()),
            "sigma": sorted([g, list(p), h] for (g, p), h in P.sigma.items()),
        },
        "mu": {g: str(c) for g, c in sorted(A.mu.items())},
        "act": sorted([f, g, h] for (f, g), h in A.act.items()),
    }


def cat_action_from_json(data) -> CatActionOnColoredOperad:
    """Objects are read as strings."""
    if isinstance(data, str):
        data = json.loads(data)
    c, p = data["category"], data["operad"]
    C = FiniteCategory(
        tuple(c["objects"]),
        {f: tuple(st) for f, st in c["morphisms"].items()},
        dict(c["identities"]),
        {(g, f): h for g, f, h in c["composition"]},
    )
    P = FiniteColoredOperad(
        tuple(p["colors"]),
        {g: (tuple(d["in"]), d["out"]) for g, d in p["operations"].items()},
        dict(p["identities"]),
        {(g, tuple(args)): h for g, args, h in p.get("gamma", [])},
        {(g, tuple(perm)): h for g, perm, h in p.get("sigma", [])},
    )
    return CatActionOnColoredOperad(C, P, dict(data["mu"]), {(f, g): h for f, g, h in data["act"]})
