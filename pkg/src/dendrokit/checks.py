"""The acceptance checks, one function per criterion.

Each returns a :class:`CheckResult`; the CLI ``verify`` command and the
acceptance test module both call these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from . import group_actions as ga
from .dendroidal import (
    Empty,
    NerveCommutative,
    NerveTreeOperad,
    Product,
    Reduced,
    Representable,
    check_strict_segal,
    default_skeleton,
    is_normal,
    isomorphic_via,
    nerve_free,
    tensor_discrete,
)
from .filtration import verify_filtration
from .kan import verify_lke, verify_lknerve, verify_pullback_hom
from .omega import hom_omega
from .operads import I, I_inverse, J, elements, hom_colored_to_free, hom_free
from .trees import GradedSet, Tree, corolla, enumerate_trees, from_code, linear


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.criterion:2d}: {self.name}"

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "passed": self.passed, "detail": self.detail}


X2 = GradedSet.of(x=2)
V2 = GradedSet.of(v=2)
V3 = GradedSet.of(v=3)


def monotone_count(m: int, n: int) -> int:
    """Brute force: order-preserving maps ``{0..m} -> {0..n}``."""
    return sum(1 for f in itertools.product(range(n + 1), repeat=m + 1) if all(a <= b for a, b in zip(f, f[1:])))


def c01_omega_delta(bound: int = 4) -> CheckResult:
    table = {}
    ok = True
    for m in range(bound + 1):
        for n in range(bound + 1):
            a, b = len(hom_omega(linear(m), linear(n))), monotone_count(m, n)
            table[f"{m},{n}"] = a
            ok &= a == b
    return CheckResult(1, "Hom in Omega between linear trees = monotone maps", ok, {"counts": table})


def c02_nerve_representable(max_vertices: int = 3, max_valence: int = 3) -> CheckResult:
    sk = default_skeleton(max_vertices, max_valence)
    bad = None
    for S in sk.trees:
        ok, w = isomorphic_via(Representable(S, sk), NerveTreeOperad(S, sk), lambda f: f.edge_map)
        if not ok:
            bad = {"tree": S.code, "witness": w}
            break
    return CheckResult(2, "nerve of Omega(S) = representable", bad is None, {"trees": len(sk.trees), "failure": bad})


def c03_strict_segal(max_vertices: int = 3, max_valence: int = 3) -> CheckResult:
    sk = default_skeleton(max_vertices, max_valence)
    out = {}
    ok = True
    for label, M in (("empty", GradedSet(())), ("x2", X2), ("x2,y3", GradedSet.of(x=2, y=3))):
        r = check_strict_segal(nerve_free(M, sk))
        out[label] = {"passed": r.passed, "levels": len(r.levels), "truncated": r.truncated, "witness": r.witness}
        ok &= r.passed and not r.truncated
    return CheckResult(3, "strict Segal condition for free-operad nerves", ok, out)


def c04_i_bijection(max_vertices: int = 3, bound: int = 2) -> CheckResult:
    ok = True
    counts = {}
    for R in enumerate_trees(max_vertices, 3):
        left = hom_colored_to_free(R, X2, bound)
        right = hom_free(J(R), X2, bound)
        counts[R.code] = [len(left), len(right)]
        ok &= len(left) == len(right)
        ok &= {I(a) for a in left} == set(right)
        ok &= all(I_inverse(I(a), R) == a for a in left)
        ok &= all(I(I_inverse(m, R)) == m for m in right)
    return CheckResult(4, "I is a bijection with inverse", ok, {"counts": counts, "element_bound": bound})


def c05_lke(elt_bound: int = 2) -> CheckResult:
    cases = [(corolla(2), V2), (from_code("((..).)"), V2), (corolla(3), V3)]
    out = {}
    ok = True
    for S, N in cases:
        r = verify_lke(S, N, 3, elt_bound)
        out[S.code] = {"classes": r.classes, "hom_count": r.hom_count, "bijective": r.bijective, "truncated": r.truncated}
        ok &= r.bijective
    return CheckResult(5, "left Kan extension of a reduced representable", ok, out)


def c06_lknerve_pullback() -> CheckResult:
    r1 = verify_lknerve(X2, V2, 3, 2)
    r2 = verify_pullback_hom(X2, 3)
    ok = r1.bijective and r2.passed
    return CheckResult(
        6,
        "left Kan extension of a nerve and the pullback identification",
        ok,
        {"lknerve": {"classes": r1.classes, "hom_count": r1.hom_count, "bijective": r1.bijective}, "pullback": r2.passed},
    )


def c07_filtration(bound: int = 3) -> CheckResult:
    r = verify_filtration(X2, bound)
    ok = r.exhaustive and r.pushout_counts_match
    detail = {k: v for k, v in r.to_json().items() if k not in ("pushout_table", "per_level_sizes")}
    return CheckResult(7, "primitive-dendrex filtration exhausts the nerve", ok, detail)


def c08_tensor(max_vertices: int = 3, max_valence: int = 3) -> CheckResult:
    sk = default_skeleton(max_vertices, max_valence)
    ok = True
    bad = None
    for S in sk.trees:
        X = Reduced(Representable(S, sk))
        for k in (1, 2, 3):
            K = tuple(range(k))
            lhs = Reduced(Product(Representable(S, sk), K))
            good, w = isomorphic_via(tensor_discrete(X, K), lhs, lambda x: x, elementary=True)
            if not good:
                ok = False
                bad = bad or {"tree": S.code, "k": k, "witness": w}
    return CheckResult(8, "reduced product with a set = tensor", ok, {"failure": bad})


def c09_normality(max_vertices: int = 4, max_valence: int = 3) -> CheckResult:
    sk = default_skeleton(max_vertices, max_valence)
    ok = True
    for S in sk.trees:
        r = is_normal(Empty(sk), Reduced(Representable(S, sk)))
        ok &= r.normal
    cex = is_normal(Empty(sk), NerveCommutative(sk))
    ok &= (not cex.normal) and cex.witness is not None
    return CheckResult(9, "reduced representables are normal", ok, {"trees": len(sk.trees), "counterexample": cex.witness})


def c10_hall() -> CheckResult:
    searches = {o: ga.hall_search(o).to_json() for o in (1, 2, 3)}
    ok = all(s["passed"] for s in searches.values())
    rt = {}
    for G in ga.groups_up_to_order(8):
        r = ga.hall_extract(ga.PointedMagma.from_group(G))
        good = r.relations_hold and r.round_trip and r.group is not None and ga.is_isomorphic(r.group, G)
        rt[G.name] = good
        ok &= good
    return CheckResult(10, "Hall bracket relations characterize groups", ok, {"search": searches, "round_trip": rt})


def c11_bousfield() -> CheckResult:
    ok = True
    res = {}
    for G in ga.groups_up_to_order(6):
        X = ga.nerve_of_monoid(G.table, G.identity, 3)
        b2, b3 = ga.bousfield_bijective(X, 2)[0], ga.bousfield_bijective(X, 3)[0]
        res[G.name] = [b2, b3]
        ok &= b2 and b3
    mono = ga.nerve_of_monoid([[0, 1], [1, 1]], 0, 3)
    fails, w = ga.bousfield_bijective(mono, 2)
    ok &= not fails
    return CheckResult(11, "Bousfield-Segal maps on group nerves", ok, {"groups": res, "monoid_witness": w})


def c12_do_hom(n_max: int = 2, v_max: int = 2) -> CheckResult:
    A = ga.groupoid_action()
    ok = ga.validate_cat_action(A).passed
    counts = {}
    for n in range(n_max + 1):
        for R in [None] + list(enumerate_trees(v_max, 3)):
            a, b = len(ga.do_hom(n, R, A)), ga.do_hom_oracle(n, R, A)
            counts[f"{n}:{R.code if R else '-'}"] = a
            ok &= a == b
    return CheckResult(12, "Hom out of [n, R] matches the pair oracle", ok, {"counts": counts, "morphisms": len(A.P.operations)})


def c13_goper() -> CheckResult:
    P = {n: elements(X2, n, 2) for n in range(4)}
    ok = True
    sizes = {}
    for G in (ga.cyclic(2), ga.symmetric(3)):
        r = ga.goper_coproduct_special(P, G)
        sizes[G.name] = {n: len(r.P[n]) for n in P}
        ok &= all(len(r.P[n]) == G.order * len(P[n]) for n in P)
        ok &= ga.validate_group_action(r).passed
    return CheckResult(13, "special coproduct (G, G x P)", ok, {"sizes": sizes, "P": {n: len(v) for n, v in P.items()}})


CRITERIA: list[Callable[[], CheckResult]] = [
    c01_omega_delta,
    c02_nerve_representable,
    c03_strict_segal,
    c04_i_bijection,
    c05_lke,
    c06_lknerve_pullback,
    c07_filtration,
    c08_tensor,
    c09_normality,
    c10_hall,
    c11_bousfield,
    c12_do_hom,
    c13_goper,
]


def run_all() -> list[CheckResult]:
    return [c() for c in CRITERIA]
