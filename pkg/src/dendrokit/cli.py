"""Command-line front end.  Every command prints one JSON report on stdout.

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 truncated output
without ``--allow-truncated``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from . import checks
from . import group_actions as ga
from .dendroidal import (
    check_strict_segal,
    default_skeleton,
    nerve_free,
    presheaf_from_json,
    presheaf_to_json,
)
from .filtration import verify_filtration
from .kan import verify_lke, verify_lknerve, verify_pullback_hom, verify_splitsc
from .omega import hom_omega
from .operads import J, complete_bound, hom_free, hom_free_complete
from .trees import GradedSet, Tree, automorphisms, canonical_form, canonical_tree, enumerate_trees, to_dot

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TRUNCATED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(text: str | None, what: str):
    """JSON from a file path or an inline string."""
    if text is None:
        raise UsageError(f"missing {what}")
    src = text
    if not text.lstrip().startswith(("{", "[")) and os.path.exists(text):
        with open(text) as fh:
            src = fh.read()
    try:
        return json.loads(src)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {what} at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}")


def _tree(text, what="--input") -> Tree:
    try:
        return Tree.from_json(_load(text, what))
    except UsageError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"invalid tree in {what}: {e}")


def _gens(text, what="--gens") -> GradedSet:
    try:
        return GradedSet.from_json(_load(text, what))
    except UsageError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"invalid graded set in {what}: {e}")


def _report(command: str, inputs: dict, results, passed: bool = True, truncated: bool = False, witnesses=None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "passed": passed,
        "truncated": truncated,
        "results": results,
        "witnesses": witnesses,
    }


def _plot_dir(args) -> str | None:
    d = getattr(args, "plot_dir", None)
    if d:
        from .plotting import ensure_dir

        ensure_dir(d)
    return d


# --- trees -------------------------------------------------------------------


def cmd_trees(args) -> dict:
    inputs = {"action": args.action}
    if args.action == "enumerate":
        ts = enumerate_trees(args.max_vertices, args.max_valence)
        inputs.update(max_vertices=args.max_vertices, max_valence=args.max_valence)
        d = _plot_dir(args)
        if d:
            from .plotting import plot_trees

            plot_trees(ts, os.path.join(d, "trees.png"))
        by_size: dict[str, list[str]] = {}
        for t in ts:
            by_size.setdefault(str(t.n_vertices), []).append(t.code)
        return _report("trees", inputs, {"count": len(ts), "codes": [t.code for t in ts], "by_vertices": by_size})
    t = _tree(args.input)
    inputs["input"] = t.to_json()
    if args.action == "canonical":
        c = canonical_tree(t)
        return _report("trees", inputs, {"code": canonical_form(t), "canonical": c.to_json()})
    if args.action == "aut":
        auts = automorphisms(t)
        return _report("trees", inputs, {"order": len(auts), "automorphisms": [dict(sorted(a.items())) for a in auts]})
    if args.action == "dot":
        d = _plot_dir(args)
        if d:
            from .plotting import plot_trees

            plot_trees([t], os.path.join(d, "tree.png"))
        return _report("trees", inputs, {"dot": to_dot(t)})
    raise UsageError(f"unknown trees action {args.action}")


# --- hom ---------------------------------------------------------------------


def cmd_hom(args) -> dict:
    if args.kind == "omega":
        R, S = _tree(args.source, "--source"), _tree(args.target, "--target")
        hs = hom_omega(R, S)
        res = {"count": len(hs)}
        if args.list:
            res["morphisms"] = [dict(h.edge_map) for h in hs]
        return _report("hom", {"kind": "omega", "source": R.to_json(), "target": S.to_json()}, res)
    N, M = _gens(args.source, "--source"), _gens(args.target, "--target")
    if args.bound is None:
        raise UsageError(
            "hom free needs --bound: the free operad on the target is infinite unless every generator "
            "has valence at least 2, so images are enumerated up to a vertex bound"
        )
    hs = hom_free(N, M, args.bound)
    complete = hom_free_complete(N, M, args.bound)
    res = {"count": len(hs), "complete": complete}
    if args.list:
        res["maps"] = [h.to_json() for h in hs]
    inputs = {"kind": "free", "source": N.to_json(), "target": M.to_json(), "bound": args.bound}
    return _report("hom", inputs, res, truncated=not complete)


# --- nerve and segal ---------------------------------------------------------


def _nerve(args):
    M = _gens(args.gens)
    sk = default_skeleton(args.tree_bound, args.max_valence)
    bounds = [complete_bound(M, k) for k in range(args.max_valence + 1)]
    X = nerve_free(M, sk, None if all(b is not None for b in bounds) else args.elt_bound)
    return M, sk, X


def cmd_nerve(args) -> dict:
    M, sk, X = _nerve(args)
    sizes = {t.code: len(X.level(t)) for t in sk.trees}
    inputs = {"gens": M.to_json(), "tree_bound": args.tree_bound, "max_valence": args.max_valence, "elt_bound": args.elt_bound}
    d = _plot_dir(args)
    if d:
        from .plotting import plot_level_sizes

        plot_level_sizes(sizes, os.path.join(d, "nerve_sizes.png"), "nerve level sizes")
    res = {"sizes": sizes}
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(presheaf_to_json(X), fh, sort_keys=True)
        res["written"] = args.output
    return _report("nerve", inputs, res, truncated=X.truncated)


def cmd_segal(args) -> dict:
    if args.input:
        X = presheaf_from_json(_load(args.input, "--input"))
        inputs = {"input": args.input}
    else:
        M, _, X = _nerve(args)
        inputs = {"gens": M.to_json(), "tree_bound": args.tree_bound, "max_valence": args.max_valence}
    r = check_strict_segal(X)
    return _report("segal-check", inputs, r.to_json(), r.passed, r.truncated or X.truncated, r.witness)


# --- kan ---------------------------------------------------------------------


def cmd_kan(args) -> dict:
    p = args.proposition
    inputs = {"proposition": p, "tree_bound": args.tree_bound, "elt_bound": args.elt_bound}
    if p in ("lke", "splitsc"):
        S, N = _tree(args.tree, "--tree"), _gens(args.gens)
        inputs.update(tree=S.to_json(), gens=N.to_json())
        fn = verify_lke if p == "lke" else verify_splitsc
        r = fn(S, N, args.tree_bound, args.elt_bound)
    elif p == "lknerve":
        M, N = _gens(args.gens), _gens(args.n_gens, "--n-gens")
        inputs.update(gens=M.to_json(), n_gens=N.to_json())
        r = verify_lknerve(M, N, args.tree_bound, args.elt_bound)
    elif p == "pullback":
        M = _gens(args.gens)
        inputs.update(gens=M.to_json())
        pr = verify_pullback_hom(M, args.tree_bound, args.elt_bound)
        return _report("kan-verify", inputs, pr.to_json(), pr.passed, pr.truncated, pr.witness)
    else:
        raise UsageError(f"unknown proposition {p}")
    j = r.to_json()
    return _report("kan-verify", inputs, j, r.bijective, r.truncated, r.witnesses or None)


def cmd_filtration(args) -> dict:
    M = _gens(args.gens)
    r = verify_filtration(M, args.bound, args.max_valence)
    j = r.to_json()
    d = _plot_dir(args)
    if d:
        from .plotting import plot_filtration

        plot_filtration(j["per_level_sizes"], os.path.join(d, "filtration.png"))
    inputs = {"gens": M.to_json(), "bound": args.bound}
    return _report("filtration-verify", inputs, j, r.passed, r.truncated, r.witnesses or None)


# --- actions -----------------------------------------------------------------


def cmd_action(args) -> dict:
    data = _load(args.input, "--input")
    try:
        if args.kind == "group":
            r = ga.validate_group_action(ga.group_action_from_json(data))
        else:
            r = ga.validate_cat_action(ga.cat_action_from_json(data))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"invalid {args.kind} action: {e}")
    return _report("action", {"kind": args.kind}, r.to_json(), r.passed, False, r.failures[:1] or None)


def cmd_bousfield(args) -> dict:
    if args.action == "extract":
        m = ga.PointedMagma.from_json(_load(args.magma, "--magma"))
        r = ga.hall_extract(m)
        ok = r.group is not None and r.round_trip
        wit = {"relation": r.failed_relation, "witness": r.witness} if not ok else None
        return _report("bousfield", {"action": "extract"}, r.to_json(), ok, False, wit)
    if args.action == "search":
        if args.order is None:
            raise UsageError("bousfield search needs --order")
        r = ga.hall_search(args.order)
        return _report("bousfield", {"action": "search", "order": args.order}, r.to_json(), r.passed)
    if args.action == "psi":
        g = _load(args.group, "--group")
        table, unit = g["table"], int(g.get("identity", 0))
        X = ga.nerve_of_monoid(table, unit, max(args.level, 1))
        ok, w = ga.bousfield_bijective(X, args.level)
        return _report("bousfield", {"action": "psi", "level": args.level}, {"bijective": ok}, ok, False, w)
    raise UsageError(f"unknown bousfield action {args.action}")


# --- verify ------------------------------------------------------------------


def _run_criterion(i: int):
    r = checks.CRITERIA[i - 1]()
    return r.passed, False, r.to_json(), None if r.passed else r.detail


def _prop_checks(args):
    """Map a proposition name to a zero-argument callable returning
    ``(passed, truncated, payload, witness)``."""
    p = args.prop

    if p == "all":
        return [(f"criterion-{i}", partial(_run_criterion, i)) for i in range(1, len(checks.CRITERIA) + 1)]
    if p.startswith("criterion-"):
        try:
            i = int(p.split("-")[1])
        except ValueError:
            i = 0
        if not 1 <= i <= len(checks.CRITERIA):
            raise UsageError(f"no criterion {p}")
        return [(p, partial(_run_criterion, i))]
    if p == "hall":
        order = args.order or 3

        def run():
            r = ga.hall_search(order)
            return r.passed, False, r.to_json(), None

        return [("hall", run)]
    if p == "segal":
        def run():
            rep = cmd_segal(args)
            return rep["passed"], rep["truncated"], rep["results"], rep["witnesses"]

        return [("segal", run)]
    if p == "pullback":
        M = _gens(args.gens)

        def run():
            r = verify_pullback_hom(M, args.bound, args.elt_bound)
            return r.passed, r.truncated, r.to_json(), r.witness

        return [("pullback", run)]
    if p == "filtration":
        M = _gens(args.gens)

        def run():
            r = verify_filtration(M, args.bound)
            return r.passed, r.truncated, r.to_json(), r.witnesses or None

        return [("filtration", run)]
    raise UsageError(
        f"unknown proposition {p}; available: all, criterion-1..criterion-{len(checks.CRITERIA)}, "
        "hall, segal, pullback, filtration"
    )


def _call(fn):
    return fn()


def cmd_verify(args) -> dict:
    jobs = _prop_checks(args)
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            outs = list(ex.map(_call, [fn for _, fn in jobs]))
    else:
        outs = [fn() for _, fn in jobs]
    results = {}
    witnesses = {}
    passed, truncated = True, False
    for (name, _), (ok, tr, payload, w) in zip(jobs, outs):
        results[name] = payload
        passed &= ok
        truncated |= tr
        if w is not None:
            witnesses[name] = w
    inputs = {"prop": args.prop}
    for k in ("order", "bound", "gens", "input"):
        v = getattr(args, k, None)
        if v is not None:
            inputs[k] = v
    return _report("verify", inputs, results, passed, truncated, witnesses or None)


# --- parser ------------------------------------------------------------------


def _common(p, plots: bool = False):
    p.add_argument("--allow-truncated", action="store_true", help="exit 0 even if an enumeration was truncated")
    p.add_argument("--meta", action="store_true", help="add timing data outside the payload")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    if plots:
        p.add_argument("--plot-dir", help="write PNG figures into this directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dendrokit", description="Bounded verification of dendroidal and operadic combinatorics.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", help="enumerate, canonicalize, automorphisms, DOT")
    p.add_argument("action", choices=["enumerate", "canonical", "aut", "dot"])
    p.add_argument("--input", help="tree JSON (path or inline)")
    p.add_argument("--max-vertices", type=int, default=3)
    p.add_argument("--max-valence", type=int, default=3)
    _common(p, plots=True)
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("hom", help="Hom-sets in Omega or between free operads")
    p.add_argument("kind", choices=["omega", "free"])
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--bound", type=int, help="vertex bound on image elements (free only)")
    p.add_argument("--list", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_hom)

    for name, fn in (("nerve", cmd_nerve), ("segal-check", cmd_segal)):
        p = sub.add_parser(name)
        p.add_argument("--gens", help="graded set JSON for a free-operad nerve")
        if name == "segal-check":
            p.add_argument("--input", help="presheaf JSON")
        else:
            p.add_argument("--output", help="write the presheaf JSON here")
        p.add_argument("--tree-bound", type=int, default=3)
        p.add_argument("--max-valence", type=int, default=3)
        p.add_argument("--elt-bound", type=int, default=2)
        _common(p, plots=name == "nerve")
        p.set_defaults(func=fn)

    p = sub.add_parser("kan-verify")
    p.add_argument("--proposition", required=True, choices=["lke", "lknerve", "pullback", "splitsc"])
    p.add_argument("--tree")
    p.add_argument("--gens")
    p.add_argument("--n-gens", help="graded set N for lknerve")
    p.add_argument("--tree-bound", type=int, default=3)
    p.add_argument("--elt-bound", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_kan)

    p = sub.add_parser("filtration-verify")
    p.add_argument("--gens", required=True)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--max-valence", type=int)
    _common(p, plots=True)
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("action")
    p.add_argument("action", choices=["validate"])
    p.add_argument("--kind", required=True, choices=["group", "category"])
    p.add_argument("--input", required=True)
    _common(p)
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("bousfield")
    p.add_argument("action", choices=["extract", "search", "psi"])
    p.add_argument("--magma")
    p.add_argument("--order", type=int)
    p.add_argument("--group", help="monoid or group table JSON for psi")
    p.add_argument("--level", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_bousfield)

    p = sub.add_parser("verify")
    p.add_argument("--prop", required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--gens")
    p.add_argument("--input")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--tree-bound", type=int, default=3)
    p.add_argument("--max-valence", type=int, default=3)
    p.add_argument("--elt-bound", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    out = {"report": report} if args.meta else report
    if args.meta:
        out["meta"] = {"seconds": round(time.perf_counter() - t0, 3), "pid": os.getpid()}
    print(json.dumps(out, sort_keys=True, default=repr))
    if not report["passed"]:
        return EXIT_FAIL
    if report["truncated"] and not args.allow_truncated:
        print("truncated enumeration; rerun with --allow-truncated to accept", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
