import json

import pytest

from dendrokit.cli import main

X2 = '{"gens":[{"name":"x","valence":2}]}'
V2 = '{"gens":[{"name":"v","valence":2}]}'
C2 = '{"root":"r","vertices":[{"id":"v","out":"r","in":["a","b"]}]}'
L1 = '{"root":"r","vertices":[{"id":"v","out":"r","in":["a"]}]}'
L2 = '{"root":"r","vertices":[{"id":"v","out":"r","in":["a"]},{"id":"w","out":"a","in":["b"]}]}'
C3 = '{"root":"r","vertices":[{"id":"v","out":"r","in":["a","b","c"]}]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_trees_enumerate(capsys):
    code, rep, _ = run(capsys, "trees", "enumerate", "--max-vertices", "2", "--max-valence", "1")
    assert code == 0
    assert rep["results"]["by_vertices"] == {"0": ["."], "1": ["()", "(.)"], "2": ["(())", "((.))"]}


def test_trees_aut_and_canonical(capsys):
    code, rep, _ = run(capsys, "trees", "aut", "--input", C2)
    assert code == 0 and rep["results"]["order"] == 2
    a = run(capsys, "trees", "canonical", "--input", C3)[1]
    b = run(capsys, "trees", "canonical", "--input", C3)[1]
    assert a == b and a["results"]["code"] == "(...)"


def test_hom_examples(capsys):
    assert run(capsys, "hom", "omega", "--source", L1, "--target", L2)[1]["results"]["count"] == 6
    eta = '{"root":"r","vertices":[]}'
    assert run(capsys, "hom", "omega", "--source", eta, "--target", C3)[1]["results"]["count"] == 4
    assert run(capsys, "hom", "free", "--source", V2, "--target", X2, "--bound", "1")[1]["results"]["count"] == 2


def test_hom_free_without_bound_is_usage_error(capsys):
    code, rep, err = run(capsys, "hom", "free", "--source", V2, "--target", X2)
    assert code == 2 and rep is None and "finite" in err


def test_malformed_json_reports_position(capsys):
    code, _, err = run(capsys, "trees", "canonical", "--input", '{"root": "r", "vertices": [}')
    assert code == 2 and "column" in err


def test_unknown_prop(capsys):
    code, _, err = run(capsys, "verify", "--prop", "nonsense")
    assert code == 2 and "available" in err


def test_verify_hall_and_pullback(capsys):
    code, rep, _ = run(capsys, "verify", "--prop", "hall", "--order", "3")
    assert code == 0 and rep["results"]["hall"]["passing_tables"] == 1
    code, rep, _ = run(capsys, "verify", "--prop", "pullback", "--gens", X2, "--bound", "3")
    assert code == 0


def test_segal_from_presheaf_file(capsys, tmp_path):
    path = str(tmp_path / "nerve_x2.json")
    assert run(capsys, "nerve", "--gens", X2, "--tree-bound", "2", "--output", path)[0] == 0
    code, rep, _ = run(capsys, "verify", "--prop", "segal", "--input", path)
    assert code == 0 and rep["passed"]


def test_kan_verify(capsys):
    code, rep, _ = run(capsys, "kan-verify", "--proposition", "lke", "--tree", C2, "--gens", V2)
    assert code == 0 and rep["results"]["classes"] == 2


def test_truncation_exit_code(capsys):
    V1 = '{"gens":[{"name":"v","valence":1}]}'
    L = '{"root":"r","vertices":[{"id":"v","out":"r","in":["a"]}]}'
    code, rep, _ = run(capsys, "kan-verify", "--proposition", "lke", "--tree", L, "--gens", V1, "--tree-bound", "2")
    assert rep["truncated"] and rep["passed"] and code == 3
    code2, _, _ = run(capsys, "kan-verify", "--proposition", "lke", "--tree", L, "--gens", V1, "--tree-bound", "2", "--allow-truncated")
    assert code2 == 0


def test_bousfield_failures_exit_1(capsys):
    code, rep, _ = run(capsys, "bousfield", "extract", "--magma", '{"table":[[0,0],[1,1]],"e":0}')
    assert code == 1 and rep["witnesses"]["relation"] == "[a,a]=e"
    code, rep, _ = run(capsys, "bousfield", "psi", "--group", '{"table":[[0,1],[1,1]]}', "--level", "2")
    assert code == 1


def test_action_validate(capsys, tmp_path):
    from dendrokit import group_actions as ga

    p = tmp_path / "cat.json"
    p.write_text(json.dumps(ga.cat_action_to_json(ga.groupoid_action())))
    assert run(capsys, "action", "validate", "--kind", "category", "--input", str(p))[0] == 0
    p.write_text(json.dumps(ga.cat_action_to_json(ga.broken_moment_action())))
    code, rep, _ = run(capsys, "action", "validate", "--kind", "category", "--input", str(p))
    assert code == 1 and rep["witnesses"]


def test_deterministic_output(capsys):
    argv = ["filtration-verify", "--gens", X2, "--bound", "2"]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    b = capsys.readouterr().out
    assert a == b


def test_meta_is_outside_payload(capsys):
    main(["trees", "enumerate", "--max-vertices", "1", "--meta"])
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"report", "meta"}


def test_plot_dir(capsys, tmp_path):
    d = tmp_path / "plots"
    assert main(["trees", "enumerate", "--max-vertices", "2", "--plot-dir", str(d)]) == 0
    capsys.readouterr()
    assert (d / "trees.png").stat().st_size > 0
    assert main(["filtration-verify", "--gens", X2, "--bound", "2", "--plot-dir", str(d)]) == 0
    assert (d / "filtration.png").exists()


def test_jobs_flag_parallel_matches_serial(capsys):
    main(["verify", "--prop", "criterion-1"])
    a = json.loads(capsys.readouterr().out)
    main(["verify", "--prop", "criterion-1", "--jobs", "2"])
    b = json.loads(capsys.readouterr().out)
    assert a == b and a["passed"]
