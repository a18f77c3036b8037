import json
import subprocess
import sys

import pydot
import pytest

from grpclosure.cli import main
from grpclosure.group import all_subgroups
from grpclosure.named import named_group, select_corpus


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), out


# -- closure / series / defect -------------------------------------------------------

def test_closure_examples(capsys):
    _, d, _ = run_json(capsys, "closure", "--group", "S3.json", "--sub", "(1 2)", "--op", "c")
    assert d["closure"]["order"] == 6 and d["is_whole"]
    _, d, _ = run_json(capsys, "closure", "--group", "S3.json", "--sub", "()", "--op", "c")
    assert d["closure"]["order"] == 1 and d["is_trivial"]
    _, d, _ = run_json(capsys, "closure", "--group", "S3.json", "--sub", "()", "--op", "c1")
    assert d["closure"]["order"] == 3


def test_closure_from_file(tmp_path, capsys):
    f = tmp_path / "grp.json"
    f.write_text(json.dumps({"type": "perm", "degree": 4, "generators": ["(1 2 3 4)", "(1 3)"]}))
    code, d, _ = run_json(capsys, "closure", "--group", str(f), "--sub", "(1 3)", "--op", "c2:center")
    assert code == 0 and d["closure"]["order"] == 4


def test_series_d4(capsys):
    code, out, _ = run(capsys, "series", "--group", "D4", "--sub", "(2 4)")
    assert code == 0
    assert "chain 8 > 4 > 2" in out and "defect 2" in out


def test_defect_examples(capsys):
    assert run(capsys, "defect", "--group", "S3", "--sub", "(1 2 3)")[1].strip() == "defect 1"
    assert run(capsys, "defect", "--group", "S3", "--sub", "(1 2)")[1].strip() == "not subnormal"


def test_join_examples(capsys):
    code, d, _ = run_json(capsys, "join", "--group", "D4", "--h", "(2 4)", "--k", "(1 3)")
    assert code == 0 and d["subnormal"] and d["chain_verified"]
    code, d, _ = run_json(capsys, "join", "--group", "C2xC4", "--h", "(1 2)", "--k", "(3 5)(4 6)")
    assert code == 0 and d["subnormal"] and d["closure_defect"] <= 1
    code, d, _ = run_json(capsys, "join", "--group", "S4", "--h", "(1 2)(3 4)", "--k", "(1 3)(2 4)")
    assert code == 0 and d["subnormal"]


# -- exit codes ------------------------------------------------------------------------

def test_exit_not_subnormal(capsys):
    code, _, err = run(capsys, "join", "--group", "S3", "--h", "(1 2)", "--k", "(1 3)")
    assert code == 4 and "not subnormal" in err


def test_exit_additivity(capsys):
    code, _, _ = run(capsys, "join", "--group", "C2xC4", "--h", "(1 2)", "--k", "(3 5)(4 6)",
                     "--op", "c3:socle")
    assert code == 5


def test_exit_parse_error(capsys):
    code, _, err = run(capsys, "closure", "--group", "S3", "--sub", "(1 2", "--op", "c")
    assert code == 2 and "column" in err
    code, _, _ = run(capsys, "closure", "--group", '{"type":"perm","degree":3,"generators":["(1 2"]}',
                     "--sub", "()")
    assert code == 2
    assert run(capsys, "closure", "--group", "S3", "--sub", "()", "--op", "c7")[0] == 2


def test_exit_bound(capsys):
    assert run(capsys, "closure", "--group", "S6", "--sub", "()", "--order-bound", "100")[0] == 3
    assert run(capsys, "lattice", "--group", "S4", "--lattice-bound", "12")[0] == 3


def test_exit_group_error(capsys):
    assert run(capsys, "closure", "--group", "A4", "--sub", "(1 2)")[0] == 1
    assert run(capsys, "closure", "--group", "S4", "--sub", "(1 2)", "--op", "c3!:center")[0] == 1


def test_bad_flags_rejected():
    with pytest.raises(SystemExit) as info:
        main(["closure", "--group", "S3", "--sub", "()", "--format", "xml"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["audit", "--lattice-bound", "0"])


def test_discrepancy_exit(capsys):
    code, d, _ = run_json(capsys, "abelian", "closed", "--g", "[4]", "--h", "[]", "--cat", "group:[2]")
    assert code == 6 and not d["agrees"]


# -- abelian ---------------------------------------------------------------------------

def test_abelian_examples(capsys):
    code, out, _ = run(capsys, "abelian", "hom", "--q", "[6]", "--a", "[4]")
    assert code == 0 and "[2]" in out
    code, out, _ = run(capsys, "abelian", "epi", "--map", "[[3]]", "--dom", "[0]", "--cod", "[0]",
                       "--cat", "torsionfree")
    assert "epi=true" in out and "surjective=false" in out
    code, out, _ = run(capsys, "abelian", "dense", "--g", "[0]", "--h", "[[1]]", "--cat", "torsionfree")
    assert out.startswith("dense: true")


def test_abelian_json(capsys):
    _, d, _ = run_json(capsys, "abelian", "closure", "--g", "[0,4]", "--h", "[[2,0]]", "--cat", "torsionfree")
    assert d["is_whole"] and d["quotient"] == [2, 4]
    _, d, _ = run_json(capsys, "abelian", "closed", "--g", "[0]", "--h", "[[2]]", "--cat", "group:[2]")
    assert d["closed"] is True and d["agrees"]


def test_abelian_parse_errors(capsys):
    assert run(capsys, "abelian", "hom", "--q", "[6", "--a", "[4]")[0] == 2
    assert run(capsys, "abelian", "dense", "--g", "[0]", "--h", "[[1,2]]", "--cat", "free")[0] == 2


# -- audit ---------------------------------------------------------------------------------

def test_audit_small_passes(capsys):
    code, d, _ = run_json(capsys, "audit", "--corpus", "order<=16", "--ops", "c,c1")
    assert code == 0 and not d["paper_discrepancy"]
    assert d["summary"]["groups"] == len(select_corpus("order<=16"))


def test_audit_reports_corpus_wide_equivalence(capsys):
    _, d, _ = run_json(capsys, "audit", "--corpus", "order<=8", "--ops", "c,c3:socle")
    eq = d["summary"]["equivalence_over_corpus"]
    assert eq["c"] == {"idempotent": True, "additive": True, "sup_closed": True, "discrepancy": False}
    # not idempotent everywhere, so the mismatch is outside the equivalence
    assert not eq["c3:socle"]["idempotent"] and not eq["c3:socle"]["discrepancy"]


def test_audit_trivial(capsys):
    code, d, _ = run_json(capsys, "audit", "--corpus", "trivial")
    assert code == 0 and d["summary"]["groups"] == 1


def test_audit_wielandt(capsys):
    code, d, _ = run_json(capsys, "audit", "--corpus", "order<=12", "--ops", "c", "--wielandt")
    assert code == 0
    assert d["summary"]["wielandt_violations"] == 0 and d["summary"]["wielandt_pairs"] > 0


def test_audit_flags_discontinuous_operator(capsys):
    code, d, _ = run_json(capsys, "audit", "--corpus", "S3", "--ops", "c2:center")
    assert code == 6
    assert "c2:center continuity" in d["groups"][0]["discrepancies"]


def test_audit_jobs_and_seed_deterministic(capsys):
    args = ["audit", "--corpus", "order<=8", "--random-homs", "3", "--format", "json"]
    _, a, _ = run(capsys, *args, "--seed", "5")
    _, b, _ = run(capsys, *args, "--seed", "5", "--jobs", "3")
    assert a == b


# -- serialisation -----------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["closure", "--group", "S4", "--sub", "(1 2 3)", "--op", "c3:socle"],
    ["series", "--group", "D8", "--sub", "(2 8)(3 7)(4 6)"],
    ["join", "--group", "D4", "--h", "(2 4)", "--k", "(1 3)", "--full-grid"],
    ["lattice", "--group", "Q8"],
    ["audit", "--corpus", "order<=6"],
    ["abelian", "epi", "--map", "[[2,0],[0,1]]", "--dom", "[0,0]", "--cod", "[0,0]", "--cat", "free"],
])
def test_json_round_trip(capsys, argv):
    _, d, raw = run_json(capsys, *argv)
    assert json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == raw


def parse_dot(text):
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs) == 1
    return graphs[0]


def test_dot_series_over_corpus(capsys):
    for G in select_corpus("order<=12"):
        for H in all_subgroups(G):
            gens = ";".join(str(g) for g in H.generators) or "()"
            code, out, _ = run(capsys, "series", "--group", G.name, "--sub", gens, "--format", "dot")
            assert code == 0
            g = parse_dot(out)
            assert len(g.get_nodes()) >= 1


def test_dot_lattice_and_join(capsys):
    g = parse_dot(run(capsys, "lattice", "--group", "S3", "--format", "dot")[1])
    assert len([n for n in g.get_nodes() if n.get_name().startswith("n")]) == 6
    assert len(g.get_edges()) == 8  # 1 < three C2 and A3, each < S3
    g = parse_dot(run(capsys, "join", "--group", "D4", "--h", "(2 4)", "--k", "(1 3)", "--format", "dot")[1])
    assert g.get_edges()


def test_dot_unavailable_for_closure(capsys):
    assert run(capsys, "closure", "--group", "S3", "--sub", "()", "--format", "dot")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "grpclosure", "defect", "--group", "D4", "--sub", "(2 4)"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "defect 2"
