import json

from monolearn.boolfn import read_truth_table
from monolearn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_gen_is_deterministic(capsys, tmp_path):
    _, a = run(capsys, "--seed", "1f", "gen", "noisy(majority,0.1)", "--n", "5")
    _, b = run(capsys, "gen", "noisy(majority,0.1)", "--n", "5", "--seed", "1f")
    assert a == b and a.startswith("n=5")
    out = tmp_path / "maj.txt"
    main(["gen", "majority", "--n", "3", "--out", str(out)])
    n, table = read_truth_table(out)
    assert n == 3 and list(table) == [-1, -1, -1, 1, -1, 1, 1, 1]


def test_learn_json_is_reproducible(capsys):
    args = ["learn", "--target", "majority", "--n", "4", "--eps", "0.1", "--json", "--degree", "2",
            "--monotone-gate", "0.5", "--l1-gate", "1"]
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a == b
    rep = json.loads(a)
    assert rep["monotone"] and rep["opt"] == 0 and "seconds" not in rep


def test_dist_exact_and_correct(capsys, tmp_path):
    table = tmp_path / "f.txt"
    table.write_text("n=2\n+1 -1 +1 -1\n")
    _, out = run(capsys, "dist-exact", "--target", str(table), "--json")
    rep = json.loads(out)
    assert rep["opt"] == 0.5 and rep["dist1"] == 1
    _, out = run(capsys, "correct", "--input", str(table), "--eps", "0.2", "--json")
    assert json.loads(out)["monotone"]


def test_match_on_dag(capsys, tmp_path):
    edges = tmp_path / "e.txt"
    edges.write_text("0 1\n")
    vals = tmp_path / "v.txt"
    vals.write_text("1 -1\n")
    _, out = run(capsys, "match", "--input", str(vals), "--dag", str(edges), "--eps", "0.1", "--mode", "local",
                 "--branch", "layered", "--json")
    rep = json.loads(out)
    assert rep["pairs"] == [[0, 1]] and rep["weight"] == 2 and rep["valid"] and "probes" in rep


def test_bench_lca(capsys):
    _, out = run(capsys, "bench-lca", "--vertices", "100", "--queries", "10", "--json", "--timing")
    rep = json.loads(out)
    assert rep["stats"]["queries"] == 10 and "seconds" in rep


def test_verify_exit_codes(capsys):
    assert main(["verify", "corrector", "--scale", "0.05"]) == 0
    assert main(["verify", "corrector", "--scale", "0.05", "--corrupt"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] criterion 1" in out


def test_verify_budget_flags_incomplete(capsys):
    code = main(["verify", "matching", "--scale", "0.05", "--budget", "0", "--json"])
    rep = json.loads(capsys.readouterr().out)
    assert code == 1 and rep["incomplete"]
