from __future__ import annotations

import json

import pytest

from outerspine import cli
from outerspine.errors import ConclusionFailed, PipelineDefect, UndeterminedComparison
from outerspine.marked_graphs import default_lmax


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_rows(capsys):
    code, out, _ = run(capsys, "norm", "--n", "2", "--phi", "ab,b", "--upto", "2")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows == [["a", "2"], ["b", "1"], ["aa", "4"], ["ab", "3"], ["aB", "1"], ["bb", "2"]]


def test_norm_identity_gives_word_lengths(capsys):
    code, out, _ = run(capsys, "norm", "--n", "3", "--rose", "identity", "--upto", "3",
                       "--emit", "json")
    assert code == 0
    for row in json.loads(out)["coordinates"]:
        assert row["length"] == len(row["class"])


def test_norm_explicit_classes(capsys):
    code, out, _ = run(capsys, "norm", "--rose", '{"n": 2, "phi": ["ab", "b"]}', "Ba", "bab")
    assert code == 0 and out.splitlines() == ["aB\t1", "abb\t4"]


def test_parse_error_has_position(capsys):
    code, _, err = run(capsys, "norm", "--n", "2", "--phi", "ab,b%")
    assert code == 2 and "position 1" in err


@pytest.mark.parametrize("argv", [["norm", "--n", "1"], ["norm", "--lmax", "1"],
                                  ["norm", "--phi", "aa,b"], ["norm", "--n", "3", "--phi", "ab,b"],
                                  ["verify", "no-such-suite"],
                                  ["key-lemma-search", "--n", "3", "--exhaustive"]])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_rose_from_file(capsys, tmp_path):
    f = tmp_path / "rose.json"
    f.write_text('{"n": 2, "phi": ["ab", "b"]}')
    code, out, _ = run(capsys, "norm", "--rose", str(f), "--upto", "1")
    assert code == 0 and out == "a\t2\nb\t1\n"


def test_fold_path_dot(capsys):
    code, out, _ = run(capsys, "fold-path", "--phi", "ab,b", "--emit", "dot")
    assert code == 0 and out.count("subgraph cluster_") >= 2


def test_fold_path_json_and_text(capsys):
    code, out, _ = run(capsys, "fold-path", "--phi", "ab,b", "--emit", "json")
    d = json.loads(out)
    assert code == 0 and d["verified"] and d["path"]["edgeCounts"] == [3, 2]
    code, out, _ = run(capsys, "fold-path", "--phi", "ab,b", "--seed", "3")
    assert code == 0 and "verified True" in out


def test_star_graph(capsys):
    code, out, _ = run(capsys, "star-graph", "--phi", "ab,b", "--class", "aB", "--emit", "dot")
    assert code == 0 and out.startswith("graph StarGraph")
    code, out, _ = run(capsys, "star-graph", "--phi", "ab,b", "--class", "ab", "--emit", "json")
    assert sum(json.loads(out)["valences"]) == 6


def test_reduce_trace_json(capsys):
    code, out, _ = run(capsys, "reduce", "--phi", "bab,ab", "--trace", "json")
    d = json.loads(out)
    assert code == 0 and len(d["steps"]) == 2 and d["result"]["n"] == 2


def test_star_poset(capsys):
    code, out, _ = run(capsys, "star-poset", "--n", "3", "--verify", "homology", "--emit", "json")
    d = json.loads(out)
    assert code == 0 and d["elements"] == 168 and d["betti"] == [1, 0, 11]


def test_reductive_complex(capsys, tmp_path):
    code, out, _ = run(capsys, "reductive-complex", "--rose", "identity")
    assert code == 0 and out.strip() == "empty complex"
    trace = tmp_path / "out.json"
    code, out, _ = run(capsys, "reductive-complex", "--phi", "bab,ab", "--verify", "homology",
                       "--trace", str(trace))
    assert code == 0 and out.startswith("contractible")
    d = json.loads(trace.read_text())
    assert d["verdict"] == "Contractible" and d["betti"] == [1]
    assert [s["tag"] for s in d["trace"]["steps"]][-1] == "Collapse"


def test_key_lemma_search(capsys):
    code, out, _ = run(capsys, "key-lemma-search", "--n", "2", "--exhaustive")
    assert code == 0 and "0 violations" in out
    code, out, _ = run(capsys, "key-lemma-search", "--n", "3", "--samples", "20", "--emit", "json")
    assert code == 0 and json.loads(out)["violations"] == 0


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "all", "--n", "2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 10 and all(line.startswith("PASS") for line in lines)
    code, out, _ = run(capsys, "verify", "count-identity", "--n", "3", "--samples", "200",
                       "--emit", "json")
    d = json.loads(out)
    assert code == 0 and d[0]["passed"] and d[0]["withinTimeLimit"]


def test_output_is_deterministic(capsys):
    argv = ["fold-path", "--phi", "abab,bab", "--seed", "5", "--emit", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    argv = ["key-lemma-search", "--n", "3", "--samples", "10", "--seed", "2", "--emit", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize("exc, code", [(UndeterminedComparison("x"), 3), (PipelineDefect("x"), 4),
                                       (ConclusionFailed("x"), 5)])
def test_defects_have_distinct_exit_codes(capsys, monkeypatch, exc, code):
    def boom(args):
        raise exc

    monkeypatch.setattr(cli, "cmd_norm", boom)
    assert run(capsys, "norm", "--n", "2")[0] == code


def test_lmax_flag_sets_cutoff(capsys, monkeypatch):
    # registering the variable first makes teardown restore the original state
    monkeypatch.setenv("OUTERSPINE_LMAX", "12")
    run(capsys, "norm", "--n", "2", "--lmax", "7")
    assert default_lmax() == 7
