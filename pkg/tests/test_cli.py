import json

import pytest

from lpstrips.cli import main

TRIPLE = {"r": 2, "n": 3, "weights": [["-1", "1"], ["-1", "0"], ["-1", "-1"]]}


@pytest.fixture
def write_json(tmp_path):
    def write(data, name="w.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_triple(capsys, write_json):
    code, out, _ = run(capsys, "analyze", write_json(TRIPLE))
    data = json.loads(out)
    assert code == 0
    assert data["npc_witness"] and "reducible_partition" not in data
    assert data["hyperbolic_witness"] == ["1", "0"]


def test_analyze_sol(capsys, write_json):
    code, out, _ = run(capsys, "analyze", write_json({"r": 1, "n": 2, "weights": [["1"], ["-2"]]}))
    assert code == 0 and "npc_witness" not in json.loads(out)


@pytest.mark.parametrize("payload", [
    {"weights": [["1/0", "1"]]},
    {"weights": [["0", "0"], ["1", "1"]]},
    "not json",
])
def test_bad_inputs_exit_2(capsys, write_json, payload):
    code, _, err = run(capsys, "analyze", write_json(payload))
    assert code == 2 and err.startswith("error:")


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2


def test_palpha_and_qi(capsys, write_json):
    code, out, _ = run(capsys, "palpha", write_json(TRIPLE))
    assert code == 0 and json.loads(out) == {"mu": ["1", "0", "-1"], "p_alpha": "3"}
    other = write_json({"weights": [["-2", "0"], ["-2", "-1"], ["-2", "-2"]]}, "b.json")
    code, out, _ = run(capsys, "qi", write_json(TRIPLE), other)
    assert json.loads(out)["quasi_isometric"] is True


def test_table_sl3(capsys):
    code, out, _ = run(capsys, "table", "sl3")
    regions = json.loads(out)["reports"][0]["regions"]
    assert code == 0
    assert {"at": "4/3", "status": "unknown"} in regions
    assert {"lo": "2", "hi": "inf", "status": "nonzero"} in regions


def test_table_complex_degree(capsys):
    code, out, _ = run(capsys, "table", "complex", "--m", "2", "--degree", "2")
    regions = json.loads(out)["reports"][0]["regions"]
    assert {"lo": "4/3", "hi": "4", "status": "nonzero"} in regions


def test_table_all_degrees_and_errors(capsys, write_json):
    code, out, _ = run(capsys, "table", "real", "--n", "3")
    assert [r["degree"] for r in json.loads(out)["reports"]] == [1, 2, 3]
    assert run(capsys, "table", "real")[0] == 2
    assert run(capsys, "table", "sl3", "--degree", "3")[0] == 2
    bad = write_json({"weights": [["1", "0"], ["0", "1"], ["-1", "-1"]]})
    assert run(capsys, "table", "salpha", bad)[0] == 3


def test_strips(capsys):
    code, out, _ = run(capsys, "strips", "--lambdas", "0,1,1,2", "--degree", "2")
    regions = json.loads(out)["reports"][0]["regions"]
    assert regions[0] == {"lo": "1", "hi": "4/3", "status": "zero"}
    assert run(capsys, "strips", "--lambdas", "0,0")[0] == 2


def test_heis_commands(capsys):
    code, out, _ = run(capsys, "heis", "obstruction", "--form", "(y1^2) dx1")
    assert code == 0 and json.loads(out)["result"] == [{"monomial": "dy1^tau", "coeff": "-2"}]
    code, out, _ = run(capsys, "heis", "lefschetz", "--m", "3")
    ranks = json.loads(out)["ranks"]
    assert ranks[2] == {"k": 2, "dim_domain": 6, "dim_kernel": 5, "dim_image": 1}
    assert run(capsys, "heis", "d")[0] == 2
    code, out, _ = run(capsys, "heis", "vertical", "--form", "(x1*y1) dx1")
    assert code == 0
    assert run(capsys, "heis", "vertical", "--form", "(x1) tau")[0] == 3


def test_budget_and_decay(capsys, write_json):
    code, out, _ = run(capsys, "budget", write_json(TRIPLE))
    data = json.loads(out)
    assert code == 0 and data["plus_threshold"] == data["p_alpha"] == "3" and data["feasible_p"] == []
    code, out, _ = run(capsys, "sl3-decay", "--p", "3", "--pattern", "f dx", "--direction", "-")
    assert json.loads(out)["rates"] == ["1/2", "7/2", "1"]
    assert run(capsys, "sl3-decay", "--p", "2", "--pattern", "f dx", "--direction", "-")[0] == 2


def test_lemma_num(capsys):
    code, out, _ = run(capsys, "lemma-num", "--a", "1", "--b", "2", "--A", "4", "--B", "1", "--numeric-check")
    data = json.loads(out)
    assert abs(data["f_min"] - 4.76220315590459) < 1e-12 and data["relative_error"] < 1e-9
    with pytest.raises(SystemExit):
        main(["lemma-num", "--a", "1", "--b", "1", "--A", "-1", "--B", "1"])


def test_verify_exit_and_determinism(capsys):
    argv = ["verify", "budget", "--trials", "30", "--seed", "1"]
    code, first, _ = run(capsys, *argv)
    assert code == 0 and json.loads(first)["passed"]
    assert run(capsys, *argv)[1] == first
    code, out, _ = run(capsys, "verify", "heis", "--m", "4", "--seed", "7", "--trials", "5")
    assert code == 0


def test_markdown_and_out_file(capsys, tmp_path):
    target = tmp_path / "sl3.md"
    code, out, _ = run(capsys, "table", "sl3", "--format", "md", "--out", str(target))
    text = target.read_text()
    assert code == 0 and out == ""
    assert "| (1, 2) | zero | |" in text and "| {4} | unknown | |" in text


def test_figure_written(capsys, tmp_path):
    fig = tmp_path / "strips.png"
    code, _, _ = run(capsys, "table", "complex", "--m", "3", "--figure", str(fig))
    assert code == 0
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
