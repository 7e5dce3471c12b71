import json
import os
import subprocess
import sys

import pytest

from recon.cli import main
from recon.groupoid import group, pair, unit_groupoid

SWAP = {"(1,1)": "(2,2)", "(1,2)": "(2,1)", "(2,1)": "(1,2)", "(2,2)": "(1,1)"}


@pytest.fixture
def files(tmp_path):
    def put(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)

    out = {
        "p2": put("p2.json", {"schema": "groupoid/v1", **pair(2).to_raw()}),
        "p3": put("p3.json", {"schema": "groupoid/v1", **pair(3).to_raw()}),
        "u4": put("u4.json", {"schema": "groupoid/v1", **unit_groupoid(4).to_raw()}),
        "z4": put("z4.json", {"schema": "groupoid/v1", **group(order=4).to_raw()}),
        "mal": put("mal.json", "{oops"),
        "swap": put("swap.json", {"schema": "fnmap/v1", "relabel": SWAP}),
        "id": put("id.json", {"schema": "fnmap/v1", "identity": True}),
    }
    raw = pair(2).to_raw()
    raw["compose"][1] = [raw["compose"][1][0], raw["compose"][1][1], "(2,2)"]
    out["bad"] = put("bad.json", raw)
    out["dir"] = tmp_path
    return out


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, json.loads(cap.out) if cap.out else None, cap.err


def test_validate_exit_codes(files, capsys):
    code, doc, _ = run(["validate", files["p2"], files["p3"]], capsys)
    assert code == 0 and doc["schema"] == "validation-report/v1"
    assert [f["arrows"] for f in doc["files"]] == [4, 9]
    code, doc, _ = run(["validate", files["bad"]], capsys)
    assert code == 2 and doc["files"][0]["status"] == "axiom-violation" and doc["files"][0]["witness"]
    code, doc, _ = run(["validate", files["mal"]], capsys)
    assert code == 1


def test_reconstruct(files, capsys):
    code, doc, err = run(["reconstruct", files["p3"]], capsys)
    assert code == 0 and doc["schema"] == "reconstruction-report/v1" and doc["status"] == "pass"
    assert set(doc["bijection"]) == set(pair(3).arrows)
    code, doc, _ = run(["reconstruct", files["p2"], "--coefficients", "F3"], capsys)
    assert code == 0 and doc["size_S"] == 17


def test_reconstruct_budget(files, capsys):
    code, doc, _ = run(["reconstruct", files["p3"], "--coefficients", "F5", "--budget", "5"], capsys)
    assert code == 3 and doc["status"] == "budget-exceeded"


def test_pipeline_relabel(files, capsys):
    code, doc, _ = run(["pipeline", files["p2"], files["p2"], files["swap"], "--coefficients", "F2"], capsys)
    assert code == 0 and doc["schema"] == "pipeline-report/v1"
    assert doc["isomorphism"] == SWAP and doc["halted_at"] is None


def test_pipeline_unmet_conditions(files, capsys):
    code, doc, err = run(["pipeline", files["z4"], files["z4"], files["id"], "--coefficients", "F5"], capsys)
    assert code == 4 and doc["halted_at"] == "(5) C^R_Z <= S" and "halted at" in err
    code, doc, _ = run(["pipeline", files["p2"], files["u4"], files["id"], "--coefficients", "F2"], capsys)
    assert code == 4 and doc["halted_at"] == "(6) diagonally isomorphic" and doc["isomorphism"] is None


def test_pipeline_search_and_limits(files, capsys):
    fam = {"schema": "fnfamily/v1", "groupoid": {"kind": "group", "order": 2}, "coefficients": "F2",
           "generate": "steinberg"}
    p = files["dir"] / "f.json"
    p.write_text(json.dumps(fam))
    code, doc, _ = run(["pipeline", str(p), str(p)], capsys)
    assert code == 0 and doc["isomorphism"] == {"0": "0", "1": "1"}
    code, doc, _ = run(["pipeline", files["p3"], files["p3"], "--coefficients", "F2"], capsys)
    assert code == 1 and doc["schema"] == "error/v1"


def test_out_and_determinism(files, capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["reconstruct", files["p2"], "--coefficients", "F3", "--out", str(path)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["tool_version"]


def test_bad_budget_flag(files, capsys):
    code, doc, _ = run(["reconstruct", files["p2"], "--budget", "0"], capsys)
    assert code == 1


def test_suite_with_mutation(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"extra": 0, "max_s": 40, "suites": ["recovery"]}))
    code, doc, err = run(["suite", str(cfg), "--seed", "1"], capsys)
    assert code == 0 and doc["schema"] == "suite-report/v1" and doc["seed"] == 1
    code, doc, err = run(["suite", str(cfg), "--mutate"], capsys)
    assert code == 5
    probe = next(r for r in doc["results"] if r["theorem"] == "validator")
    assert probe["fail"] == 1 and probe["counterexamples"][0]["witness"]


def test_env_budget_via_console_script(files):
    env = {**os.environ, "RECON_BUDGET": "3"}
    res = subprocess.run([sys.executable, "-m", "recon.cli", "reconstruct", files["p3"], "--coefficients", "F5"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 3 and "budget" in res.stderr
    env["RECON_BUDGET"] = "400"
    res = subprocess.run([sys.executable, "-m", "recon.cli", "reconstruct", files["p2"]],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "pass"
