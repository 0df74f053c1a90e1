import json
import subprocess
import sys

import pytest

from reptile.cli import (
    EXIT_BAD_INPUT,
    EXIT_FAIL,
    EXIT_SAT,
    EXIT_UNKNOWN,
    EXIT_UNSAT,
    build_parser,
    config_from_args,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    return code, out


def last_json(lines):
    return json.loads(lines[-1])


def test_solve_sat(capsys):
    code, out = run(capsys, "solve", "--shape", "J", "--k", "6")
    doc = last_json(out)
    assert code == EXIT_SAT and doc["verdict"] == "SAT" and len(doc["solution"]) == 36


def test_solve_unsat(capsys):
    code, out = run(capsys, "solve", "--shape", "stair", "--k", "2")
    assert code == EXIT_UNSAT and last_json(out)["verdict"] == "UNSAT"


def test_solve_budget_unknown(capsys):
    code, out = run(capsys, "solve", "--shape", "stair", "--k", "7", "--budget-nodes", "20")
    doc = last_json(out)
    assert code == EXIT_UNKNOWN and doc["reason"] == "nodes"


def test_rep_count_validation(capsys):
    code, out = run(capsys, "solve", "--shape", "J", "--rep", "36")
    assert code == EXIT_SAT and last_json(out)["k"] == 6
    assert main(["solve", "--shape", "J", "--rep", "6"]) == EXIT_BAD_INPUT
    assert main(["solve", "--shape", "J", "--k", "0"]) == EXIT_BAD_INPUT
    assert main(["solve", "--shape", "J", "--k", "2", "--budget-seconds", "-1"]) == EXIT_BAD_INPUT


def test_config_from_args():
    ns = build_parser().parse_args(["count", "--shape", "domino", "--rep", "16", "--threads", "2"])
    cfg = config_from_args(ns)
    assert (cfg.k, cfg.threads, cfg.command) == (4, 2, "count")
    assert cfg.budget.max_seconds == 600


def test_bad_shape_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("#.\n.#\n")
    assert main(["solve", "--shape", str(bad), "--k", "1"]) == EXIT_BAD_INPUT
    assert main(["solve", "--shape", str(tmp_path / "missing.txt"), "--k", "1"]) == EXIT_BAD_INPUT


def test_shape_file(capsys, tmp_path):
    f = tmp_path / "dom.txt"
    f.write_text("##\n")
    code, out = run(capsys, "count", "--shape", str(f), "--k", "2")
    assert code == 0 and last_json(out)["count"] == 5


@pytest.mark.parametrize("name,k,expected", [("domino", 2, 5), ("monomino", 5, 1), ("domino", 3, 41)])
def test_count_modes_agree(capsys, name, k, expected):
    _, a = run(capsys, "count", "--shape", name, "--k", str(k))
    _, b = run(capsys, "count", "--shape", name, "--k", str(k), "--mode", "cached")
    assert last_json(a)["count"] == last_json(b)["count"] == expected
    assert last_json(b)["cache_stats"]["entries"] >= 0


def test_count_stream(capsys, tmp_path):
    out = tmp_path / "sols.jsonl"
    code, lines = run(capsys, "count", "--shape", "domino", "--k", "2", "--out", str(out))
    rows = [json.loads(l) for l in out.read_text().splitlines()]
    assert code == 0 and len(rows) == 5 and [r["solution_index"] for r in rows] == list(range(5))
    assert last_json(lines)["solutions_file"] == str(out)


def test_count_threads(capsys):
    code, out = run(capsys, "count", "--shape", "domino", "--k", "4", "--threads", "2")
    assert code == 0 and last_json(out)["count"] == 2245


def test_count_budget(capsys):
    code, out = run(capsys, "count", "--shape", "domino", "--k", "5", "--budget-nodes", "100")
    doc = last_json(out)
    assert code == EXIT_UNKNOWN and doc["count"] is None and doc["partial_count"] < 185921


def test_count_cache_overflow(capsys, monkeypatch):
    monkeypatch.setenv("REPTILE_CACHE_BYTES", "1000")
    code, out = run(capsys, "count", "--shape", "domino", "--k", "5", "--mode", "cached")
    assert code == EXIT_UNKNOWN and last_json(out)["reason"] == "cache"


def test_encode(capsys, tmp_path):
    prefix = tmp_path / "dk2"
    code, out = run(capsys, "encode", "--shape", "domino", "--k", "2", "--out", str(prefix))
    doc = last_json(out)
    assert code == 0 and doc["files"]["opb"]["variables"] == 10 and doc["files"]["opb"]["constraints"] == 8
    assert (tmp_path / "dk2.cnf").exists() and (tmp_path / "dk2.lp").exists()
    assert main(["encode", "--shape", "domino", "--k", "2", "--formats", "xml"]) == EXIT_BAD_INPUT


def test_analyze(capsys):
    code, out = run(capsys, "analyze", "--shape", "J", "--k", "6", "--pieces", "J-rect", "--copies", "2")
    doc = last_json(out)
    assert code == 0
    assert doc["parity"] == "Unknown" and doc["coarse_count"] == 1
    assert doc["product_count"] == 262144 and doc["flip_exponent"] == 18
    assert {m["name"] for m in doc["meta_pieces"]} >= {"J-rect", "J-S"}
    code, out = run(capsys, "analyze", "--shape", "J", "--k", "7")
    assert last_json(out)["parity"] == "ImpossibleOddK"
    assert main(["analyze", "--shape", "J", "--k", "6", "--pieces", "nope"]) == EXIT_BAD_INPUT


def test_analyze_forced(capsys):
    code, out = run(capsys, "analyze", "--shape", "monomino", "--k", "2", "--seed", "J-rect")
    assert code == 0 and last_json(out)["forced"]["found"] is False


def test_verify_constants_identities(capsys):
    code, out = run(capsys, "verify-constants", "--identities-only")
    assert code == 0 and last_json(out)["failed"] == []
    assert any(line.startswith("pass") for line in out)


def test_verify_constants_corrupted(capsys, tmp_path):
    from importlib import resources

    doc = json.loads(resources.files("reptile").joinpath("data/constants.json").read_text())
    for ident in doc["identities"]:
        if ident["name"] == "F k=9 patterns":
            ident["total"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run(capsys, "verify-constants", "--identities-only", "--constants", str(bad))
    assert code == EXIT_FAIL and "F k=9 patterns" in last_json(out)["failed"]
    assert main(["verify-constants", "--constants", str(tmp_path / "none.json")]) == EXIT_BAD_INPUT


def test_render_round_trip(capsys, tmp_path):
    sol = tmp_path / "sol.json"
    svg = tmp_path / "j6.svg"
    assert main(["solve", "--shape", "J", "--k", "6", "--out", str(sol)]) == 0
    capsys.readouterr()
    code, out = run(capsys, "render", "--shape", "J", "--k", "6", "--solution", str(sol), "--out", str(svg))
    assert code == 0 and last_json(out)["pieces"] == 36
    assert svg.read_text().count("<path") == 37
    sol.write_text('{"placements": [0]}\n')
    assert main(["render", "--shape", "J", "--k", "6", "--solution", str(sol), "--out", str(svg)]) == EXIT_BAD_INPUT
    code, out = run(capsys, "render", "--shape", "stair", "--k", "2", "--out", str(svg))
    assert code == EXIT_UNSAT


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "reptile", "solve", "--shape", "domino", "--k", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["verdict"] == "SAT"
    res = subprocess.run([sys.executable, "-m", "reptile"], capture_output=True, text=True)
    assert res.returncode == EXIT_BAD_INPUT
