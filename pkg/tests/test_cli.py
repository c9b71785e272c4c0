import json
import subprocess
import sys

import pytest

from keycast.cli import main
from keycast.graph import make_instance, save_instance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fig3_file(tmp_path):
    path = tmp_path / "fig3.json"
    assert main(["gen", "fig3", "--ell", "5", "-o", str(path)]) == 0
    return path


@pytest.fixture
def line2_file(tmp_path):
    path = tmp_path / "line2.json"
    save_instance(make_instance([("s", "v"), ("v", "d1"), ("v", "d2")], "s", [{"d1"}, {"d2"}]), path)
    return path


def test_gen_families(tmp_path, capsys):
    for fam in ("fig3", "fig4", "secure-tight"):
        code, out, _ = run(capsys, "gen", fam, "-o", tmp_path / f"{fam}.json")
        assert code == 0 and "wrote" in out
    data = json.loads((tmp_path / "secure-tight.json").read_text())
    assert len(data["nodes"]) == 8 and data["secrecy_mode"] == "node_eavesdropper"


def test_gen_random_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "gen", "random", "--seed", 7, "--nodes", 10, "--ell", 2, "-o", p)[0] == 0
    assert a.read_text() == b.read_text()


@pytest.mark.parametrize("argv", [
    ["gen", "random", "--nodes", "1", "-o", "x.json"],
    ["gen", "fig3", "--ell", "0", "-o", "x.json"],
    ["gen", "fig3"],
    ["gen", "nonsense", "-o", "x.json"],
    [],
])
def test_usage_errors(tmp_path, capsys, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert run(capsys, *argv)[0] == 2


def test_analyze_fig3(fig3_file, capsys):
    code, out, _ = run(capsys, "analyze", fig3_file)
    assert code == 0
    assert "keycast: FEASIBLE" in out and "secure: FAIL" in out
    assert "C_1 = {2}" in out


def test_analyze_infeasible_prints_witness(line2_file, capsys):
    code, out, _ = run(capsys, "analyze", line2_file)
    assert code == 0
    assert "keycast: INFEASIBLE" in out and "d2 of D_2" in out


def test_analyze_json(fig3_file, capsys):
    code, out, _ = run(capsys, "analyze", fig3_file, "--json")
    data = json.loads(out)
    assert data["keycast"]["feasible"] and not data["secure"]["ok"]


def test_analyze_rejects_empty_terminals(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"nodes": ["s", "d"], "edges": [{"id": 0, "tail": "s", "head": "d"}],
                                "source": "s", "terminal_sets": []}))
    code, _, err = run(capsys, "analyze", path)
    assert code == 2 and "no terminal sets" in err


def test_construct_and_verify(fig3_file, tmp_path, capsys):
    code_path, dot = tmp_path / "code.json", tmp_path / "c.dot"
    code, out, _ = run(capsys, "construct", fig3_file, "--mode", "keycast", "-o", code_path, "--dot", dot)
    assert code == 0 and "rate-1" in out
    assert "α=" in dot.read_text()
    code, out, _ = run(capsys, "verify", fig3_file, code_path, "--exhaustive", "-v")
    assert code == 0 and out.startswith("PASS")
    oracle_lines = [ln for ln in out.splitlines() if "oracle" in ln]
    assert oracle_lines and all(ln.startswith("PASS") for ln in oracle_lines)


def test_construct_refuses_infeasible(line2_file, tmp_path, capsys):
    out_path = tmp_path / "code.json"
    code, _, err = run(capsys, "construct", line2_file, "-o", out_path)
    assert code == 1 and "D_2" in err
    assert not out_path.exists()


def test_construct_secure_condition_failure(fig3_file, tmp_path, capsys):
    out_path = tmp_path / "code.json"
    code, _, err = run(capsys, "construct", fig3_file, "--mode", "secure", "-o", out_path)
    assert code == 1 and "d1" in err
    assert not out_path.exists()


def test_secure_construct_and_verify(tmp_path, capsys):
    inst, code_path, dot = tmp_path / "t.json", tmp_path / "c.json", tmp_path / "t.dot"
    run(capsys, "gen", "secure-tight", "-o", inst)
    code, out, _ = run(capsys, "construct", inst, "--mode", "secure", "-o", code_path, "--dot", dot, "--json")
    assert code == 0 and json.loads(out)["field"]["k"] == 4
    assert "cluster_D2" in dot.read_text()
    assert run(capsys, "verify", inst, code_path, "--exhaustive")[0] == 0


def test_verify_corrupted(fig3_file, tmp_path, capsys):
    code_path = tmp_path / "code.json"
    run(capsys, "construct", fig3_file, "-o", code_path)
    data = json.loads(code_path.read_text())
    data["keys"]["2"] = data["keys"]["1"]
    code_path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", fig3_file, code_path)
    assert code == 1
    assert out.splitlines()[0] == "FAIL: first failing check: decode K_2 at d2"


def test_verify_over_cap_skips(fig3_file, tmp_path, capsys, monkeypatch):
    code_path = tmp_path / "code.json"
    run(capsys, "construct", fig3_file, "-o", code_path)
    monkeypatch.setenv("KEYCAST_MAX_ENUM", "10")
    code, out, _ = run(capsys, "verify", fig3_file, code_path, "--exhaustive")
    assert code == 0 and "SKIPPED" in out


def test_verify_malformed_code(fig3_file, tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    assert run(capsys, "verify", fig3_file, path)[0] == 2


def test_plotkin(capsys):
    code, out, _ = run(capsys, "plotkin", "--n", 6, "--M", 3, "--w", "1/2", "--exhaustive")
    assert code == 0
    assert "27/4" in out and "11480 codebooks" in out and "PASS" in out


def test_plotkin_relaxed_json(capsys):
    code, out, _ = run(capsys, "plotkin", "--n", 8, "--M", 5, "--w", "1/2", "--eps", "1/4", "--json")
    data = json.loads(out)
    assert data["relaxed"] == {"eps": "1/4", "M": 5, "bound": "8"}


@pytest.mark.parametrize("argv", [
    ["plotkin", "--n", "6", "--M", "1", "--w", "1/2"],
    ["plotkin", "--n", "6", "--M", "3", "--w", "abc"],
    ["plotkin", "--n", "6", "--M", "3", "--w", "3/2"],
    ["gap", "nonsecure", "--eps", "2/3"],
    ["gap", "secure", "--eps", "0"],
])
def test_analysis_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_gap_reports(capsys):
    code, out, _ = run(capsys, "gap", "nonsecure", "--eps", "1/8")
    assert code == 0
    assert "key-cast rate:    1 " in out and "SR upper bound:   7/8" in out
    code, out, _ = run(capsys, "gap", "secure", "--eps", "3")
    assert code == 0 and "terminal sets:    12" in out


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "keycast", "gap", "nonsecure", "--eps", "1/8"],
                         capture_output=True, text=True, check=True)
    assert "7/8" in out.stdout
