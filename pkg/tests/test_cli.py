import json
import subprocess
import sys

import pytest

from hfplumb.cli import run
from hfplumb.families import sigma_2_3
from hfplumb.plumbing import parse_graph_text

from conftest import two_bad_vertices
from test_families import N4_K2_CHAIN


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


@pytest.fixture
def g7(write):
    return write("s237.graph", sigma_2_3(1).graph.to_text())


def js(argv):
    status, text, _ = run(argv + ["--json"])
    return status, json.loads(text)


class TestCheck:
    def test_sigma237(self, g7):
        status, rep = js(["check", g7])
        assert status == 0
        assert rep["graph"]["det"] == 1
        assert rep["graph"]["negative_definite"] is True
        assert rep["graph"]["bad_vertices"] == [1]
        assert rep["schema"] == 1

    def test_positive_weight(self, write):
        status, text, _ = run(["check", write("p.graph", "vertices: 1 -2\nedges:\n1 2\n")])
        assert status == 1 and "not negative definite" in text

    def test_two_bad_vertices(self, write):
        status, text, _ = run(["check", write("b.graph", two_bad_vertices().to_text())])
        assert status == 1 and "2 bad vertices" in text
        assert run(["check", write("b2.graph", two_bad_vertices().to_text()), "--force"])[0] == 0

    def test_parse_error(self, write):
        status, text, is_err = run(["check", write("x.graph", "vertices: -1 -2\nedges:\n1 q\n")])
        assert status == 2 and "line 3" in text and is_err

    def test_missing_file(self, tmp_path):
        assert run(["check", str(tmp_path / "nope")])[0] == 2


class TestBasics:
    def test_sigma237(self, g7):
        status, rep = js(["basics", g7])
        assert status == 0
        assert rep["result"]["count"] == 2 and rep["result"]["candidates"] == 42

    def test_n6(self, write):
        _, rep = js(["basics", write("n6.graph", sigma_2_3(6).graph.to_text())])
        assert rep["result"]["count"] == 7

    def test_a2(self, write):
        _, rep = js(["basics", write("a2.graph", "vertices: -2 -2\nedges:\n1 2\n")])
        assert [2, 2] not in [b["vector"] for b in rep["result"]["basics"]]


class TestHF:
    def test_sigma237_text(self, g7):
        status, text, _ = run(["hf", g7])
        assert status == 0
        assert text.splitlines()[-1] == "HF+ = T+_0 (+) Z^1_(0)"

    def test_n7(self, write):
        status, text, _ = run(["hf", write("n7.graph", sigma_2_3(7).graph.to_text())])
        assert "HF+ = T+_0 (+) Z^7_(0)" in text

    def test_det_not_one(self, write):
        status, text, _ = run(["hf", write("a1.graph", "vertices: -2\n")])
        assert status == 1 and "determinant is -2" in text

    def test_record(self, g7):
        _, rep = js(["hf", g7])
        r = rep["result"]
        assert r["d"] == 0 and r["reduced"] == [[0, 1]]
        assert r["class_counts"] == [[0, 2], [1, 1]]
        assert r["params"]["slack"] == 4 and r["stability"] == "checked"

    def test_unchecked(self, g7):
        _, rep = js(["hf", g7, "--no-stability-check"])
        assert rep["result"]["stability"] == "unchecked"

    def test_env_fallback(self, g7, monkeypatch):
        monkeypatch.setenv("HFPLUMB_SLACK", "5")
        _, rep = js(["hf", g7])
        assert rep["result"]["params"]["slack"] == 5

    def test_state_cap_exit_code(self, g7):
        status, rep = js(["hf", g7, "--state-cap", "3"])
        assert status == 3 and rep["error"] == "StateCapExceeded"


class TestPath:
    def test_good_trace(self, g7):
        status, text, _ = run(["path", g7, "--vector", "(1,0,-1,-5)"])
        assert status == 0
        assert "GOOD after 7 pushes" in text
        _, rep = js(["path", g7, "--vector", "(1,0,-1,-5)"])
        assert [s["vertex"] for s in rep["result"]["trace"]] == [1, 2, 1, 3, 1, 2, 1]

    def test_bad_certificate(self, write):
        g = write("n2.graph", sigma_2_3(2).graph.to_text())
        cert = write("c.txt", "start: (1,0,-1,-3,2)\npushes: 1 2 1 3 1 2 1 5 4 1 2 1\n")
        status, rep = js(["path", g, "--certificate", cert])
        assert status == 0
        assert rep["result"]["verdict"] == "bad"
        assert rep["result"]["violation"] == {"step": 12, "vertex": 3}

    def test_terminal_input(self, g7):
        _, rep = js(["path", g7, "--vector", "(-1,0,1,3)"])
        assert rep["result"]["verdict"] == "good" and rep["result"]["pushes"] == []

    def test_illegal_push(self, g7, write):
        cert = write("c.txt", "pushes: 2 1\n")
        status, text, _ = run(["path", g7, "--vector", "(1,0,-1,-5)", "--certificate", cert])
        assert status == 1 and "illegal push at step 1" in text

    def test_not_characteristic(self, g7):
        assert run(["path", g7, "--vector", "(0,0,-1,-5)"])[0] == 1

    def test_bad_certificate_file(self, g7, write):
        cert = write("c.txt", "start (1,0)\n")
        assert run(["path", g7, "--certificate", cert])[0] == 2


class TestFamily:
    def test_n1(self, tmp_path):
        status, rep = js(["family", "--n", "1", "--out", str(tmp_path)])
        assert status == 0
        certs = (tmp_path / "sigma_2_3_n1.certs").read_text().splitlines()
        assert sum(c.startswith("good") for c in certs) == 2
        assert sum(c.startswith("uchain") for c in certs) == 2
        assert (tmp_path / "sigma_2_3_n1.json").exists()

    def test_n4_verify(self, tmp_path):
        status, text, _ = run(["family", "--n", "4", "--out", str(tmp_path), "--verify"])
        assert status == 0 and "verify: 10 passed, 0 failed" in text
        certs = (tmp_path / "sigma_2_3_n4.certs").read_text()
        assert "uchain i=2: " + " ".join(map(str, N4_K2_CHAIN)) in certs

    def test_n0(self, tmp_path):
        status, text, _ = run(["family", "--n", "0", "--out", str(tmp_path)])
        assert status == 1 and "positive" in text

    @pytest.mark.parametrize("fmt", [[], ["--json"]])
    def test_round_trip(self, tmp_path, fmt):
        run(["family", "--n", "3", "--out", str(tmp_path)] + fmt)
        name = "sigma_2_3_n3.json" if fmt else "sigma_2_3_n3.graph"
        assert parse_graph_text((tmp_path / name).read_text()) == sigma_2_3(3).graph


@pytest.mark.parametrize("n", [3, 6])
def test_jobs_determinism(write, n):
    g = write(f"n{n}.graph", sigma_2_3(n).graph.to_text())
    for cmd in ("basics", "hf"):
        one = run([cmd, g, "--json", "--jobs", "1"])
        eight = run([cmd, g, "--json", "--jobs", "8"])
        assert one == eight


def test_module_entry_point(g7):
    proc = subprocess.run(
        [sys.executable, "-m", "hfplumb", "hf", g7], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "HF+ = T+_0 (+) Z^1_(0)" in proc.stdout
