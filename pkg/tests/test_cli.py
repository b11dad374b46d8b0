import io as _io
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from zeroerror.certs import certificate_from_independent_set
from zeroerror.cli import EXIT_COMPUTATION, EXIT_INVALID, EXIT_OK, run
from zeroerror.graphs import cycle_graph, orthogonality_graph
from zeroerror.io import certificate_to_json, load_schema, ns_from_json, parse_graph, write_graph
from zeroerror.nonsignaling import is_nonsignaling

REPORT_SCHEMA = load_schema("report")


def call(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p3.txt"
    path.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
    return path


@pytest.fixture
def c5_file(tmp_path):
    path = tmp_path / "c5.txt"
    write_graph(path, cycle_graph(5))
    return path


class TestConstruct:
    def test_omega4_then_theta(self, tmp_path):
        path = tmp_path / "omega4.txt"
        assert call("construct", "omega", 4, "-o", path)[0] == EXIT_OK
        assert parse_graph(path) == orthogonality_graph(4)
        code, out, _ = call("theta", path, "--json")
        assert code == EXIT_OK
        assert json.loads(out)["theta"] == pytest.approx(4, abs=1e-4)

    def test_derived(self, c5_file):
        code, out, _ = call("construct", "strong-power", 2, "--graph", c5_file)
        g = parse_graph(out)
        assert code == EXIT_OK and g.n == 25 and g.labels[1] == "0,1"

    def test_json(self):
        code, out, _ = call("construct", "cycle", 5, "--json")
        data = json.loads(out)
        jsonschema.validate(data, load_schema("graph"))
        assert data["n"] == 5 and len(data["edges"]) == 5

    def test_missing_graph(self):
        code, out, err = call("construct", "complement")
        assert code == EXIT_INVALID and out == "" and "--graph" in err


class TestReports:
    def test_params(self, c5_file):
        data = json.loads(call("params", c5_file, "--json")[1])
        assert (data["alpha"], data["chi"], data["theta_e"]) == ("2", "3", "5")

    def test_monogamy_p3(self, p3_file):
        code, out, _ = call("monogamy", p3_file)
        assert code == EXIT_OK and "ell_star = 2" in out

    def test_multisender_json(self):
        code, out, _ = call("multisender-report", "--k", 12, "--uses", 2, "--json")
        data = json.loads(out)
        assert code == EXIT_OK and data["certified"] is True
        assert data["lhs"] == "16777152" and data["rhs"] == "16777216"

    def test_gamma_report(self):
        data = json.loads(call("gamma-report", "--k", 971, "--ell", 4, "--json")[1])
        assert data["certified"] is True and data["t"] == "24"

    def test_tele_bound(self):
        data = json.loads(call("tele-bound", "--vertices", 32, "--alpha", 16, "--xi", 2, "--ell", 1, "--json")[1])
        assert data["t"] == "2" and data["bound_exact"] == "10/3"

    def test_ns_alpha_with_witness(self, p3_file, tmp_path):
        wpath = tmp_path / "w.json"
        code, out, _ = call("ns-alpha", p3_file, "--ell", 2, "--witness", wpath, "--json")
        assert code == EXIT_OK and json.loads(out)["value"] == "2"
        witness = json.loads(wpath.read_text())
        jsonschema.validate(witness, load_schema("nsdistribution"))
        assert is_nonsignaling(ns_from_json(witness))

    def test_theta_matrix_out(self, c5_file, tmp_path):
        mpath = tmp_path / "x.txt"
        assert call("theta", c5_file, "--matrix-out", mpath)[0] == EXIT_OK
        assert np.trace(np.loadtxt(mpath)) == pytest.approx(1)

    def test_confusability(self, tmp_path):
        ch = tmp_path / "ch.txt"
        rows = "\n".join(" ".join("0.5" if j in (i, (i + 1) % 5) else "0" for j in range(5)) for i in range(5))
        ch.write_text(f"channel 5 5\n{rows}\n")
        code, out, _ = call("confusability", ch)
        assert code == EXIT_OK and parse_graph(out) == cycle_graph(5)

    def test_verify_orth(self, c5_file, tmp_path):
        vec = tmp_path / "v.txt"
        vec.write_text("1 0 0\n0 1 0\n1 0 0\n0 1 0\n0 0 1\n")
        data = json.loads(call("verify-orth", c5_file, vec, "--json")[1])
        assert data["certified"] is True and data["xi_upper"] == "3"
        vec.write_text("1 0\n1 0\n1 0\n1 0\n1 0\n")
        code, out, _ = call("verify-orth", c5_file, vec, "--json")
        assert code == EXIT_OK and json.loads(out)["certified"] is False

    def test_verify_cert_accept_and_reject(self, c5_file, tmp_path):
        cert = certificate_to_json(certificate_from_independent_set(cycle_graph(5), [0, 2]))
        path = tmp_path / "cert.json"
        path.write_text(json.dumps(cert))
        data = json.loads(call("verify-cert", c5_file, path, "--json")[1])
        assert data["certified"] is True
        cert["operators"][1][1] = cert["operators"][1][2]
        cert["operators"][1][2] = [[[0.0, 0.0]]]
        path.write_text(json.dumps(cert))
        code, out, _ = call("verify-cert", c5_file, path, "--json")
        # a checked and rejected certificate is a normal result
        assert code == EXIT_OK and json.loads(out)["certified"] is False

    @pytest.mark.parametrize("argv", [
        ("params", "{g}"), ("theta", "{g}"), ("ns-alpha", "{g}", "--ell", "1"), ("monogamy", "{g}"),
        ("sandwich", "{g}", "--ell", "2"), ("gamma-report", "--k", "1995", "--ell", "8"),
        ("gamma-report", "--k", "999", "--ell", "1"), ("multisender-report", "--k", "16"),
        ("tele-bound", "--vertices", "64", "--alpha", "4", "--xi", "8", "--ell", "1"),
    ])
    def test_json_matches_schema(self, argv, c5_file):
        code, out, _ = call(*(a.format(g=c5_file) for a in argv), "--json")
        assert code == EXIT_OK
        jsonschema.validate(json.loads(out), REPORT_SCHEMA)


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ("params",), ("theta", "missing.txt"), ("gamma-report", "--k", "4", "--ell", "1"),
        ("gamma-report", "--k", "971", "--ell", "0"), ("construct", "cycle", "2"), ("bogus",),
        ("theta", "{g}", "--tol", "-1"), ("multisender-report", "--k", "12", "--unknown"), (),
        ("construct", "omega", "40"),
    ])
    def test_invalid_input(self, argv, c5_file):
        code, out, err = call(*(a.format(g=c5_file) for a in argv))
        assert code == EXIT_INVALID and out == "" and err.startswith("error:")

    def test_parse_error_names_line(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("p edge 3 1\ne 2 2\n")
        code, _, err = call("params", bad)
        assert code == EXIT_INVALID and "line 2" in err

    def test_budget_exhausted(self, tmp_path):
        path = tmp_path / "c9.txt"
        write_graph(path, cycle_graph(9))
        code, out, err = call("params", path, "--budget", 1)
        assert code == EXIT_COMPUTATION and out == "" and "budget" in err

    def test_failed_command_writes_no_file(self, tmp_path):
        target = tmp_path / "out.txt"
        assert call("gamma-report", "--k", "4", "--ell", "1", "-o", target)[0] == EXIT_INVALID
        assert not target.exists()


class TestDeterminismAndBatch:
    def test_repeat_is_byte_identical(self, c5_file):
        for argv in (("params", c5_file, "--json"), ("sandwich", c5_file), ("construct", "gamma", 7)):
            assert call(*argv)[1] == call(*argv)[1]

    def test_batch(self, tmp_path, p3_file):
        batch = tmp_path / "batch.txt"
        batch.write_text(f"# comment\nmonogamy {p3_file}\ngamma-report --k 4 --ell 1\nconstruct cycle 3\n")
        code, out, err = call("--batch", batch)
        assert code == EXIT_INVALID
        assert "# [2] monogamy" in out and "# [4] construct cycle 3" in out and "e 1 3" in out
        assert "k must be" in err

    def test_batch_all_ok(self, tmp_path):
        batch = tmp_path / "batch.txt"
        batch.write_text("construct cycle 4\nmultisender-report --k 12\n")
        assert call("--batch", batch)[0] == EXIT_OK

    def test_batch_with_verb_rejected(self, tmp_path):
        batch = tmp_path / "batch.txt"
        batch.write_text("construct cycle 4\n")
        assert call("--batch", batch, "monogamy", "x")[0] == EXIT_INVALID

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "zeroerror.cli", "multisender-report", "--k", "12"],
                              capture_output=True, text=True, timeout=60)
        assert proc.returncode == 0 and "certified   yes" in proc.stdout
