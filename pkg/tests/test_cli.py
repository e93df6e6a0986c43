import io
import json
import subprocess
import sys

import pytest

from zsa import oracle_pinv, ring_identity
from zsa.cli import main
from zsa.io import dump_matrix, parse_matrix

from conftest import Q

PRINTED = "1,0,1,-2\n3,0,-1,-2\n0,0,0,0\n-4,0,0,3\n"
CORRECTED = "1,0,1,-2\n3,0,-1,-2\n0,0,0,0\n-4,0,0,4\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_ring_identity_member(self, write, capsys):
        path = write("e.csv", dump_matrix(ring_identity(3)))
        code, out, _ = run(["check", path], capsys)
        assert code == 0 and "member" in out

    def test_printed_variant_rejected(self, write, capsys):
        path = write("p.csv", PRINTED)
        code, out, _ = run(["check", path, "--insert-rows", "3", "--insert-cols", "2"], capsys)
        assert code == 1
        assert "row sums:    [0, 0, 0, -1]" in out
        assert "column sums: [0, 0, 0, -1]" in out
        assert "rows 4" in out and "columns 4" in out

    def test_corrected_accepted(self, write, capsys):
        path = write("c.csv", CORRECTED)
        code, out, _ = run(["check", path, "--insert-rows", "3", "--insert-cols", "2"], capsys)
        assert code == 0 and "2x2, rank 2" in out

    def test_identity_rejected(self, write, capsys):
        code, out, _ = run(["check", write("i.csv", "1,0,0\n0,1,0\n0,0,1\n")], capsys)
        assert code == 1 and "non-member" in out

    def test_parse_failure(self, write, capsys):
        code, _, err = run(["check", write("bad.csv", "1,2\n3\n")], capsys)
        assert code == 2 and "row 2" in err

    def test_missing_file(self, capsys):
        code, _, err = run(["check", "/nonexistent/x.csv"], capsys)
        assert code == 2

    def test_stdin(self, capsys, monkeypatch):
        code, out, _ = run(["check"], capsys, "1,-1\n-1,1\n", monkeypatch)
        assert code == 0


class TestPinv:
    def test_auto_smallest(self, write, capsys):
        code, out, err = run(["pinv", write("a.csv", "1,-1\n-1,1\n")], capsys)
        assert code == 0
        assert parse_matrix(out).matrix == Q([[1, -1], [-1, 1]]) / 4
        assert "full-rank-square" in err and err.count("pass") == 4

    def test_zero_inserted(self, write, capsys):
        path = write("c.csv", CORRECTED)
        code, out, err = run(
            ["pinv", path, "--method", "zero-inserted", "--insert-rows", "3", "--insert-cols", "2",
             "--output-format", "json"], capsys)
        assert code == 0
        doc = parse_matrix(out, "json")
        assert doc.matrix == oracle_pinv(parse_matrix(CORRECTED).matrix)
        # rows of the inverse are zero at a, columns at b
        assert doc.insert_rows == (2,) and doc.insert_cols == (3,)

    def test_auto_uses_insertions_from_json(self, write, capsys):
        text = json.dumps({"entries": [[1, 0, 1, -2], [3, 0, -1, -2], [0, 0, 0, 0], [-4, 0, 0, 4]],
                           "insert_rows": [3], "insert_cols": [2]})
        code, _, err = run(["pinv", write("c.json", text)], capsys)
        assert code == 0 and "zero-inserted" in err

    def test_full_rank_on_deficient_names_rank(self, write, capsys):
        path = write("d.csv", dump_matrix(Q([[1, 2, -3], [2, 4, -6], [-3, -6, 9]])))
        code, _, err = run(["pinv", path, "--method", "full-rank"], capsys)
        assert code == 2 and "rank 1" in err

    def test_auto_deficient_goes_to_cholesky(self, write, capsys):
        path = write("d.csv", "1,2,-3\n2,4,-6\n-3,-6,9\n")
        code, out, err = run(["pinv", path, "--cross-check"], capsys)
        assert code == 0
        assert "cholesky" in err and "cross-check against limit formula" in err
        expected = oracle_pinv(Q([[1, 2, -3], [2, 4, -6], [-3, -6, 9]]))
        got = parse_matrix(out, "csv", "float").matrix
        assert got.allclose(expected.to_float(), 1e-9)

    def test_limit_non_convergence(self, write, capsys):
        path = write("ill.csv", "1,1,-2\n1,1.001,-2.001\n-2,-2.001,4.001\n")
        code, _, err = run(["pinv", path, "--kernel", "float", "--method", "limit"], capsys)
        assert code == 1 and "differences:" in err

    def test_limit_with_schedule(self, write, capsys):
        path = write("ill.csv", "1,1,-2\n1,1.001,-2.001\n-2,-2.001,4.001\n")
        code, _, err = run(["pinv", path, "--kernel", "float", "--method", "limit",
                            "--delta-schedule", "1e-9,1e-10,1e-11,1e-12,1e-13,1e-14"], capsys)
        assert code == 0

    def test_rows_only(self, write, capsys):
        code, out, _ = run(["pinv", write("r.csv", "1,0,-1\n0,1,-1\n"), "--method", "rows-only"], capsys)
        assert code == 0
        assert parse_matrix(out).matrix == Q([[2, -1], [-1, 2], [-1, -1]]) / 3

    def test_non_member(self, write, capsys):
        code, _, err = run(["pinv", write("i.csv", "1,0\n0,1\n")], capsys)
        assert code == 1 and "not a zero-sum member" in err

    def test_bad_method(self, capsys):
        assert main(["pinv", "--method", "svd"]) == 2


class TestLiftCompress:
    def test_lift(self, write, capsys):
        code, out, _ = run(["lift", write("x.csv", "1,1\n3,-1\n")], capsys)
        assert code == 0
        assert parse_matrix(out).matrix == Q([[1, 1, -2], [3, -1, -2], [-4, 0, 4]])

    def test_lift_inserted(self, write, capsys):
        code, out, _ = run(["lift", write("x.csv", "1,1\n3,-1\n"), "--insert-rows", "3",
                            "--insert-cols", "2"], capsys)
        assert out == CORRECTED

    def test_round_trip_bytes(self, write, capsys):
        original = "1/2,-3\n7/5,0\n"
        _, lifted, _ = run(["lift", write("x.csv", original)], capsys)
        _, back, _ = run(["compress", write("y.csv", lifted)], capsys)
        assert back == original

    def test_json_round_trip_keeps_insertions(self, write, capsys):
        _, lifted, _ = run(["lift", write("x.csv", "1,1\n3,-1\n"), "--insert-rows", "3",
                            "--insert-cols", "2", "--output-format", "json"], capsys)
        code, back, _ = run(["compress", write("y.json", lifted)], capsys)
        assert code == 0 and parse_matrix(back, "json").matrix == Q([[1, 1], [3, -1]])

    def test_compress_non_member(self, write, capsys):
        code, _, err = run(["compress", write("p.csv", PRINTED), "--insert-rows", "3",
                            "--insert-cols", "2"], capsys)
        assert code == 1 and "-1" in err


class TestVerify:
    def test_rational(self, capsys):
        code, out, _ = run(["verify", "--seed", "42", "--cases", "10"], capsys)
        assert code == 0
        assert "passed=10 failed=0 max_residual=0.000e+00" in out

    def test_float(self, capsys):
        code, out, _ = run(["verify", "--kernel", "float", "--cases", "10"], capsys)
        assert code == 0

    def test_replay(self, capsys):
        code, out, _ = run(["verify", "--seed", "42", "--case", "3"], capsys)
        assert code == 0 and "full-rank/penrose" in out

    def test_failure_exit(self, capsys):
        code, out, _ = run(["verify", "--kernel", "float", "--cases", "3", "--tol", "0"], capsys)
        assert code == 1 and "replay: --seed 0 --case" in out

    def test_non_positive_cases(self, capsys):
        assert main(["verify", "--cases", "0"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zsa", "check"], input="1,-1\n-1,1\n",
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "member" in proc.stdout
