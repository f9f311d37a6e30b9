import json
import subprocess
import sys

import pytest

from urnsolitaire.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSingleValues:
    def test_expect(self, capsys):
        code, out, _ = run_cli(capsys, "expect", "--m", "3", "--n", "3")
        assert code == 0
        assert out == "143/50\n"

    def test_prob(self, capsys):
        code, out, _ = run_cli(capsys, "prob", "--m", "5", "--n", "7")
        assert code == 0
        assert out == "1/2\n"

    def test_simple_prob(self, capsys):
        code, out, _ = run_cli(capsys, "prob", "--m", "2", "--n", "3",
                               "--variant", "simple")
        assert code == 0
        assert out == "2/5\n"

    def test_simple_expect_json(self, capsys):
        code, out, _ = run_cli(capsys, "expect", "--m", "1", "--n", "1",
                               "--variant", "simple", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["expected_rounds"] == "1"
        assert obj["variant"] == "simple"

    def test_domain_error_exit_1(self, capsys):
        code, out, err = run_cli(capsys, "prob", "--m", "0", "--n", "0")
        assert code == 1
        assert out == ""
        assert "error" in err


class TestUsageErrors:
    def test_malformed_integer(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["expect", "--m", "x", "--n", "3"])
        assert exc.value.code == 2

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["expect", "--m", "3"])
        assert exc.value.code == 2

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["expect", "--m", "3", "--n", "3", "--bogus"])
        assert exc.value.code == 2

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestTable:
    def test_json_schema(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--quantity", "win_prob",
                               "--max-m", "2", "--max-n", "2")
        assert code == 0
        obj = json.loads(out)
        assert obj["quantity"] == "win_prob"
        assert len(obj["values"]) == 9
        assert obj["values"][8] == "1/2"  # (2, 2), row-major

    def test_csv(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--quantity", "expected_rounds",
                               "--max-m", "1", "--max-n", "1",
                               "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "m,n,value"
        assert "1,1,1" in out.splitlines()

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        code, out, _ = run_cli(capsys, "table", "--quantity", "win_prob",
                               "--max-m", "1", "--max-n", "1",
                               "--out", str(path))
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["max_m"] == 1


class TestSimulate:
    def test_output_schema(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "--m", "3", "--n", "3",
                               "--trials", "2000", "--seed", "42")
        assert code == 0
        obj = json.loads(out)
        assert obj["trials"] == 2000
        assert obj["seed"] == 42
        assert sum(c for _, c in obj["rounds_histogram"]) == 2000

    def test_seeded_repeatability(self, capsys):
        args = ("simulate", "--m", "2", "--n", "3", "--trials", "500",
                "--seed", "9", "--variant", "simple")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2


class TestVerify:
    def test_theorem2_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--theorem", "2",
                               "--up-to", "15")
        assert code == 0
        obj = json.loads(out)
        assert obj["ok"] is True
        assert obj["checked"] == 15

    def test_theorem1_fails_from_boundary_row(self, capsys):
        # base point m = 0 is outside the recurrence's validity region, so
        # the stated full range reports a failure with witness (0, 1)
        code, out, _ = run_cli(capsys, "verify", "--theorem", "1",
                               "--max-m", "10", "--max-n", "6")
        assert code == 3
        obj = json.loads(out)
        assert obj["ok"] is False
        assert obj["witness"] == [0, 1]


class TestGuessAndDiag:
    def test_diag_text(self, capsys):
        code, out, _ = run_cli(capsys, "diag", "--quantity", "expected_rounds",
                               "--up-to", "3")
        assert code == 0
        assert out == "1\n17/9\n143/50\n"

    def test_guess_diagonal_insufficient(self, capsys):
        code, out, _ = run_cli(capsys, "guess", "--diagonal", "--up-to", "10",
                               "--order", "3", "--deg-n", "7")
        assert code == 0
        obj = json.loads(out)
        assert obj["found"] is False
        assert "insufficient" in obj["status"]

    def test_guess_constant_table(self, capsys):
        code, out, _ = run_cli(capsys, "guess", "--quantity", "win_prob",
                               "--up-to", "10", "--order", "1",
                               "--deg-m", "0", "--deg-n", "0",
                               "--margin", "5")
        assert code == 0
        obj = json.loads(out)
        assert obj["found"] is True
        assert obj["recurrence"]["order"] == 1


class TestBench:
    def test_small_sizes(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--sizes", "15,40",
                               "--dp-max", "20")
        assert code == 0
        obj = json.loads(out)
        first, second = obj["results"]
        assert first["agree"] is True
        assert first["recurrence_tracked_cells"] == 4
        assert second["dp_seconds"] is None
        assert "dp_skipped" in second


def test_console_invocations_byte_identical():
    cmd = [sys.executable, "-m", "urnsolitaire", "simulate", "--m", "3",
           "--n", "3", "--trials", "3000", "--seed", "42"]
    runs = [subprocess.run(cmd, capture_output=True, check=True)
            for _ in range(2)]
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout.startswith(b'{"trials": 3000')
