"""CLI surface: grammar, formats, determinism, exit codes."""

import io
import json

import pytest

from flatlab import cli


def run_cli(argv):
    buf = io.StringIO()
    code = cli.run(argv, stream=buf)
    return code, buf.getvalue()


class TestSingerCommand:
    def test_json_fields(self):
        code, out = run_cli(["singer", "--p", "7", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        entry = report["sets"][0]
        assert (entry["p"], entry["q"]) == (7, 57)
        assert len(entry["residues"]) == 8
        assert entry["perfect_difference"] is True
        assert entry["sidon"] is True

    def test_primes_list(self):
        code, out = run_cli(["singer", "--primes", "2,3,5", "--format", "json"])
        assert code == 0
        assert [e["p"] for e in json.loads(out)["sets"]] == [2, 3, 5]

    def test_csv_shape(self):
        code, out = run_cli(["singer", "--p", "7", "--format", "csv"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("# flatlab schema_version=1 command=singer")
        assert lines[1] == "p,q,residues,perfect_difference"
        assert lines[2].startswith("7,57,")

    def test_text_format(self):
        code, out = run_cli(["singer", "--p", "2"])
        assert code == 0
        assert "residues: 0 1 3" in out


class TestValidationAndErrors:
    def test_composite_prime_exits_2(self):
        code, _ = run_cli(["singer", "--p", "4", "--format", "json"])
        assert code == 2

    def test_unknown_flag_exits_2(self):
        code, _ = run_cli(["singer", "--p", "7", "--frobnicate"])
        assert code == 2

    def test_unknown_command_exits_2(self):
        code, _ = run_cli(["transmogrify"])
        assert code == 2

    def test_unknown_preset_exits_2(self):
        code, _ = run_cli(["riesz", "--preset", "nope"])
        assert code == 2

    def test_bad_threads_exits_2(self):
        code, _ = run_cli(["singer", "--p", "7", "--threads", "0"])
        assert code == 2


class TestOtherCommands:
    def test_sidon(self):
        code, out = run_cli(["sidon", "--p", "3", "--format", "json"])
        assert code == 0
        entry = json.loads(out)["supports"][0]
        assert entry["is_sidon"] is True
        assert entry["max_multiplicity"] == 1
        assert entry["fourth_moment_obstruction"] == "3/4"

    def test_flatness_csv_columns(self):
        code, out = run_cli(["flatness", "--primes", "5,13", "--alpha", "1",
                             "--format", "csv"])
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "p,q,l1_norm,defect,discrete_mean,closed_form"
        assert len(lines) == 4

    def test_mahler(self):
        code, out = run_cli(["mahler", "--p", "2", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        cos3 = report["cosine_family"][0]
        assert abs(cos3["continuous"] - 0.9) < 1e-9
        assert abs(cos3["discrete"] - 0.8) < 1e-9

    def test_mz(self):
        code, out = run_cli(["mz", "--p", "3", "--kappa", "2", "--alpha", "2",
                             "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["holds"] is True
        assert report["random_suite"]["violations"] == 0

    def test_riesz_dyadic(self):
        code, out = run_cli(["riesz", "--preset", "dyadic", "--levels", "6",
                             "--grid", "1024", "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["dilations"] == [1, 2, 4, 8, 16, 32]
        assert report["zero_coefficient"] == "1"
        assert abs(report["mahler_product"] - 2.0 ** -6) < 1e-12

    def test_riesz_ternary(self):
        code, out = run_cli(["riesz", "--preset", "ternary", "--levels", "4",
                             "--format", "json"])
        assert code == 0
        assert json.loads(out)["dilations"] == [1, 3, 9, 27]


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["singer", "--p", "13", "--format", "json"],
        ["sidon", "--primes", "2,3", "--format", "csv"],
        ["flatness", "--primes", "5", "--format", "csv"],
        ["mz", "--p", "2", "--format", "json", "--seed", "3"],
        ["riesz", "--preset", "dyadic", "--levels", "5", "--format", "text"],
    ])
    def test_repeat_runs_identical(self, argv):
        assert run_cli(argv) == run_cli(argv)

    def test_threads_flag_does_not_change_output(self):
        a = run_cli(["flatness", "--primes", "5", "--format", "json",
                     "--threads", "1"])
        b = run_cli(["flatness", "--primes", "5", "--format", "json",
                     "--threads", "4"])
        assert a == b

    def test_json_round_trip_byte_stable(self):
        _, out = run_cli(["singer", "--p", "7", "--format", "json"])
        buf = io.StringIO()
        cli._emit_json(json.loads(out), buf)
        assert buf.getvalue() == out

    def test_out_file_lf_endings(self, tmp_path):
        path = tmp_path / "report.json"
        code = cli.run(["singer", "--p", "2", "--format", "json",
                        "--out", str(path)])
        assert code == 0
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert raw.decode("utf-8").endswith("\n")

    def test_seventeen_digit_floats(self):
        _, out = run_cli(["flatness", "--primes", "5", "--format", "json"])
        val = json.loads(out)["polynomials"][0]["l1_norm"]
        assert val == float(format(val, ".17g"))
