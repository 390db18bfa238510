import json
import subprocess
import sys

import numpy as np
import pytest

from nhsiegel.cli import main, parse_point
from nhsiegel.errors import FormDataError
from nhsiegel.formio import load_form_package, save_form_package
from nhsiegel.samples import build_sample


@pytest.fixture(scope="module")
def e4_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("forms") / "e4.json"
    save_form_package(build_sample("e4"), path)
    return path


@pytest.fixture(scope="module")
def zero_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("forms") / "zero.json"
    save_form_package(build_sample("zero"), path)
    return path


class TestParsePoint:
    def test_degree_one(self):
        z = parse_point("0.3;0.2")
        assert z.n == 1
        assert z.X[0, 0] == 0.3
        assert z.Y[0, 0] == 0.2

    def test_degree_two(self):
        z = parse_point("0,0.5,0;5,0,7")
        assert z.n == 2
        np.testing.assert_allclose(z.X, [[0.0, 0.5], [0.5, 0.0]])
        np.testing.assert_allclose(z.Y, [[5.0, 0.0], [0.0, 7.0]])

    def test_bad_counts(self):
        with pytest.raises(FormDataError):
            parse_point("1,2;3,4")
        with pytest.raises(FormDataError):
            parse_point("1;2;3")

    def test_nonpositive_y_is_input_error(self):
        with pytest.raises(FormDataError):
            parse_point("0;-1")

    def test_cli_maps_bad_point_to_exit_2(self, capsys):
        assert main(["reduce", "--z", "0;-1"]) == 2
        assert "input error" in capsys.readouterr().err


class TestSample:
    def test_writes_round_trippable_file(self, tmp_path):
        out = tmp_path / "e6.json"
        assert main(["sample", "--name", "e6", "--out", str(out)]) == 0
        package = load_form_package(out)
        assert package.expansion == build_sample("e6").expansion

    def test_requires_out(self):
        assert main(["sample", "--name", "e6"]) == 2


class TestEval:
    def test_constant_value(self, tmp_path, capsys):
        path = tmp_path / "const.json"
        save_form_package(build_sample("constant"), path)
        rc = main(["eval", "--form", str(path), "--z", "0;1"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["results"][0]["value"] == [[1.0, 0.0]]

    def test_e4_at_i_matches_oracle(self, e4_file, capsys):
        rc = main(["eval", "--form", str(e4_file), "--z", "0;1"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        value = payload["results"][0]["value"][0]
        assert value[0] == pytest.approx(1.4557628922687093, abs=1e-10)
        assert value[1] == pytest.approx(0.0, abs=1e-12)
        assert payload["results"][0]["phi"] == pytest.approx(1.4557628922687093, abs=1e-10)

    def test_points_file(self, e4_file, tmp_path, capsys):
        pts = tmp_path / "points.json"
        pts.write_text(json.dumps([{"X": [[0.0]], "Y": [[2.0]]}]), encoding="utf-8")
        rc = main(["eval", "--form", str(e4_file), "--points", str(pts)])
        assert rc == 0
        assert len(json.loads(capsys.readouterr().out)["results"]) == 1

    def test_no_points_is_input_error(self, e4_file, capsys):
        assert main(["eval", "--form", str(e4_file)]) == 2

    def test_malformed_file_names_record(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        data = {
            "n": 1,
            "p": 0,
            "level": 1,
            "T_max": 5.0,
            "rep": {"j": 0, "k": 4},
            "growth": {"A": 10.0, "kappa": 1.0},
            "gamma_test_set": [],
            "coefficients": [{"beta": {}, "S": [[-1]], "value": [[1.0, 0.0]]}],
        }
        path.write_text(json.dumps(data), encoding="utf-8")
        rc = main(["eval", "--form", str(path), "--z", "0;1"])
        assert rc == 2
        err = capsys.readouterr().err
        assert "coefficients[0]" in err

    def test_csv_format(self, e4_file, tmp_path):
        out = tmp_path / "vals.csv"
        rc = main(
            ["eval", "--form", str(e4_file), "--z", "0;1", "--out", str(out), "--format", "csv"]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("x11,y11,re_0")
        assert len(lines) == 2

    def test_tmax_override(self, e4_file, capsys):
        rc = main(["eval", "--form", str(e4_file), "--z", "0;1", "--tmax", "0"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["results"][0]["value"] == [[1.0, 0.0]]


class TestReduce:
    def test_gauss_example(self, capsys):
        rc = main(["reduce", "--z", "0.3;0.2"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        rec = payload["results"][0]
        x = rec["z_red"]["X"][0][0]
        y = rec["z_red"]["Y"][0][0]
        assert abs(x) <= 0.5 + 1e-9
        assert x * x + y * y >= 1.0 - 1e-9
        assert rec["in_V_delta"] is True

    def test_identity_on_reduced(self, capsys):
        rc = main(["reduce", "--z", "0;1"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        np.testing.assert_array_equal(payload["results"][0]["gamma"], [[1, 0], [0, 1]])

    def test_degree_two(self, capsys):
        rc = main(["reduce", "--z", "1.3,0.4,-2.0;5,0,7"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        rec = payload["results"][0]
        assert rec["in_V_delta"] is True
        assert rec["min_im_eigenvalue"] >= 0.4 - 1e-9

    def test_no_point(self):
        assert main(["reduce"]) == 2


class TestBound:
    def test_e4_passes(self, e4_file, tmp_path):
        out = tmp_path / "report.json"
        rc = main(
            [
                "bound",
                "--form",
                str(e4_file),
                "--samples",
                "200",
                "--seed",
                "7",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["violations"] == 0
        assert report["kind"] == "theorem"
        assert report["constant"] > 0

    def test_negative_control(self, e4_file, tmp_path):
        out = tmp_path / "neg.json"
        rc = main(
            [
                "bound",
                "--form",
                str(e4_file),
                "--samples",
                "100",
                "--constant",
                "1e-6",
                "--out",
                str(out),
            ]
        )
        assert rc == 1
        assert json.loads(out.read_text())["violations"] > 0

    def test_zero_form_trivially_passes(self, zero_file):
        assert main(["bound", "--form", str(zero_file), "--samples", "50"]) == 0

    def test_corollary_kind(self, e4_file):
        rc = main(
            ["bound", "--form", str(e4_file), "--samples", "100", "--kind", "corollary"]
        )
        assert rc == 0

    def test_determinism(self, e4_file, tmp_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        args = ["bound", "--form", str(e4_file), "--samples", "100", "--seed", "3"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_csv_rows(self, e4_file, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main(
            [
                "bound",
                "--form",
                str(e4_file),
                "--samples",
                "50",
                "--out",
                str(out),
                "--format",
                "csv",
            ]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x11,y11,phi,rhs,ratio"
        assert len(lines) == 51


class TestModerate:
    def test_e4_passes(self, e4_file):
        rc = main(
            ["moderate", "--form", str(e4_file), "--samples", "100", "--r", "2.0"]
        )
        assert rc == 0

    def test_csv_rows(self, e4_file, tmp_path):
        out = tmp_path / "mod.csv"
        rc = main(
            [
                "moderate",
                "--form",
                str(e4_file),
                "--samples",
                "20",
                "--out",
                str(out),
                "--format",
                "csv",
            ]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "g_11,g_12,g_21,g_22,phi,rhs,ratio"
        assert len(lines) == 21

    def test_exponent_too_small(self, e4_file, capsys):
        rc = main(
            ["moderate", "--form", str(e4_file), "--samples", "10", "--r", "0.5"]
        )
        assert rc == 1
        assert "numerical failure" in capsys.readouterr().err


class TestCheck:
    def test_csv_rejected(self, e4_file):
        assert main(["check", "--form", str(e4_file), "--format", "csv"]) == 2

    def test_e4(self, e4_file, tmp_path):
        out = tmp_path / "check.json"
        rc = main(
            [
                "check",
                "--form",
                str(e4_file),
                "--samples",
                "25",
                "--seed",
                "5",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["violations"] == 0
        assert report["max_deviation"] <= report["threshold"]


class TestConfigValidation:
    def test_bad_samples(self, e4_file):
        assert main(["check", "--form", str(e4_file), "--samples", "0"]) == 2

    def test_bad_tol(self, e4_file):
        assert main(["check", "--form", str(e4_file), "--tol", "0"]) == 2

    def test_bad_format_rejected_by_argparse(self, e4_file):
        with pytest.raises(SystemExit):
            main(["eval", "--form", str(e4_file), "--format", "xml"])


def test_console_entry_point(e4_file, tmp_path):
    out = tmp_path / "cli.json"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "nhsiegel.cli",
            "reduce",
            "--z",
            "0.3;0.2",
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert out.exists()
