import csv
import io
import json
import os
import re
import subprocess
import sys

import pytest

from maxkin import __version__
from maxkin.cli import main


def run(argv, capsys):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    first, rest = text.split("\n", 1)
    assert first.startswith("# ")
    meta = json.loads(first[2:])
    rows = list(csv.reader(io.StringIO(rest)))
    return meta, rows[0], rows[1:]


def strip_timestamp(text):
    return re.sub(r', "timestamp": "[^"]*"|"timestamp": "[^"]*", ', "", text)


class TestPdf:
    def test_reduced_grid(self, capsys):
        code, out, _ = run(["pdf", "--reduced", "-T", "1", "-m", "1", "--max-speed", "5",
                            "--points", "6"], capsys)
        assert code == 0
        meta, header, rows = parse_csv(out)
        assert header == ["speed", "speed_density", "speed_cdf"]
        assert len(rows) == 6
        cdf = [float(r[2]) for r in rows]
        assert cdf == sorted(cdf) and cdf[-1] >= 0.9999
        assert all(float(r[1]) >= 0 for r in rows)
        assert meta["parameters"]["c"] == 0.5

    def test_too_few_points(self, capsys):
        code, out, err = run(["pdf", "--points", "1"], capsys)
        assert code == 2 and out == "" and "points" in err

    def test_json(self, capsys):
        code, out, _ = run(["pdf", "-T", "310", "--mass-amu", "32", "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"metadata", "rows"}
        assert doc["metadata"]["schema_version"] == "1"
        assert doc["metadata"]["version"] == __version__
        assert doc["metadata"]["parameters"]["temperature_K"] == 310.0
        assert len(doc["rows"]) == 101
        assert set(doc["rows"][0]) == {"speed", "speed_density", "speed_cdf"}

    @pytest.mark.parametrize("argv", [
        ["pdf", "-m", "2"],
        ["pdf", "--reduced", "--mass-amu", "2"],
        ["pdf", "--mass-amu", "2", "--mass-kg", "1e-26"],
        ["pdf", "-T", "-5"],
        ["pdf", "-T", "abc"],
        ["pdf", "--format", "xml"],
        ["nonsense"],
    ])
    def test_usage_errors(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 2 and out == "" and err


class TestFever:
    def report(self, argv, capsys):
        code, out, _ = run(["fever", "--format", "json", "--no-timestamp", *argv], capsys)
        assert code == 0
        return json.loads(out)["report"]

    def test_default_is_exponential(self, capsys):
        r = self.report([], capsys)
        assert r["model"] == "exponential"
        assert r["percent_change"] == pytest.approx(9.291203656783278, rel=1e-10)
        assert r["mean_energy_change_percent"] == pytest.approx(100 / 310)

    def test_no_change(self, capsys):
        assert self.report(["--t-new", "310"], capsys)["percent_change"] == 0.0

    def test_exact(self, capsys):
        r = self.report(["--model", "exact"], capsys)
        assert r["lambda_base"] == pytest.approx(29.5, abs=0.1)
        assert r["percent_change"] == pytest.approx(9.764626911619861, rel=1e-9)

    def test_csv_report(self, capsys):
        code, out, _ = run(["fever"], capsys)
        _, header, rows = parse_csv(out)
        assert "percent_change" in header and len(rows) == 1

    @pytest.mark.parametrize("argv", [["--baseline-fraction", "2"], ["--t-base", "0"],
                                      ["--model", "linear"]])
    def test_invalid(self, argv, capsys):
        code, _, _ = run(["fever", *argv], capsys)
        assert code == 2


class TestTail:
    def test_default(self, capsys):
        code, out, _ = run(["tail", "--format", "json"], capsys)
        r = json.loads(out)["report"]
        assert code == 0 and r["model"] == "exact"
        assert r["fraction"] == pytest.approx(6.0368357228537788e-12, rel=1e-12)

    def test_reaction_time(self, capsys):
        code, out, _ = run(["tail", "--lambda", "0", "--format", "json"], capsys)
        assert json.loads(out)["report"]["reaction_time"] == 1e-9

    def test_activation_energy_reduced(self, capsys):
        code, out, _ = run(["tail", "--reduced", "-T", "2", "--ea", "4", "--format", "json"],
                           capsys)
        assert json.loads(out)["report"]["lambda"] == 2.0

    def test_underflow_is_usage_error(self, capsys):
        code, _, err = run(["tail", "--lambda", "5000"], capsys)
        assert code == 2 and "underflow" in err


class TestSampleAndWalk:
    def test_sample_csv(self, capsys):
        code, out, _ = run(["sample", "-n", "5", "--c", "0.5", "--seed", "42"], capsys)
        meta, header, rows = parse_csv(out)
        assert code == 0 and meta["seed"] == 42
        assert header == ["index", "vx", "vy", "vz", "speed"]
        assert [r[0] for r in rows] == ["0", "1", "2", "3", "4", "mean"]
        # same values as the library's pinned sample
        assert float(rows[0][1]) == 0.4842438932392023

    def test_sample_regenerates_from_metadata(self, capsys):
        _, first, _ = run(["sample", "-n", "50", "--seed", "8", "--stream", "3",
                           "--format", "json"], capsys)
        p = json.loads(first)["metadata"]
        _, second, _ = run(["sample", "-n", str(p["parameters"]["n"]), "--c",
                            repr(p["parameters"]["c"]), "--seed", str(p["seed"]),
                            "--stream", str(p["parameters"]["stream"]), "--format", "json"],
                           capsys)
        assert json.loads(first)["rows"] == json.loads(second)["rows"]

    def test_walk(self, capsys):
        code, out, _ = run(["walk", "--steps", "1", "--trials", "100", "--format", "json"],
                           capsys)
        r = json.loads(out)["report"]
        assert code == 0 and r["mean_squared_displacement"] == 1.0

    def test_walk_diffusion_fields(self, capsys):
        _, out, _ = run(["walk", "--steps", "10", "--trials", "10", "--step-time", "1",
                         "--format", "json"], capsys)
        r = json.loads(out)["report"]
        assert r["diffusion_coefficient"] == 0.5
        assert r["diffusion_length"] == pytest.approx(10 ** 0.5)

    def test_walk_bad_dim(self, capsys):
        assert run(["walk", "--dim", "4"], capsys)[0] == 2


@pytest.fixture(scope="module")
def default_verify():
    buf = io.StringIO()
    old, sys.stdout = sys.stdout, buf
    try:
        code = main(["verify", "--ks-n", "20000", "--format", "json"])
    finally:
        sys.stdout = old
    return code, json.loads(buf.getvalue())


class TestVerify:
    def test_all_pass(self, default_verify):
        code, doc = default_verify
        assert code == 0
        names = [r["check"] for r in doc["rows"]]
        assert {"gauss_integral", "normalization", "mean_energy", "separability"} <= set(names)
        assert any(n.startswith("ks") for n in names)
        assert all(r["status"] == "PASS" for r in doc["rows"])
        assert all(r["measured"] <= r["tolerance"] for r in doc["rows"])

    def test_forced_failure(self, capsys):
        code, out, _ = run(["verify", "--tol-normalization", "1e-20", "--ks-n", "1000"], capsys)
        assert code == 1
        _, _, rows = parse_csv(out)
        status = {r[0]: r[3] for r in rows}
        assert status["normalization"] == "FAIL"
        assert status["gauss_integral"] == "PASS"


class TestOutputContract:
    SEEDED = [
        ["sample", "-n", "200", "--seed", "5"],
        ["walk", "--steps", "20", "--trials", "500", "--seed", "5", "--dim", "2"],
        ["pdf", "--points", "11"],
        ["fever", "--model", "exact"],
        ["tail", "--lambda", "3"],
    ]

    @pytest.mark.parametrize("argv", SEEDED)
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_byte_identical(self, argv, fmt, capsys):
        a = run([*argv, "--format", fmt, "--no-timestamp"], capsys)[1]
        b = run([*argv, "--format", fmt, "--no-timestamp"], capsys)[1]
        assert a == b and "timestamp" not in a

    @pytest.mark.parametrize("argv", SEEDED[:2])
    def test_timestamp_only_in_metadata(self, argv, capsys):
        a = run(argv, capsys)[1]
        b = run(argv, capsys)[1]
        assert '"timestamp"' in a
        assert strip_timestamp(a) == strip_timestamp(b)
        assert a.split("\n", 1)[1] == b.split("\n", 1)[1]

    def test_workers_do_not_change_output(self, capsys):
        a = run(["sample", "-n", "70000", "--no-timestamp", "--workers", "1"], capsys)[1]
        b = run(["sample", "-n", "70000", "--no-timestamp", "--workers", "3"], capsys)[1]
        assert a.split("\n", 1)[1] == b.split("\n", 1)[1]

    def test_csv_number_format(self, capsys):
        _, out, _ = run(["pdf", "--points", "5", "--no-timestamp"], capsys)
        _, _, rows = parse_csv(out)
        pattern = re.compile(r"^-?\d\.\d{16}e[+-]\d{2,3}$")
        assert all(pattern.match(x) for r in rows for x in r)
        assert "," not in "".join(x for r in rows for x in r)

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "walk.json"
        code, out, _ = run(["walk", "--steps", "3", "--trials", "10", "--format", "json",
                            "-o", str(target)], capsys)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["report"]["steps"] == 3
        assert os.listdir(tmp_path) == ["walk.json"]

    def test_no_partial_file_on_error(self, tmp_path, capsys):
        target = tmp_path / "bad.csv"
        code, _, _ = run(["pdf", "--points", "1", "-o", str(target)], capsys)
        assert code == 2
        assert os.listdir(tmp_path) == []

    def test_failed_run_keeps_existing_file(self, tmp_path, capsys):
        target = tmp_path / "keep.csv"
        target.write_text("old\n")
        run(["fever", "--baseline-fraction", "0", "-o", str(target)], capsys)
        assert target.read_text() == "old\n"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "maxkin", "fever", "--no-timestamp"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("# {")
    bad = subprocess.run([sys.executable, "-m", "maxkin", "pdf", "--points", "1"],
                         capture_output=True, text=True, check=False)
    assert bad.returncode == 2 and "error" in bad.stderr
