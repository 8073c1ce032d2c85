import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from mdiqkd.cli import main
from mdiqkd.config import (
    DEFAULT_CONFIG_TEXT, ConfigError, RunConfig, eta_to_distance_km, load_config,
    parse_config_text,
)
from mdiqkd.records import COLUMNS, format_csv, format_json, parse_csv, parse_json

GOLDEN = Path(__file__).resolve().parents[1] / "configs" / "reference.conf"
COARSE = "0.02:0.6:0.02"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestConfig:
    def test_golden_file_is_default(self):
        assert load_config(GOLDEN) == RunConfig()

    def test_defaults_are_reference_values(self):
        cfg = RunConfig()
        ch = cfg.channel
        assert (ch.e_d, ch.P_d, ch.f, cfg.n_alpha) == (0.015, 3e-6, 1.16, 5.0)
        assert parse_config_text(DEFAULT_CONFIG_TEXT) == cfg

    @pytest.mark.parametrize("text", ["bogus = 1", "eta 0.1", "mu1 = 0.5", "eta = 1.5",
                                      "N = 0", "method = wang", "format = xml", "e_d = 0.7",
                                      "grid = 0.5:0.1:0.1", "distance = maybe", "eta ="])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config_text(text)

    def test_comments_and_lists(self):
        cfg = parse_config_text("# c\neta = 0.5, 0.1  # two\nN = 1e12,inf\n")
        assert cfg.etas == (0.5, 0.1) and cfg.N == (1e12, math.inf)

    def test_distance_mapping(self):
        assert eta_to_distance_km(0.1) == pytest.approx(50.0)


class TestTable1:
    def test_default(self, capsys):
        code, out, _ = run(capsys, "table1")
        assert code == 0
        row = out.splitlines()[1].split()
        assert row[:3] == ["0.1", "0.36", "0.01"]
        assert float(row[3]) == pytest.approx(4.1967e-3, rel=5e-3)
        assert abs(float(row[4].rstrip("%")) - 2.7241) <= 0.05
        assert float(row[5]) == pytest.approx(1.3548e-4, rel=0.02)
        assert "published" in out

    def test_lossless_beats_lossy(self, capsys, tmp_path):
        out = tmp_path / "t.json"
        assert main(["table1", "--eta", "1.0,0.1", "--format", "json", "--out", str(out)]) == 0
        recs = parse_json(out.read_text())
        assert recs[0]["R"] > recs[1]["R"]

    def test_malformed_intensities(self, capsys, tmp_path):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("mu2 = 0.2\nmu1 = 0.3\n")
        code, _, err = run(capsys, "table1", "--config", str(cfg))
        assert code != 0 and "mu2 > mu1" in err

    def test_fixed_decoy(self, capsys):
        code, out, _ = run(capsys, "table1", "--mu1", "0.05")
        assert code == 0 and out.splitlines()[1].split()[2] == "0.05"


class TestScan:
    def test_asymptotic_both_methods(self, capsys):
        code, out, _ = run(capsys, "scan", "--eta", "0.5,0.2,0.1,0.05,0.02", "--grid", COARSE)
        assert code == 0
        rows = csv_rows(out)
        assert len(rows) == 10 and tuple(rows[0]) == COLUMNS
        for vw, inf in zip(rows[::2], rows[1::2]):
            assert vw["eta"] == inf["eta"]
            assert (vw["method"], inf["method"]) == ("vacuum+weak", "infinite")
            assert float(vw["R"]) <= float(inf["R"])

    def test_fluctuation(self, capsys):
        code, out, _ = run(capsys, "scan", "--eta", "0.5,0.2,0.1,0.05,0.02",
                           "--n-samples", "1e12,1e13,1e14", "--method", "vacuum+weak",
                           "--grid", COARSE)
        assert code == 0
        rows = csv_rows(out)
        assert len(rows) == 15
        for k in range(0, 15, 3):
            rates = [float(r["R"]) for r in rows[k:k + 3]]
            assert [float(r["N"]) for r in rows[k:k + 3]] == [1e12, 1e13, 1e14]
            assert rates == sorted(rates)

    def test_empty_eta(self, capsys):
        code, _, err = run(capsys, "scan", "--eta", "")
        assert code != 0 and "eta" in err

    def test_number_format(self, capsys):
        _, out, _ = run(capsys, "scan", "--grid", "0.1:0.4:0.1", "--method", "vacuum+weak")
        row = csv_rows(out)[0]
        assert row["eta"] == "1.000000000e-01" and row["N"] == "inf"

    def test_distance_column(self, capsys):
        _, out, _ = run(capsys, "scan", "--grid", "0.1:0.4:0.1", "--distance")
        assert float(csv_rows(out)[0]["distance_km"]) == pytest.approx(50.0)

    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "scan.json"
        assert main(["scan", "--eta", "0.1,0.05", "--n-samples", "inf,1e13",
                     "--grid", "0.05:0.6:0.05", "--format", "json", "--out", str(out)]) == 0
        text = out.read_text()
        recs = parse_json(text)
        assert len(recs) == 6
        assert format_json(recs) == text
        assert json.loads(text)["columns"] == list(COLUMNS)

    def test_csv_round_trip_to_ten_digits(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["scan", "--grid", "0.05:0.6:0.05", "--out", str(out)]) == 0
        recs = parse_csv(out.read_text())
        assert format_csv(recs) == out.read_text()

    def test_unwritable_output(self, capsys, tmp_path):
        target = tmp_path / "missing" / "scan.csv"
        code, _, err = run(capsys, "scan", "--grid", "0.1:0.4:0.1", "--out", str(target))
        assert code != 0 and "cannot write" in err
        assert not target.parent.exists()

    def test_no_partial_file_left(self, tmp_path, monkeypatch):
        target = tmp_path / "scan.csv"
        import mdiqkd.cli as cli

        def broken(cfg, records):
            raise OSError("disk full")
        monkeypatch.setattr(cli, "_serialize", broken)
        assert main(["scan", "--grid", "0.1:0.4:0.1", "--out", str(target)]) != 0
        assert list(tmp_path.iterdir()) == []


class TestOptimize:
    def test_reference_signal(self, capsys):
        code, out, _ = run(capsys, "optimize", "--method", "vacuum+weak")
        assert code == 0
        fields = out.splitlines()[1].split()
        assert fields[1] == "vacuum+weak" and fields[3] == "0.36"

    def test_coarse_grid_deterministic(self, capsys):
        first = run(capsys, "optimize", "--grid", "0.1:0.6:0.1")
        second = run(capsys, "optimize", "--grid", "0.1:0.6:0.1")
        assert first == second and first[0] == 0
        assert len(first[1].splitlines()) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mdiqkd", "table1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "published" in proc.stdout
