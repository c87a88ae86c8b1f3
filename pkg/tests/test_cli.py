"""CLI surface tests: subcommands, file outputs, determinism, exit codes."""

import csv
import json
import subprocess
import sys

import pytest

from cylpeak.cli import cli_main


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "cylpeak.cli", *args], capture_output=True, text=True
    )


class TestExitCodes:
    def test_usage_error(self):
        assert cli_main(["no-such-command"]) == 1

    def test_invalid_parameters(self):
        assert cli_main(["discrete-fredholm", "--a", "2.0", "--q", "0.5", "--n", "1", "--ell", "0"]) == 3

    def test_success(self, capsys):
        assert cli_main(["critical-point", "--a", "0.25"]) == 0
        out = capsys.readouterr().out
        assert "1.3862943611" in out and "1.2599210500" in out


class TestCriticalPoint:
    def test_values(self, capsys):
        cli_main(["critical-point", "--a", "0.25"])
        out = capsys.readouterr().out
        assert "c2_paper  = 1.0000000000" in out


class TestSample:
    def test_csv_schema_and_determinism(self, tmp_path):
        out1 = tmp_path / "s1.csv"
        out2 = tmp_path / "s2.csv"
        base = ["sample", "--a", "0.5", "--q", "0.4", "--n", "2", "--count", "500", "--seed", "11"]
        assert cli_main(base + ["--out", str(out1)]) == 0
        assert cli_main(base + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        rows = list(csv.reader(out1.open()))
        assert rows[0] == ["index", "L", "chi", "peak"]
        assert len(rows) == 501
        for idx, l, c, p in rows[1:]:
            assert int(l) + int(c) == int(p)

    def test_seed_changes_output(self, tmp_path):
        out1 = tmp_path / "s1.csv"
        out2 = tmp_path / "s2.csv"
        cli_main(["sample", "--a", "0.5", "--q", "0.4", "--n", "2", "--count", "200",
                  "--seed", "1", "--out", str(out1)])
        cli_main(["sample", "--a", "0.5", "--q", "0.4", "--n", "2", "--count", "200",
                  "--seed", "2", "--out", str(out2)])
        assert out1.read_bytes() != out2.read_bytes()


class TestEnumerate:
    def test_pmf_json(self, tmp_path):
        out = tmp_path / "pmf.json"
        rc = cli_main(["enumerate", "--a", "0.5", "--q", "0.3", "--n", "1",
                       "--max-volume", "30", "--out", str(out)])
        assert rc == 0
        data = json.loads(out.read_text())
        assert set(data) == {"support", "tail_bound"}
        head = dict((int(v), p) for v, p in data["support"])
        assert head[0] == pytest.approx(0.4878, abs=1e-4)


class TestDeterminants:
    def test_fredholm_airy_near_zero_temp(self, capsys):
        rc = cli_main(["fredholm-airy", "--beta", "50", "--s", "0", "--nodes", "24"])
        assert rc == 0
        val = float(capsys.readouterr().out.strip())
        assert val == pytest.approx(0.9694, abs=2e-3)

    def test_discrete_fredholm_value(self, capsys):
        rc = cli_main(["discrete-fredholm", "--a", "0.5", "--q", "0.3", "--n", "1", "--ell", "0"])
        assert rc == 0
        val = float(capsys.readouterr().out.strip())
        assert val == pytest.approx(0.44430299, abs=1e-6)


class TestCdfCompare:
    def test_schema(self, tmp_path):
        out = tmp_path / "cdf.csv"
        rc = cli_main(["cdf-compare", "--a", "0.5", "--q", "0.3", "--n", "1",
                       "--max-ell", "4", "--count", "2000", "--max-volume", "30",
                       "--seed", "3", "--out", str(out)])
        assert rc == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["ell", "empirical", "exact", "fredholm", "abs_diff"]
        assert len(rows) == 6
        for r in rows[1:]:
            assert 0.0 <= float(r[1]) <= 1.0
            assert float(r[4]) < 1e-3


class TestConfigFile:
    def test_config_loading(self, tmp_path, capsys):
        conf = tmp_path / "conf.json"
        conf.write_text(json.dumps({"model": {"a": 0.5, "q": 0.3, "n": 1}}))
        rc = cli_main(["--config", str(conf), "discrete-fredholm",
                       "--a", "0.5", "--q", "0.3", "--n", "1", "--ell", "0"])
        assert rc == 0


class TestSubprocessEntry:
    def test_module_invocation(self):
        res = run_cli(["critical-point", "--a", "0.25"])
        assert res.returncode == 0
        assert "c2_action" in res.stdout
