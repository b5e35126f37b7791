import json
import os

import numpy as np
import pytest

from zladder.cli import (EXIT_CACHE, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK,
                         EXIT_SOFT, main)
from zladder.config import RunConfig


@pytest.fixture()
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ZLADDER_CACHE_ROOT", str(tmp_path / "cache"))
    return tmp_path


LADDER_ARGS = ["--t-lo", "1000", "--t-hi", "1090", "--tol", "1e-9"]


def run_cli(*argv):
    return main(list(argv))


class TestZEval:
    def test_json_line(self, capsys, cache_env):
        assert run_cli("z", "eval", "--t", "100") == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"t", "theta", "z", "z_sq"}
        assert doc["theta"] == pytest.approx(87.97216523178722, abs=1e-9)
        assert doc["z_sq"] == pytest.approx(doc["z"] ** 2)

    def test_oracle_flag(self, capsys, cache_env):
        assert run_cli("z", "eval", "--t", "100", "--oracle") == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["z"] == pytest.approx(2.6926970566644632, abs=1e-12)

    def test_bad_t(self, cache_env):
        assert run_cli("z", "eval", "--t", "-5", "--oracle") == EXIT_CONFIG


class TestSpecfunZeros:
    def test_zeros_and_cache(self, capsys, cache_env):
        assert run_cli("specfun", "zeros", "--nu", "0", "--count", "3") == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["zeros"][0] == pytest.approx(2.404825557695773, abs=1e-9)
        assert doc["residual_bound"] <= 1e-12
        assert os.path.exists(doc["cache"])
        # second invocation loads the cache file
        assert run_cli("specfun", "zeros", "--nu", "0", "--count", "5") == EXIT_OK
        doc2 = json.loads(capsys.readouterr().out)
        assert doc2["zeros"][:3] == doc["zeros"]


class TestLadderVerbs:
    def test_build_query_invert(self, capsys, cache_env):
        assert run_cli("ladder", "build", *LADDER_ARGS) == EXIT_OK
        built = json.loads(capsys.readouterr().out)
        assert os.path.exists(built["cache"])
        assert built["checkpoints"] > 1800

        assert run_cli("ladder", "query", *LADDER_ARGS, "--t", "1024.77") == EXIT_OK
        q = json.loads(capsys.readouterr().out)
        assert q["phi1"] + q["t_minus_phi1"] == pytest.approx(1024.77)

        assert run_cli("ladder", "invert", *LADDER_ARGS, "--y", str(q["phi1"])) == EXIT_OK
        inv = json.loads(capsys.readouterr().out)
        assert inv["t"] == pytest.approx(1024.77, abs=1e-9)

    def test_retardation_csv(self, capsys, cache_env):
        assert run_cli("ladder", "retardation", *LADDER_ARGS, "--from", "1010",
                       "--to", "1060", "--step", "25") == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,lag,expected,ratio"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert float(first[3]) == pytest.approx(1.0, abs=1e-12)

    def test_cache_corruption_exit(self, capsys, cache_env):
        assert run_cli("ladder", "build", *LADDER_ARGS) == EXIT_OK
        built = json.loads(capsys.readouterr().out)
        with open(built["cache"], "w") as fh:
            fh.write("{broken")
        assert run_cli("ladder", "query", *LADDER_ARGS, "--t", "1010") == EXIT_CACHE

    def test_unreachable_tolerance_exit(self, cache_env):
        assert run_cli("ladder", "build", "--t-lo", "1000", "--t-hi", "1001",
                       "--anchor", "1000.5", "--tol", "1e-300") == EXIT_NUMERIC


class TestVerifyVerbs:
    def test_baseline(self, capsys, cache_env):
        assert run_cli("verify", "baseline", "--nu", "0", "--max-n", "3",
                       "--out", "-") == EXIT_OK
        out = capsys.readouterr().out
        rows = [json.loads(line) for line in out.strip().splitlines()]
        assert len(rows) == 6
        assert all(r["equation_id"] == "E1_2" for r in rows)

    def test_sanity_hard_pass(self, capsys, cache_env):
        assert run_cli("verify", "sanity", *LADDER_ARGS, "--T", "1000",
                       "--max-n", "1", "--out", "-") == EXIT_OK

    def test_theorem2_soft_failure_exit(self, capsys, cache_env, tmp_path):
        out = tmp_path / "reports.jsonl"
        code = run_cli("verify", "theorem2", *LADDER_ARGS, "--T", "1000",
                       "--max-n", "1", "--tol-ratio", "1e-9",
                       "--out", str(out))
        assert code == EXIT_SOFT
        assert out.exists() and out.read_text().strip()  # reports still written

    def test_plan_T_outside_domain(self, capsys, cache_env):
        code = run_cli("verify", "theorem2", *LADDER_ARGS, "--T", "5000",
                       "--max-n", "1", "--out", "-")
        assert code == EXIT_CONFIG
        assert "5000" in capsys.readouterr().err


class TestRun:
    def write_config(self, path, **plan):
        cfg = RunConfig(t_lo=1000.0, t_hi=1090.0, tol=1e-9,
                        T=(1000.0,), nu=(0.0,), n_max=plan.get("n_max", 1),
                        equations=plan.get("equations", ("baseline", "sanity")),
                        path=plan.get("out", "reports.jsonl"))
        cfg.to_ini(path)
        return cfg

    def test_config_roundtrip(self, tmp_path):
        path = tmp_path / "run.ini"
        cfg = self.write_config(path)
        again = RunConfig.from_ini(str(path))
        assert again == cfg
        assert again.config_hash() == cfg.config_hash()

    def test_run_deterministic_reports(self, cache_env, tmp_path):
        ini = tmp_path / "run.ini"
        out1 = tmp_path / "r1.jsonl"
        out2 = tmp_path / "r2.jsonl"
        self.write_config(ini)
        assert run_cli("run", "--config", str(ini), "--out", str(out1)) == EXIT_OK
        assert run_cli("run", "--config", str(ini), "--out", str(out2)) == EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_run_baseline_only_plan(self, cache_env, tmp_path, capsys):
        ini = tmp_path / "base.ini"
        self.write_config(ini, equations=("baseline",))
        code = run_cli("run", "--config", str(ini), "--out", "-")
        assert code == EXIT_OK
        rows = [json.loads(line) for line in capsys.readouterr().out.strip().splitlines()]
        assert rows and all(r["equation_id"] == "E1_2" for r in rows)

    def test_run_exit_codes(self, cache_env, tmp_path):
        ini = tmp_path / "bad.ini"
        self.write_config(ini)
        text = ini.read_text().replace("T = 1000.0", "T = 80000.0")
        ini.write_text(text)
        assert run_cli("run", "--config", str(ini),
                       "--out", str(tmp_path / "x.jsonl")) == EXIT_CONFIG

    def test_config_parse_error(self, cache_env, tmp_path):
        ini = tmp_path / "broken.ini"
        ini.write_text("[plan\nT = oops")
        assert run_cli("run", "--config", str(ini)) == EXIT_CONFIG

    def test_unsorted_T_rejected(self, tmp_path):
        from zladder import DomainError
        with pytest.raises(DomainError):
            RunConfig(T=(2000.0, 1000.0))


class TestPlotData:
    def test_ladder_columns(self, capsys, cache_env):
        assert run_cli("plot-data", "--what", "ladder", *LADDER_ARGS,
                       "--from", "1005", "--to", "1006", "--step", "0.5") == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,phi1,t_minus_phi1"
        assert len(lines) == 4

    def test_envelope_row_count(self, capsys, cache_env):
        assert run_cli("plot-data", "--what", "envelope", *LADDER_ARGS,
                       "--T", "950", "--nu", "0", "--n", "3",
                       "--points", "1000") == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,envelope,abs_z"
        assert len(lines) == 1001

    def test_z_trace_sign_changes_match_oracle(self, capsys, cache_env):
        assert run_cli("plot-data", "--what", "z_trace",
                       "--from", "100", "--to", "110", "--step", "0.02") == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        zs = np.array([float(line.split(",")[1]) for line in lines[1:]])
        changes = int(np.sum(np.sign(zs[:-1]) * np.sign(zs[1:]) < 0))

        from zladder import ZEvaluator
        ev = ZEvaluator()
        ts = np.linspace(100.0, 110.0, 4001)
        zo = ev.z_oracle(ts)
        oracle_changes = int(np.sum(np.sign(zo[:-1]) * np.sign(zo[1:]) < 0))
        assert changes == oracle_changes


class TestReportSummary:
    def test_summarize(self, capsys, cache_env, tmp_path):
        out = tmp_path / "r.jsonl"
        assert run_cli("verify", "sanity", *LADDER_ARGS, "--T", "1000",
                       "--max-n", "1", "--out", str(out)) == EXIT_OK
        capsys.readouterr()
        assert run_cli("report", str(out)) == EXIT_OK
        text = capsys.readouterr().out
        assert "E2_10" in text and "max|ratio-1|" in text
