import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from dimerchain.runner import (
    SweepConfig,
    classical_series_run,
    delta_sweep,
    fit_csv,
    load_config,
    run_sweep,
    table1_run,
)


class TestSweepConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SweepConfig(protocol="nope", n_list=(4,), delta_list=(0.5,))
        with pytest.raises(ValueError):
            SweepConfig(protocol="quantum", n_list=(), delta_list=(0.5,))
        with pytest.raises(ValueError):
            SweepConfig(protocol="quantum", n_list=(4,), delta_list=(0.5,), dt=0.0)
        with pytest.raises(ValueError):
            SweepConfig(protocol="quantum", n_list=(4,), delta_list=(0.5,), t_max=-1.0)
        with pytest.raises(ValueError):
            SweepConfig(protocol="attach-FM", n_list=(4,), delta_list=(0.5,), init="singlets")

    def test_empty_grid_rejected_before_compute(self):
        # t_max = 0 never reaches compute: config validation catches it
        with pytest.raises(ValueError):
            SweepConfig(protocol="quantum", n_list=(4,), delta_list=(0.5,), t_max=0.0)


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        cfg_file = tmp_path / "sweep.cfg"
        cfg_file.write_text(
            "# a comment\n"
            "protocol = quantum\n"
            "n = 4, 6\n"
            "delta = 0.7\n"
            "dt = 0.1\n"
            "init = gs\n"
            "figure = fig2a\n"
            "jobs = 2\n"
        )
        cfg = load_config(cfg_file)
        assert cfg.protocol == "quantum"
        assert cfg.n_list == (4, 6)
        assert cfg.delta_list == (0.7,)
        assert cfg.dt == 0.1
        assert cfg.figure == "fig2a"
        assert cfg.jobs == 2

    def test_unknown_key_rejected(self, tmp_path):
        cfg_file = tmp_path / "bad.cfg"
        cfg_file.write_text("protocol = quantum\nn = 4\ndelta = 0.7\nwibble = 3\n")
        with pytest.raises(ValueError, match="unknown key"):
            load_config(cfg_file)

    def test_duplicate_key_rejected(self, tmp_path):
        cfg_file = tmp_path / "dup.cfg"
        cfg_file.write_text("protocol = quantum\nn = 4\nn = 6\ndelta = 0.7\n")
        with pytest.raises(ValueError, match="duplicate"):
            load_config(cfg_file)

    def test_missing_required_rejected(self, tmp_path):
        cfg_file = tmp_path / "missing.cfg"
        cfg_file.write_text("protocol = quantum\n")
        with pytest.raises(ValueError, match="needs at least"):
            load_config(cfg_file)

    def test_malformed_line_rejected(self, tmp_path):
        cfg_file = tmp_path / "bad.cfg"
        cfg_file.write_text("protocol quantum\n")
        with pytest.raises(ValueError, match="expected"):
            load_config(cfg_file)


class TestSweep:
    def test_quantum_sweep_outputs(self, tmp_path):
        cfg = SweepConfig(
            protocol="quantum", n_list=(4, 6), delta_list=(0.7,), dt=0.1,
            out_dir=str(tmp_path / "run"),
        )
        manifest = run_sweep(cfg)
        out = tmp_path / "run"
        assert (out / "fig2a.csv").exists()
        assert (out / "fig2a.manifest.json").exists()
        assert len(manifest.cells) == 2
        assert all(c["error"] is None for c in manifest.cells)
        # manifest digests match the files on disk
        for name, digest in manifest.outputs.items():
            assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest
        # fit columns present and shared across rows
        body = (out / "fig2a.csv").read_text().splitlines()
        assert body[0].split(",")[6] == "fit_slope"
        assert body[1].split(",")[6] == body[2].split(",")[6]

    def test_determinism_and_resume(self, tmp_path):
        kwargs = dict(protocol="quantum", n_list=(4,), delta_list=(0.5, 0.7), dt=0.1)
        cfg1 = SweepConfig(out_dir=str(tmp_path / "a"), **kwargs)
        cfg2 = SweepConfig(out_dir=str(tmp_path / "b"), **kwargs)
        m1 = run_sweep(cfg1)
        m2 = run_sweep(cfg2)
        body1 = (tmp_path / "a" / "fig2b.csv").read_bytes()
        body2 = (tmp_path / "b" / "fig2b.csv").read_bytes()
        assert body1 == body2
        # resume: rerunning reuses every checkpoint and reproduces the file
        m3 = run_sweep(cfg1)
        assert all(c["cached"] for c in m3.cells)
        assert (tmp_path / "a" / "fig2b.csv").read_bytes() == body1

    def test_interrupted_resume_equals_uninterrupted(self, tmp_path):
        kwargs = dict(protocol="quantum", n_list=(4, 6), delta_list=(0.7,), dt=0.1)
        full = SweepConfig(out_dir=str(tmp_path / "full"), **kwargs)
        run_sweep(full)
        # simulate an interruption: only the first cell's checkpoint survives
        part = SweepConfig(out_dir=str(tmp_path / "part"), **kwargs)
        first_only = SweepConfig(
            protocol="quantum", n_list=(4,), delta_list=(0.7,), dt=0.1,
            out_dir=str(tmp_path / "part"),
        )
        run_sweep(first_only)
        manifest = run_sweep(part)
        cached = {c["cell"]: c["cached"] for c in manifest.cells}
        assert cached["quantum_n4_d0.7_gs"] is True
        assert cached["quantum_n6_d0.7_gs"] is False
        assert (tmp_path / "part" / "fig2a.csv").read_bytes() == (
            tmp_path / "full" / "fig2a.csv"
        ).read_bytes()

    def test_stale_checkpoint_invalidated(self, tmp_path):
        out = tmp_path / "run"
        cfg = SweepConfig(protocol="quantum", n_list=(4,), delta_list=(0.7,),
                          dt=0.1, out_dir=str(out))
        run_sweep(cfg)
        ck = next((out / "checkpoints").glob("*.json"))
        payload = json.loads(ck.read_text())
        payload["digest"] = "0" * 64
        ck.write_text(json.dumps(payload))
        manifest = run_sweep(cfg)
        assert manifest.cells[0]["cached"] is False

    def test_parallel_equals_serial(self, tmp_path):
        kwargs = dict(protocol="quantum", n_list=(4, 6), delta_list=(0.7,), dt=0.1)
        serial = SweepConfig(out_dir=str(tmp_path / "s"), jobs=1, **kwargs)
        parallel = SweepConfig(out_dir=str(tmp_path / "p"), jobs=2, **kwargs)
        run_sweep(serial)
        run_sweep(parallel)
        assert (tmp_path / "s" / "fig2a.csv").read_bytes() == (
            tmp_path / "p" / "fig2a.csv"
        ).read_bytes()

    def test_series_files_traceable(self, tmp_path):
        out = tmp_path / "run"
        cfg = SweepConfig(protocol="classical", n_list=(4,), delta_list=(0.7,),
                          dt=0.1, out_dir=str(out))
        run_sweep(cfg)
        series = (out / "series_classical_n4_d0.7_gs.csv").read_text().splitlines()
        header = series[0].split(",")
        assert header[:5] == ["protocol", "n", "delta", "init", "t"]
        assert "gs_residual" in header
        row = series[1].split(",")
        assert row[0] == "classical" and row[1] == "4"


class TestTable1:
    def test_small_table(self, tmp_path):
        rows = table1_run([6], delta=0.7, dt=0.1, out_dir=str(tmp_path / "t1"))
        assert len(rows) == 1
        r = rows[0]
        assert r["favm"] > r["afm"] > r["fm"]
        table = (tmp_path / "t1" / "table1.csv").read_text().splitlines()
        assert table[0] == "n,delta,fm,fm_t_star,afm,afm_t_star,favm,favm_t_star"
        assert table[1].startswith("6,0.7,")


class TestDeltaSweep:
    def test_window_exhaustion_flagged(self, tmp_path):
        out = delta_sweep(6, (0.5, 0.99), dt=0.1, out_dir=str(tmp_path / "ds"))
        flags = {r["delta"]: r["window_exhausted"] for r in out["table"]}
        assert flags[0.99] is True
        assert 0.99 in out["exhausted_deltas"]
        assert flags[0.5] is False

    def test_rejects_bad_delta(self, tmp_path):
        with pytest.raises(ValueError):
            delta_sweep(6, (0.0, 0.5), out_dir=str(tmp_path / "x"))


class TestFitCsv:
    def test_fit_and_diagnostics(self, tmp_path):
        p = tmp_path / "data.csv"
        p.write_text("n,f\n4,0.9\n6,0.8\n8,0.7\n")
        fit = fit_csv(p, "n", "f")
        assert fit.slope == pytest.approx(-0.05)
        assert fit.intercept == pytest.approx(1.1)

    def test_missing_column_diagnosed(self, tmp_path):
        p = tmp_path / "data.csv"
        p.write_text("n,f\n4,0.9\n")
        with pytest.raises(ValueError, match="need columns"):
            fit_csv(p, "n", "favm")


class TestClassicalSeriesRun:
    def test_fig1a_written(self, tmp_path):
        out = tmp_path / "c"
        result = classical_series_run(4, 0.7, dt=0.1, out_dir=str(out))
        assert (out / "fig1a.csv").exists()
        assert (out / "fig1a.manifest.json").exists()
        assert result["peak"] > 0.0
        header = (out / "fig1a.csv").read_text().splitlines()[0]
        assert header.split(",")[5] == "f_I"
