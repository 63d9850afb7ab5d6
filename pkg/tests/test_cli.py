import numpy as np
import pytest

from dimerchain.cli import main


class TestGroundStateCommand:
    def test_prints_energy_and_werner(self, capsys):
        assert main(["ground-state", "--n", "4", "--delta", "0.7"]) == 0
        out = capsys.readouterr().out
        assert "E0 = " in out
        assert "werner p" in out

    def test_requires_n(self, capsys):
        with pytest.raises(SystemExit):
            main(["ground-state"])


class TestProtocolCommands:
    def test_classical_writes_fig1a(self, tmp_path, capsys):
        rc = main(["classical", "--n", "4", "--delta", "0.7", "--dt", "0.1",
                   "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "fig1a.csv").exists()
        assert "C(t*)" in capsys.readouterr().out

    def test_quantum_series(self, tmp_path, capsys):
        rc = main(["quantum", "--n", "4", "--delta", "0.7", "--dt", "0.1",
                   "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "quantum_series.csv").exists()
        assert "F_av^M" in capsys.readouterr().out

    def test_quantum_singlet_init(self, tmp_path, capsys):
        rc = main(["quantum", "--n", "4", "--delta", "0.7", "--dt", "0.1",
                   "--init", "singlets", "--out", str(tmp_path)])
        assert rc == 0

    def test_attach_both_schemes(self, tmp_path, capsys):
        rc = main(["attach", "--n", "4", "--dt", "0.1", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "FM:" in out and "AFM:" in out
        assert (tmp_path / "attach_fm_series.csv").exists()
        assert (tmp_path / "attach_afm_series.csv").exists()


class TestTable1Command:
    def test_runs_and_prints_rows(self, tmp_path, capsys):
        rc = main(["table1", "--n", "6", "--dt", "0.1", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "table1.csv" in out
        assert (tmp_path / "table1.csv").exists()


class TestSweepCommand:
    def test_from_config(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("protocol = quantum\nn = 4, 6\ndelta = 0.7\ndt = 0.1\n")
        rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "out")])
        assert rc == 0
        assert (tmp_path / "out" / "fig2a.csv").exists()

    def test_from_flags(self, tmp_path, capsys):
        rc = main(["sweep", "--protocol", "quantum", "--n", "4",
                   "--delta", "0.5,0.7", "--dt", "0.1", "--out", str(tmp_path / "o2")])
        assert rc == 0
        assert (tmp_path / "o2" / "fig2b.csv").exists()

    def test_needs_config_or_flags(self, capsys):
        assert main(["sweep"]) == 2


class TestFitCommand:
    def test_fit_prints_line(self, tmp_path, capsys):
        p = tmp_path / "d.csv"
        p.write_text("n,favm\n6,0.99\n8,0.98\n10,0.97\n")
        rc = main(["fit", str(p), "--x", "n", "--y", "favm", "--crossing", "0.6667"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "slope = " in out
        assert "crossing" in out
