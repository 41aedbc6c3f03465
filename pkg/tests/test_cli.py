import numpy as np
import pytest

from opofar import AxisSpec, ConfigError, ScanGrid
from opofar.cli import main
from opofar.config import parse_config
from opofar.gridio import read_grid_csv, write_grid_csv


class TestParseConfig:
    def test_empty_gives_reference_defaults(self):
        cfg = parse_config("")
        p = cfg.params
        assert (p.gamma1, p.gamma2, p.delta1, p.delta2) == (1, 1, -0.25, -0.25)
        assert (p.a1, p.a2, p.rho1, p.rho2) == (1, 1, 0, 1)
        assert p.a0 == 0.99 and p.sigma == 1.0
        assert cfg.quadrature.omega_max == 50.0
        assert cfg.threads == 1

    def test_above_threshold_rejected(self):
        with pytest.raises(ConfigError, match="below threshold"):
            parse_config("a0 = 1.2")

    def test_override_single_key(self):
        cfg = parse_config("rho2 = 0.5")
        assert cfg.params.rho2 == 0.5
        assert cfg.params.rho1 == 0.0
        assert cfg.params.a0 == 0.99

    def test_unknown_key_rejected_with_line(self):
        with pytest.raises(ConfigError, match="line 3"):
            parse_config("a0 = 0.5\n# fine\nbogus = 1\n")

    def test_comments_and_blank_lines(self):
        cfg = parse_config("# full line comment\n\na0 = 0.5  # trailing\n")
        assert cfg.params.a0 == 0.5

    def test_malformed_line(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("just words\n")

    def test_bad_value_type(self):
        with pytest.raises(ConfigError, match="cannot parse"):
            parse_config("a0 = fast\n")

    def test_grid_invariants(self):
        with pytest.raises(ConfigError):
            parse_config("kx_count = 1\n")
        with pytest.raises(ConfigError):
            parse_config("psi_min = 2\npsi_max = -2\n")

    def test_gain_forms(self):
        assert parse_config("gain = optimal").gain().kind == "optimal"
        g = parse_config("gain = 0.5+0.25j").gain()
        assert g.kind == "fixed" and g.value == 0.5 + 0.25j
        with pytest.raises(ConfigError):
            parse_config("gain = sometimes")

    def test_bad_scheme(self):
        with pytest.raises(ConfigError, match="scheme"):
            parse_config("scheme = diagonal")


class TestCsvRoundTrip:
    def test_bit_exact_roundtrip(self, tmp_path, rng):
        grid = ScanGrid(AxisSpec("kx", -1.0, 1.0, 7), AxisSpec("ky", -0.5, 0.5, 5),
                        rng.normal(size=(7, 5)) * 10.0 ** rng.integers(-8, 8, size=(7, 5)))
        grid.values[2, 3] = float("nan")
        path = tmp_path / "grid.csv"
        write_grid_csv(grid, path, "value", {"a0": 0.99, "seed": 1})
        back, meta, quantity = read_grid_csv(path)
        assert quantity == "value"
        assert meta["a0"] == "0.99"
        assert np.array_equal(back.values, grid.values, equal_nan=True)
        assert np.array_equal(back.x_axis.points(), grid.x_axis.points())

    def test_missing_metadata_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("kx,ky,value\n0,0,1\n")
        with pytest.raises(ValueError):
            read_grid_csv(path)


class TestCliSubcommands:
    def _cfg(self, tmp_path, text):
        f = tmp_path / "run.cfg"
        f.write_text(text)
        return f

    def test_critical_points_output(self, capsys):
        assert main(["critical-points"]) == 0
        out = capsys.readouterr().out
        assert "k_H = (0.500000, 0.000000)" in out
        assert "k_V = (0.000000, 0.809017)" in out
        assert "omega_H(k_V) = 0.404508" in out

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = self._cfg(tmp_path, "a0 = 1.2\n")
        assert main(["critical-points", "-c", str(cfg)]) == 2
        assert "below threshold" in capsys.readouterr().err

    def test_missing_config_file(self, capsys):
        assert main(["critical-points", "-c", "/nonexistent.cfg"]) == 2

    def test_usage_error(self):
        assert main(["no-such-command"]) == 2

    def test_farfield_small_grid(self, tmp_path, capsys):
        cfg = self._cfg(tmp_path, "kx_count = 9\nky_count = 9\nrel_tol = 1e-6\nabs_tol = 1e-6\n")
        out = tmp_path / "ff.csv"
        assert main(["farfield", "-c", str(cfg), "-o", str(out)]) == 0
        grid, meta, quantity = read_grid_csv(out)
        assert quantity == "intensity"
        assert meta["a0"] == "0.99"
        assert grid.values.shape == (9, 9)
        # symmetric under kx -> -kx
        assert np.allclose(grid.values, grid.values[::-1, :], rtol=1e-6)

    def test_farfield_threads_deterministic(self, tmp_path):
        cfg = self._cfg(tmp_path, "kx_count = 5\nky_count = 5\nrel_tol = 1e-6\nabs_tol = 1e-6\n")
        out1 = tmp_path / "t1.csv"
        out2 = tmp_path / "t2.csv"
        assert main(["farfield", "-c", str(cfg), "-o", str(out1), "--threads", "1"]) == 0
        assert main(["farfield", "-c", str(cfg), "-o", str(out2), "--threads", "2"]) == 0
        assert out1.read_text() == out2.read_text()

    def test_epr_scan_and_cut(self, tmp_path):
        cfg = self._cfg(tmp_path, "scheme = kh\npsi_count = 5\nomega_scan_count = 7\n")
        out = tmp_path / "scan.csv"
        assert main(["epr-scan", "-c", str(cfg), "-o", str(out)]) == 0
        grid, meta, quantity = read_grid_csv(out)
        assert quantity == "v_over_sigma"
        assert meta["scheme"] == "kh"
        assert grid.values.shape == (5, 7)
        cut = tmp_path / "cut.csv"
        assert main(["epr-cut", "-c", str(cfg), "-o", str(cut)]) == 0
        assert (tmp_path / "cut_g1.csv").exists()
        assert (tmp_path / "cut_gopt.csv").exists()

    def test_stokes_map_small(self, tmp_path):
        cfg = self._cfg(tmp_path, "kx_count = 3\nky_count = 3\nrel_tol = 1e-6\nabs_tol = 1e-6\n")
        out = tmp_path / "sm.csv"
        assert main(["stokes-map", "-c", str(cfg), "-o", str(out)]) == 0
        for name in ("s0", "s1", "p2", "g1self", "g23self"):
            assert (tmp_path / f"sm_{name}.csv").exists()
        grid, _, _ = read_grid_csv(tmp_path / "sm_g1self.csv")
        vals = grid.values[np.isfinite(grid.values)]
        assert np.all(vals >= -1e-9)

    def test_nonconvergence_exit_code(self, tmp_path, capsys):
        # impossible tolerance exhausts the panel budget
        cfg = self._cfg(tmp_path, "kx_count = 2\nky_count = 2\n"
                                  "rel_tol = 1e-300\nabs_tol = 1e-300\n")
        out = tmp_path / "ff.csv"
        assert main(["farfield", "-c", str(cfg), "-o", str(out)]) == 3
        assert "convergence" in capsys.readouterr().err

    def test_stokes_corr_small(self, tmp_path):
        cfg = self._cfg(tmp_path, "kx_count = 2\nky_count = 3\nrel_tol = 1e-6\nabs_tol = 1e-6\n")
        out = tmp_path / "sc.csv"
        assert main(["stokes-corr", "-c", str(cfg), "-o", str(out)]) == 0
        grid, _, _ = read_grid_csv(tmp_path / "sc_d1.csv")
        vals = grid.values[np.isfinite(grid.values)]
        # normal-ordered d1 equals minus the two-pixel shot noise
        assert np.allclose(vals, -1.0, atol=1e-7)
