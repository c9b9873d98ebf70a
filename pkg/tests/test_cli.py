import math

import numpy as np
import pytest

from ghill.cli import main, parse_k_grid, parse_weights, read_data_file
from ghill.errors import ConfigError, DataError


def run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestParsers:
    def test_weights(self):
        ws = parse_weights("pow:1,pow:0.75")
        assert [w.name for w in ws] == ["pow:1", "pow:0.75"]
        with pytest.raises(ConfigError):
            parse_weights("exp:1")
        with pytest.raises(ConfigError):
            parse_weights("")

    def test_weight_file(self, tmp_path):
        p = tmp_path / "w.txt"
        p.write_text("2.0\n3.0\n")
        (w,) = parse_weights(f"file:{p}")
        assert w(1) == 2.0 and w(5) == 3.0  # held beyond the table

    def test_k_grid(self):
        assert parse_k_grid("10:50:20") == [10, 30, 50]
        with pytest.raises(ConfigError):
            parse_k_grid("10:50")

    def test_data_file_parse_error_has_line_number(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1.0\n# comment\nnot-a-number\n")
        with pytest.raises(DataError, match=":3:"):
            read_data_file(str(p))


class TestEstimate:
    def test_hand_checked_t_n(self, tmp_path, capsys):
        p = tmp_path / "d.txt"
        p.write_text("1\n2\n3\n4\n")
        rc, out, _ = run(capsys, ["estimate", "--input", str(p), "--k", "2",
                                  "--weights", "pow:1"])
        assert rc == 0
        # T_n = 1*ln(4/3) + 2*ln(3/2) = ln 3
        row = [ln for ln in out.splitlines() if ln.strip().startswith("2 ")][0]
        assert float(row.split()[2]) == pytest.approx(math.log(3.0), rel=1e-6)

    def test_k_grid_sweep(self, tmp_path, capsys):
        p = tmp_path / "d.txt"
        gen = np.random.Generator(np.random.PCG64(1))
        p.write_text("\n".join(str(v) for v in gen.pareto(2.0, size=500) + 1.0))
        rc, out, _ = run(capsys, ["estimate", "--input", str(p),
                                  "--k-grid", "50:150:50", "--weights", "pow:1,pow:0.75"])
        assert rc == 0
        assert len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 1 + 3 * 2

    def test_empty_file_exit_code(self, tmp_path, capsys):
        p = tmp_path / "empty.txt"
        p.write_text("")
        rc, _, err = run(capsys, ["estimate", "--input", str(p), "--k", "2"])
        assert rc == 3

    def test_nonpositive_top_values_exit_code(self, tmp_path, capsys):
        p = tmp_path / "d.txt"
        p.write_text("-1\n-2\n-3\n")
        rc, _, _ = run(capsys, ["estimate", "--input", str(p), "--k", "1"])
        assert rc == 3

    def test_pareto_file_hill(self, tmp_path, capsys):
        data = tmp_path / "pareto.txt"
        rc, _, _ = run(capsys, ["simulate", "--model", "frechet", "--gamma", "0.5",
                                "--n", "100000", "--seed", "77", "--out", str(data)])
        assert rc == 0
        rc, out, _ = run(capsys, ["estimate", "--input", str(data), "--k", "1000"])
        assert rc == 0
        hill_col = [ln.split()[3] for ln in out.splitlines()
                    if not ln.startswith("#") and not ln.lstrip().startswith("k ")]
        assert float(hill_col[0]) == pytest.approx(0.5, abs=0.05)


class TestSimulate:
    def test_reproducible_and_above_one(self, tmp_path, capsys):
        args = ["simulate", "--model", "frechet", "--gamma", "1", "--n", "3",
                "--seed", "5"]
        rc1, out1, _ = run(capsys, args)
        rc2, out2, _ = run(capsys, args)
        assert rc1 == rc2 == 0 and out1 == out2
        vals = [float(x) for x in out1.splitlines()[1:]]
        assert len(vals) == 3 and all(v > 1.0 for v in vals)

    def test_weibull_below_endpoint(self, capsys):
        rc, out, _ = run(capsys, ["simulate", "--model",
                                  "model=weibull gamma=0.5 y0=0",
                                  "--n", "50", "--seed", "2"])
        assert rc == 0
        vals = [float(x) for x in out.splitlines()[1:]]
        assert all(v < 1.0 for v in vals)  # exp(y0) = 1

    def test_bad_gamma_is_config_error(self, capsys):
        rc, _, err = run(capsys, ["simulate", "--model", "frechet", "--gamma",
                                  "-1", "--n", "3"])
        assert rc == 2


class TestValidate:
    def test_normality_acceptance_run_passes(self, capsys):
        # the KS gate is calibrated for 2000 replicates; this is exactly the
        # asymptotic-normality acceptance run driven through the CLI
        rc, out, _ = run(capsys, ["validate", "--mode", "normality",
                                  "--model", "frechet", "--gamma", "1",
                                  "--n", "10000", "--k", "300", "--reps", "2000",
                                  "--seed", "20240501", "--weights", "pow:1"])
        assert rc == 0
        assert "gate.ks_vs_normal.pass=true" in out

    def test_unknown_mode_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["validate", "--mode", "bogus"])
        assert exc.value.code == 2

    def test_reps_zero_is_config_error(self, capsys):
        rc, _, _ = run(capsys, ["validate", "--mode", "normality",
                                "--model", "frechet", "--gamma", "1",
                                "--n", "100", "--k", "10", "--reps", "0"])
        assert rc == 2

    def test_malmquist_mode(self, capsys):
        rc, out, _ = run(capsys, ["validate", "--mode", "malmquist",
                                  "--n", "10000", "--k", "100", "--reps", "100",
                                  "--seed", "20240501"])
        assert rc == 0
        assert "gate.malmquist_ks.pass=true" in out

    def test_rho_mode_detects_slow_pair(self, capsys):
        # (0.9, 0.6) at k = 1e5 sits 0.072 away from its limit: gate failure
        rc, out, _ = run(capsys, ["validate", "--mode", "rho",
                                  "--weights", "pow:0.9,pow:0.6",
                                  "--k-grid", "100:100000:99900"])
        assert rc == 5
        assert "gate.rho_abs.pass=false" in out

    def test_rho_mode_fast_pair_passes(self, capsys):
        rc, out, _ = run(capsys, ["validate", "--mode", "rho",
                                  "--weights", "pow:1,pow:0.75",
                                  "--k-grid", "100000:100000:1"])
        assert rc == 0

    def test_covariance_mode(self, capsys):
        rc, out, _ = run(capsys, ["validate", "--mode", "covariance",
                                  "--model", "frechet", "--gamma", "1",
                                  "--weights", "pow:0.8,pow:0.8",
                                  "--n", "2000", "--k", "100", "--reps", "100",
                                  "--seed", "1"])
        assert rc == 0

    def test_limit_law_mode_formula_variants(self, capsys):
        # full series-law acceptance run through the CLI; the derived MGF
        # formula passes its cross-check, the printed transcription cannot
        base = ["validate", "--mode", "limit-law", "--model", "frechet",
                "--gamma", "1", "--n", "10000", "--k", "300", "--reps", "2000",
                "--seed", "20240501", "--weights", "pow:0.25"]
        rc, out, _ = run(capsys, base)
        assert rc == 0
        assert "gate.ks_vs_limit_law.pass=true" in out
        assert "gate.mgf_rel.pass=true" in out
        rc, out, err = run(capsys, base + ["--formula", "printed"])
        assert rc == 5
        assert "gate.mgf_rel.pass=false" in out

    def test_plugin_scale_reports_without_gates(self, capsys):
        rc, out, _ = run(capsys, ["validate", "--mode", "normality",
                                  "--model", "frechet", "--gamma", "1",
                                  "--n", "2000", "--k", "100", "--reps", "100",
                                  "--seed", "3", "--scale", "plugin"])
        assert rc == 0
        assert "gate." not in out
        assert "config.scale_mode=plugin" in out


class TestLimitSample:
    def test_header_carries_certificate(self, tmp_path, capsys):
        out_path = tmp_path / "draws.txt"
        rc, _, _ = run(capsys, ["limit-sample", "--weights", "pow:0",
                                "--n", "1000", "--tol", "1e-3",
                                "--seed", "4", "--out", str(out_path)])
        assert rc == 0
        text = out_path.read_text()
        assert "# J=" in text and "tail_var_bound=" in text
        draws = [float(x) for x in text.splitlines() if not x.startswith("#")]
        assert len(draws) == 1000

    def test_variance_near_one(self, capsys):
        rc, out, _ = run(capsys, ["limit-sample", "--weights", "pow:0",
                                  "--n", "20000", "--tol", "1e-4", "--seed", "6"])
        assert rc == 0
        draws = np.array([float(x) for x in out.splitlines() if not x.startswith("#")])
        assert abs(draws.var() - 1.0) < 0.05

    def test_divergent_weight_names_series(self, capsys):
        rc, _, err = run(capsys, ["limit-sample", "--weights", "pow:1", "--n", "10"])
        assert rc == 4
        assert "A(2" in err
