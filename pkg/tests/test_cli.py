"""Command-line front end: configs, outputs, provenance, exit codes."""

import json
import math

import pytest

from latticewave import load_slab_binary, mass_from_rest_period, GridSpec, preserves_metric
from latticewave.cli import build_config, main

CAYLEY_M0 = repr(2 * math.pi / math.sqrt(12))
REST5_M0 = repr(mass_from_rest_period(5, GridSpec()))


def read_json(path):
    return json.loads(path.read_text())


class TestExperiments:
    def test_dispersion_scan_finds_the_3_6_mode(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main([
            "dispersion-scan", "--form", "cayley", "--m0", CAYLEY_M0,
            "--n-max", "64", "--m-max", "64", "--tol", "1e-9", "--output", str(out),
        ])
        assert code == 0
        rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
        assert rows[0] == "form,N,M,m0,residual"
        assert any(r.startswith("cayley,3,6,") for r in rows[1:])

    def test_lorentz_enumerate_word_length_one(self, tmp_path):
        out = tmp_path / "ball.json"
        assert main(["lorentz-enumerate", "--max-word-len", "1", "--output", str(out)]) == 0
        data = read_json(out)
        matrices = data["result"]["matrices"]
        assert len(matrices) == 5
        for flat in matrices:
            entries = [flat[4 * i : 4 * i + 4] for i in range(4)]
            assert preserves_metric(entries)

    def test_lorentz_factorize_round_trip(self, tmp_path):
        out = tmp_path / "word.json"
        matrix = "2,1,1,1,-1,0,-1,-1,-1,-1,0,-1,-1,-1,-1,0"
        assert main(["lorentz-factorize", "--matrix", matrix, "--output", str(out)]) == 0
        result = read_json(out)["result"]
        assert result["round_trip_exact"] is True
        assert result["word"] == ["S4"]

    def test_kg_evolve_verify_reports_tiny_deviation(self, tmp_path):
        out = tmp_path / "slab.csv"
        code = main([
            "kg-evolve", "--form", "cayley", "--wave-n", "5", "--wave-m", "inf",
            "--m0", REST5_M0, "--steps", "16", "--nx", "12", "--verify",
            "--output", str(out),
        ])
        assert code == 0
        header = [line for line in out.read_text().splitlines() if line.startswith("#")]
        deviation_lines = [line for line in header if "max-deviation-from-closed-form" in line]
        assert len(deviation_lines) == 1
        assert float(deviation_lines[0].split(":")[1]) <= 1e-10

    def test_kg_evolve_binary_round_trips(self, tmp_path):
        out = tmp_path / "slab.bin"
        code = main([
            "kg-evolve", "--form", "cayley", "--wave-n", "5", "--wave-m", "inf",
            "--m0", REST5_M0, "--steps", "4", "--nx", "8",
            "--format", "binary", "--output", str(out),
        ])
        assert code == 0
        slab = load_slab_binary(out)
        assert slab.psi.shape == (6, 8)
        assert out.read_bytes()[:4] == b"KGL1"

    def test_wave_sample_matches_direct_evaluation(self, tmp_path):
        from latticewave import WaveForm, WaveSpec, eval_wave

        out = tmp_path / "wave.csv"
        assert main([
            "wave-sample", "--form", "exponential", "--wave-n", "4", "--wave-m", "8",
            "--nt", "4", "--nx", "4", "--output", str(out),
        ]) == 0
        spec = WaveSpec(form=WaveForm.EXPONENTIAL, N=4, M=8)
        rows = [line.split(",") for line in out.read_text().splitlines() if not line.startswith("#")]
        assert rows[0] == ["n", "j", "re", "im"]
        for n_str, j_str, re_str, im_str in rows[1:]:
            value = eval_wave(spec, int(n_str), int(j_str))
            assert complex(float(re_str), float(im_str)) == pytest.approx(value, abs=1e-15)

    def test_quantization_check_rest_step(self, tmp_path):
        out = tmp_path / "q.json"
        assert main([
            "quantization-check", "--m0", repr(2 * math.pi), "--dn", "1",
            "--dj", "0", "0", "0", "--output", str(out),
        ]) == 0
        result = read_json(out)["result"]
        assert result["N_real"] == 1.0
        assert result["N"] == 1
        assert result["M_real"] == "inf"

    def test_kinematics_boost_to_rest(self, tmp_path):
        out = tmp_path / "boost.json"
        assert main([
            "kinematics-boost", "--m0", "1", "--p", "0.75", "0", "0",
            "--v", "0.6", "0", "0", "--output", str(out),
        ]) == 0
        result = read_json(out)["result"]
        assert result["boosted"]["E"] == pytest.approx(1.0, abs=1e-14)
        assert result["checks"]["wave_particle_equivalence_residual"] <= 1e-12

    def test_beat_measure(self, tmp_path):
        out = tmp_path / "beat.json"
        assert main([
            "beat-measure", "--t1", "4", "--t2", "6", "--lam1", "3", "--lam2", "5",
            "--nt", "128", "--nx", "512", "--output", str(out),
        ]) == 0
        result = read_json(out)["result"]
        assert result["v_group"] == pytest.approx(0.625, rel=1e-12)
        assert result["relative_error"] <= 0.02


class TestRunConfigs:
    def config(self, tmp_path, **overrides):
        cfg = {
            "experiment": "dispersion-scan",
            "grid": {"tau": 1.0, "eps": 1.0, "c": 1.0, "hbar": 1.0},
            "params": {"form": "cayley", "m0": 2 * math.pi / math.sqrt(12),
                       "n_max": 16, "m_max": 16, "tol": 1e-9},
            "output_path": str(tmp_path / "out.csv"),
            "format": "csv",
        }
        cfg.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_run_from_config_file(self, tmp_path):
        assert main(["run", "--config", str(self.config(tmp_path))]) == 0
        body = (tmp_path / "out.csv").read_text()
        assert "cayley,3,6," in body

    def test_byte_identical_reruns(self, tmp_path):
        path = self.config(tmp_path)
        assert main(["run", "--config", str(path)]) == 0
        first = (tmp_path / "out.csv").read_bytes()
        assert main(["run", "--config", str(path)]) == 0
        assert (tmp_path / "out.csv").read_bytes() == first

    def test_unknown_top_level_key_rejected(self, tmp_path):
        assert main(["run", "--config", str(self.config(tmp_path, extra_key=1))]) == 2

    def test_unknown_param_rejected(self, tmp_path):
        path = self.config(tmp_path)
        cfg = json.loads(path.read_text())
        cfg["params"]["mystery"] = 3
        path.write_text(json.dumps(cfg))
        assert main(["run", "--config", str(path)]) == 2

    def test_numeric_validation_happens_before_execution(self, tmp_path):
        path = self.config(tmp_path)
        cfg = json.loads(path.read_text())
        cfg["params"]["m0"] = "not-a-number"
        path.write_text(json.dumps(cfg))
        assert main(["run", "--config", str(path)]) == 2

    def test_domain_error_exits_3(self, tmp_path):
        # spacelike step: dj too large for dn
        code = main([
            "quantization-check", "--m0", "1.0", "--dn", "1", "--dj", "3", "0", "0",
            "--output", str(tmp_path / "q.json"),
        ])
        assert code == 3

    def test_config_hash_ignores_output_path(self, tmp_path):
        a = build_config("dispersion-scan", {"form": "cayley", "m0": 1.0},
                         output_path="a.csv")
        b = build_config("dispersion-scan", {"form": "cayley", "m0": 1.0},
                         output_path="b.csv")
        assert a.config_hash() == b.config_hash()

    def test_binary_format_only_where_supported(self, tmp_path):
        with pytest.raises(Exception):
            build_config("dispersion-scan", {"form": "cayley", "m0": 1.0}, fmt="binary")

    def test_output_dir_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LATTICEWAVE_OUTPUT_DIR", str(tmp_path / "outputs"))
        assert main(["lorentz-enumerate", "--max-word-len", "0", "--output", "ball.json"]) == 0
        assert (tmp_path / "outputs" / "ball.json").exists()


class TestHelpDocumentsColumns:
    def test_dispersion_scan_columns_in_help(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["dispersion-scan", "--help"])
        assert excinfo.value.code == 0
        assert "form,N,M,m0,residual" in capsys.readouterr().out

    def test_wave_sample_columns_in_help(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["wave-sample", "--help"])
        assert excinfo.value.code == 0
        assert "n,j,re,im" in capsys.readouterr().out


class TestVerifyAll:
    def test_default_run_passes(self, tmp_path, capsys):
        out = tmp_path / "report.txt"
        code = main(["verify-all", "--seed", "0", "--quiet", "--output", str(out)])
        assert code == 0
        stdout = capsys.readouterr().out
        assert "10/10 criteria passed" in stdout
        assert out.read_text().count("[PASS]") == 10

    def test_as_printed_s4_reports_documented_failure(self, capsys):
        code = main(["verify-all", "--seed", "0", "--as-printed", "s4"])
        assert code == 1
        stdout = capsys.readouterr().out
        assert "[FAIL] criterion 8" in stdout
        assert "Gram defect = 2" in stdout

    def test_as_printed_tan_dispersion_reports_documented_failure(self, capsys):
        code = main(["verify-all", "--seed", "0", "--as-printed", "tan-dispersion"])
        assert code == 1
        assert "[FAIL] criterion 6" in capsys.readouterr().out
