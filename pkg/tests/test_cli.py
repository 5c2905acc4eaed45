import json
import re

import numpy as np
import pytest

from conftest import GOLDEN_SLICE_1, GOLDEN_SLICE_2
from npsa.cli import main
from npsa.io_ingest import read_pgm, write_matrix_csv, write_pgm
from npsa.synthetic import bis_sources, minmax_stretch, mixed_cube


def write_golden_csv(path):
    stacked = np.vstack([GOLDEN_SLICE_1, GOLDEN_SLICE_2])
    write_matrix_csv(path, stacked)
    return str(path)


def write_cube_files(tmp_path, cube):
    data_path = tmp_path / "cube.raw"
    header_path = tmp_path / "cube.raw.hdr"
    cube.data.astype("<f4").tofile(data_path)
    header_path.write_text(
        f"samples = {cube.samples}\nlines = {cube.lines}\nbands = {cube.bands}\n"
        "interleave = bsq\ndata type = 4\nbyte order = 0\n"
    )
    return str(data_path)


class TestEigenCommand:
    def test_golden_angles_with_oracle(self, tmp_path, capsys):
        csv = write_golden_csv(tmp_path / "t.csv")
        code = main([
            "eigen", csv, "--strategy", "both", "--oracle", "--p", "2",
            "--epsilon", "1e-12", "--max-iters", "500", "--restarts", "8",
            "--seed", "11",
        ])
        out = capsys.readouterr().out
        assert code == 0
        angles = {
            (m.group(1), int(m.group(2))): float(m.group(3))
            for m in re.finditer(
                r"(psa|npsa) component (\d+): ([0-9.]+) deg from oracle pair (\d+)",
                out,
            )
        }
        assert angles[("psa", 2)] == pytest.approx(6.1430, abs=0.05)
        assert angles[("npsa", 2)] == pytest.approx(2.4874, abs=0.05)

    def test_single_component_identical_between_strategies(self, tmp_path, capsys):
        csv = write_golden_csv(tmp_path / "t.csv")
        outputs = {}
        for strategy in ("psa", "npsa"):
            code = main([
                "eigen", csv, "--strategy", strategy, "--p", "1", "--seed", "4",
                "--epsilon", "1e-10", "--max-iters", "200",
            ])
            assert code == 0
            text = capsys.readouterr().out
            outputs[strategy] = text.split(":", 1)[1]
        assert outputs["psa"] == outputs["npsa"]

    def test_zero_tensor_reports_zero_contraction(self, tmp_path, capsys):
        csv = tmp_path / "zero.csv"
        write_matrix_csv(csv, np.zeros((4, 2)))
        code = main(["eigen", str(csv)])
        err = capsys.readouterr().err
        assert code == 2
        assert "ZeroContraction" in err

    def test_non_supersymmetric_warns_and_symmetrize_proceeds(self, tmp_path, capsys):
        csv = tmp_path / "asym.csv"
        write_matrix_csv(csv, np.arange(8.0).reshape(4, 2) + 1.0)
        code = main(["eigen", str(csv), "--symmetrize", "--seed", "1"])
        captured = capsys.readouterr()
        assert code == 0
        assert "not supersymmetric" in captured.err

    def test_bad_shape_is_validation_error(self, tmp_path, capsys):
        csv = tmp_path / "bad.csv"
        write_matrix_csv(csv, np.zeros((3, 2)))
        assert main(["eigen", str(csv)]) == 1


class TestExtractCommand:
    def test_synthetic_cube_extraction(self, tmp_path, capsys):
        cube, sources, _ = mixed_cube(size=32, source_seed=3, mix_seed=1)
        data_path = write_cube_files(tmp_path, cube)
        out_dir = tmp_path / "out"
        code = main([
            "extract", data_path, "--p", "3", "--strategy", "npsa",
            "--out", str(out_dir), "--seed", "0", "--restarts", "8",
            "--epsilon", "1e-10", "--max-iters", "300",
        ])
        assert code == 0
        report = json.loads((out_dir / "report.json").read_text())
        extracted = sorted(report["metrics"]["skewness"], reverse=True)
        standardized = [
            (s.ravel() - s.mean()) / s.std() for s in sources
        ]
        expected = sorted(
            (abs(float(np.mean(z ** 3))) for z in standardized), reverse=True
        )
        for got, want in zip(extracted, expected):
            assert got == pytest.approx(want, rel=0.02)
        for idx in (1, 2, 3):
            img = read_pgm(out_dir / f"component_{idx}.pgm")
            assert (img.height, img.width) == (32, 32)

    def test_paired_strategies_skewness_dominance(self, tmp_path, capsys):
        cube, _, _ = mixed_cube(size=32, source_seed=3, mix_seed=1)
        data_path = write_cube_files(tmp_path, cube)
        skew = {}
        for strategy in ("psa", "npsa"):
            out_dir = tmp_path / strategy
            code = main([
                "extract", data_path, "--p", "3", "--strategy", strategy,
                "--out", str(out_dir), "--seed", "2", "--restarts", "8",
                "--epsilon", "1e-10", "--max-iters", "300",
            ])
            assert code == 0
            report = json.loads((out_dir / "report.json").read_text())
            skew[strategy] = report["metrics"]["skewness"]
        capsys.readouterr()
        for npsa_value, psa_value in zip(skew["npsa"], skew["psa"]):
            assert npsa_value >= psa_value - 1e-6

    def test_deterministic_reports(self, tmp_path, capsys):
        cube, _, _ = mixed_cube(size=16, source_seed=3, mix_seed=1)
        data_path = write_cube_files(tmp_path, cube)
        reports = []
        for run_dir in ("r1", "r2"):
            out_dir = tmp_path / run_dir
            assert main(["extract", data_path, "--seed", "3", "--restarts", "4",
                         "--out", str(out_dir)]) == 0
            reports.append((out_dir / "report.json").read_text())
        capsys.readouterr()
        assert reports[0] == reports[1]

    def test_component_count_validation(self, tmp_path, capsys):
        cube, _, _ = mixed_cube(size=16, source_seed=3, mix_seed=1)
        data_path = write_cube_files(tmp_path, cube)
        assert main(["extract", data_path, "--p", "9"]) == 1
        assert main(["extract", data_path, "--p", "0"]) == 1

    def test_missing_header_is_validation_error(self, tmp_path, capsys):
        missing = tmp_path / "none.raw"
        missing.write_bytes(b"")
        assert main(["extract", str(missing)]) == 1


class TestBisCommand:
    @pytest.fixture
    def source_files(self, tmp_path):
        paths = []
        for idx, img in enumerate(bis_sources(size=32, seed=3)):
            path = tmp_path / f"src{idx}.pgm"
            write_pgm(path, minmax_stretch(img), maxval=65535)
            paths.append(str(path))
        return paths

    def test_identity_mix_near_zero_isi(self, tmp_path, source_files, capsys):
        out_dir = tmp_path / "out"
        code = main([
            "bis", *source_files, "--mix", "identity", "--algo", "npsa",
            "--out", str(out_dir), "--seed", "0", "--restarts", "8",
            "--epsilon", "1e-10", "--max-iters", "300",
        ])
        out = capsys.readouterr().out
        assert code == 0
        isi_value = float(re.search(r"ISI\s*=\s*([0-9.eE+-]+)", out).group(1))
        assert isi_value < 0.05

    def test_deterministic_reports(self, tmp_path, source_files, capsys):
        reports = []
        for run_dir in ("a", "b"):
            out_dir = tmp_path / run_dir
            code = main([
                "bis", *source_files, "--seed", "7", "--out", str(out_dir),
                "--restarts", "4",
            ])
            assert code == 0
            reports.append((out_dir / "report.json").read_text())
        capsys.readouterr()
        assert reports[0] == reports[1]

    def test_size_mismatch_rejected(self, tmp_path, source_files, capsys):
        odd = tmp_path / "odd.pgm"
        write_pgm(odd, np.zeros((8, 8)))
        assert main(["bis", source_files[0], str(odd)]) == 1

    def test_needs_two_sources(self, tmp_path, source_files, capsys):
        assert main(["bis", source_files[0]]) == 1


class TestThreadCap:
    def test_env_var_parsing(self, monkeypatch):
        from npsa.cli import _n_threads

        monkeypatch.delenv("NPSA_THREADS", raising=False)
        assert _n_threads() == 1
        monkeypatch.setenv("NPSA_THREADS", "4")
        assert _n_threads() == 4
        monkeypatch.setenv("NPSA_THREADS", "0")
        assert _n_threads() == 1
        monkeypatch.setenv("NPSA_THREADS", "many")
        assert _n_threads() == 1


class TestVerifyCommand:
    def test_all_suites_pass(self, capsys):
        code = main(["verify", "--suite", "kron", "--trials", "10"])
        out = capsys.readouterr().out
        assert code == 0
        assert "10 passed, 0 failed" in out

    def test_equivalence_suite(self, capsys):
        code = main(["verify", "--suite", "equivalence", "--trials", "10"])
        assert code == 0

    def test_lemma1_suite_small(self, capsys):
        code = main(["verify", "--suite", "lemma1", "--trials", "5"])
        assert code == 0
