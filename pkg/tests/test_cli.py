import json
import os

import numpy as np
import pytest

import frame_engine as engine
from conftest import FRAMES_DIR, GOLDEN_DIR, frame_path
from frame_model import (
    parse_coefficients,
    parse_frame,
    parse_vector,
    serialize_frame,
    serialize_matrix,
    serialize_vector,
)
from instance_generators import from_classical_frame, from_g_frame, mercedes_benz_vectors
from main import run

GOLDEN = [
    ("parseval_basis", 0),
    ("single_subspace", 2),
    ("two_subspace", 0),
]


def run_json(capsys, *argv):
    code = run(list(argv) + ["--json"])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, payload: bytes) -> str:
    path = tmp_path / name
    path.write_bytes(payload)
    return str(path)


class TestAnalyze:
    @pytest.mark.parametrize("name,expected_code", GOLDEN)
    def test_golden_reports(self, capsys, name, expected_code):
        code, out, _ = run_json(capsys, "analyze", frame_path(f"{name}.json"))
        with open(os.path.join(GOLDEN_DIR, f"{name}_analyze.json")) as f:
            assert out == f.read()
        assert code == expected_code

    def test_flags_before_command(self, capsys):
        code = run(["--json", "analyze", frame_path("two_subspace.json")])
        out = capsys.readouterr().out
        with open(os.path.join(GOLDEN_DIR, "two_subspace_analyze.json")) as f:
            assert out == f.read()
        assert code == 0

    def test_text_mode_prints_same_numbers(self, capsys):
        assert run(["analyze", frame_path("two_subspace.json")]) == 0
        out = capsys.readouterr().out
        assert "0.292893218813" in out
        assert "5.82842712475" in out

    def test_batch_over_directory(self, capsys):
        code, out, _ = run_json(capsys, "analyze", FRAMES_DIR)
        results = json.loads(out)
        assert [os.path.basename(r["path"]) for r in results] == [f"{name}.json" for name, _ in GOLDEN]
        assert [r["exit_code"] for r in results] == [c for _, c in GOLDEN]
        assert results[2]["report"]["results"]["lower_bound"] == 0.292893218813
        assert code == 2

    def test_batch_records_bad_files(self, capsys, tmp_path):
        bad = write(tmp_path, "bad.json", b'{"ambient_dim": 2, "members": [{}]}')
        code, out, _ = run_json(capsys, "analyze", bad, frame_path("parseval_basis.json"))
        results = json.loads(out)
        failed = next(r for r in results if r["path"] == bad)
        assert failed["exit_code"] == 1 and failed["report"] is None
        assert "members[0]" in failed["error"]
        assert code == 1

    def test_parse_error_names_field(self, capsys, tmp_path):
        doc = {"ambient_dim": 2, "members": [{"subspace": [], "operator": [[[1.0, 0.0], [0.0, 0.0]]]}]}
        path = write(tmp_path, "frame.json", json.dumps(doc).encode())
        code, out, err = run_json(capsys, "analyze", path)
        assert code == 1
        assert out == ""
        assert "members[0].weight" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run_json(capsys, "analyze", str(tmp_path / "nope.json"))
        assert code == 1

    def test_usage_error(self, capsys):
        assert run(["analyze"]) == 1

    def test_custom_tolerance_is_reported(self, capsys):
        _, out, _ = run_json(capsys, "analyze", frame_path("parseval_basis.json"), "--tol-rank", "1e-10", "--tol-resid", "1e-6")
        assert json.loads(out)["tolerance"] == {"rank_rel": 1e-10, "residual_abs": 1e-6}

    def test_invalid_tolerance(self, capsys):
        code, _, _ = run_json(capsys, "analyze", frame_path("parseval_basis.json"), "--tol-resid", "2")
        assert code == 1


class TestFrameOutputs:
    def test_dual_of_parseval_input(self, capsys, tmp_path):
        out_path = str(tmp_path / "dual.json")
        code, out, _ = run_json(capsys, "dual", frame_path("parseval_basis.json"), "--out", out_path)
        assert code == 0
        results = json.loads(out)["results"]
        assert results["identity_residual"] <= 1e-8
        assert results["dual_operator_residual"] <= 1e-8
        with open(frame_path("parseval_basis.json"), "rb") as f:
            original = parse_frame(f.read())
        with open(out_path, "rb") as f:
            dual = parse_frame(f.read())
        for a, b in zip(original, dual):
            assert np.allclose(a.projection(), b.projection())
            assert np.allclose(a.restricted_operator(), b.restricted_operator())

    def test_dual_default_output_path(self, capsys, monkeypatch, tmp_path):
        monkeypatch.chdir(tmp_path)
        assert run(["dual", frame_path("two_subspace.json"), "--json"]) == 0
        assert (tmp_path / "output" / "two_subspace_dual.json").exists()

    def test_dual_of_non_frame(self, capsys, tmp_path):
        code, _, _ = run_json(capsys, "dual", frame_path("single_subspace.json"), "--out", str(tmp_path / "d.json"))
        assert code == 2

    def test_dual_of_ill_conditioned_frame(self, capsys, tmp_path):
        path = write(tmp_path, "ill.json", serialize_frame(from_g_frame([np.diag([1.0, 1e-7])])))
        code, _, _ = run_json(capsys, "dual", path, "--tol-rank", "1e-15", "--out", str(tmp_path / "d.json"))
        assert code == 3

    def test_parsevalize(self, capsys, tmp_path):
        out_path = str(tmp_path / "p.json")
        code, out, _ = run_json(capsys, "parsevalize", frame_path("two_subspace.json"), "--out", out_path)
        assert code == 0
        results = json.loads(out)["results"]
        assert results["is_parseval"] and results["parseval_residual"] <= 1e-8
        with open(out_path, "rb") as f:
            assert engine.frame_bounds(parse_frame(f.read())).is_parseval

    def test_transform_identity_and_rank_one(self, capsys, tmp_path):
        frame = frame_path("two_subspace.json")
        identity = write(tmp_path, "eye.json", serialize_matrix(np.eye(2)))
        code, out, _ = run_json(capsys, "transform", frame, "--operator", identity, "--out", str(tmp_path / "g.json"))
        results = json.loads(out)["results"]
        assert code == 0
        assert results["sequence_lower_bound"] == 0.292893218813
        assert results["identity_residual"] <= 1e-9

        rank_one = write(tmp_path, "r1.json", serialize_matrix(np.array([[1.0, 1.0], [0.0, 0.0]])))
        code, out, _ = run_json(capsys, "transform", frame, "--operator", rank_one, "--out", str(tmp_path / "g1.json"))
        results = json.loads(out)["results"]
        assert code == 0
        assert results["operator_rank"] == 1 and results["sequence_dim"] == 1
        assert results["is_frame_sequence"]

    def test_transform_wrong_shape(self, capsys, tmp_path):
        u = write(tmp_path, "u.json", serialize_matrix(np.eye(3)))
        code, _, _ = run_json(capsys, "transform", frame_path("two_subspace.json"), "--operator", u,
                              "--out", str(tmp_path / "g.json"))
        assert code == 1


class TestRemove:
    def test_orthonormal_member(self, capsys):
        code, out, _ = run_json(capsys, "remove", frame_path("parseval_basis.json"), "--index", "0")
        results = json.loads(out)["results"]
        assert code == 2
        assert results["cond1_holds"] and results["cond2_holds"] and not results["cond3_holds"]
        assert results["remaining_rank"] == 1

    def test_redundant_member(self, capsys, tmp_path):
        path = write(tmp_path, "mb.json", serialize_frame(from_classical_frame(mercedes_benz_vectors())))
        code, out, _ = run_json(capsys, "remove", path, "--index", "1")
        results = json.loads(out)["results"]
        assert code == 0
        assert results["cond3_holds"] and results["remaining_is_frame"]

    def test_bad_index(self, capsys):
        code, _, _ = run_json(capsys, "remove", frame_path("two_subspace.json"), "--index", "7")
        assert code == 1


class TestCoefficients:
    def test_minimal_coefficients_synthesize_back(self, capsys, tmp_path):
        frame = frame_path("two_subspace.json")
        vector = write(tmp_path, "f.json", serialize_vector(np.array([1.0, -2j])))
        coeffs_path = str(tmp_path / "c.json")
        code, out, _ = run_json(capsys, "coefficients", frame, "--vector", vector, "--out", coeffs_path)
        assert code == 0
        assert json.loads(out)["results"]["synthesis_residual"] <= 1e-9
        with open(coeffs_path, "rb") as f:
            assert parse_coefficients(f.read()).dims == (2, 2)

        vector_path = str(tmp_path / "f2.json")
        code, _, _ = run_json(capsys, "synthesize", frame, "--coeffs", coeffs_path, "--out", vector_path)
        assert code == 0
        with open(vector_path, "rb") as f:
            assert np.allclose(parse_vector(f.read()), [1.0, -2j])

    def test_vector_length_mismatch(self, capsys, tmp_path):
        vector = write(tmp_path, "f.json", serialize_vector(np.ones(3)))
        code, _, _ = run_json(capsys, "coefficients", frame_path("two_subspace.json"), "--vector", vector,
                              "--out", str(tmp_path / "c.json"))
        assert code == 1


class TestGenerate:
    def test_deterministic(self, capsys, tmp_path):
        first, second = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        for path in (first, second):
            assert run(["generate", "--seed", "7", "--n", "3", "--members", "2", "--out", path]) == 0
        with open(first, "rb") as a, open(second, "rb") as b:
            raw = a.read()
            assert raw == b.read()
        assert engine.frame_bounds(parse_frame(raw)).is_frame

    def test_count_writes_consecutive_seeds(self, capsys, tmp_path):
        code, out, _ = run_json(capsys, "generate", "--seed", "10", "--n", "2", "--members", "2",
                                "--count", "3", "--out", str(tmp_path))
        assert code == 0
        assert json.loads(out)["results"]["seeds"] == [10, 11, 12]
        assert sorted(os.listdir(tmp_path)) == ["frame_seed10.json", "frame_seed11.json", "frame_seed12.json"]

    def test_spec_file(self, capsys, tmp_path):
        spec = write(tmp_path, "spec.json", json.dumps({
            "seed": 3, "ambient_dim": 3, "member_count": 2,
            "subspace_dims": [3, 1], "codomain_dims": [2, 2], "real": True,
        }).encode())
        out_path = str(tmp_path / "frame.json")
        assert run(["generate", spec, "--out", out_path]) == 0
        with open(out_path, "rb") as f:
            frame = parse_frame(f.read())
        assert frame.codomain_dims == (2, 2)

    def test_unsatisfiable_spec(self, capsys, tmp_path):
        code = run(["generate", "--n", "3", "--members", "1", "--k", "1", "--out", str(tmp_path / "x.json")])
        assert code == 2

    def test_missing_dimensions(self, capsys):
        assert run(["generate", "--seed", "1"]) == 1
