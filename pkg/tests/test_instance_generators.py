import math

import numpy as np
import pytest

import frame_engine as engine
from conftest import complex_gaussian, well_conditioned
from errors import DimensionMismatchError, GenerationError, GeneratorSpecError, ValidationError
from frame_model import serialize_frame, validate
from instance_generators import (
    MAX_ATTEMPTS,
    GeneratorSpec,
    duplicated_frame,
    equiangular_lines_frame,
    from_classical_frame,
    from_fusion_frame,
    from_g_frame,
    make_rng,
    mercedes_benz_vectors,
    orthonormal_basis_frame,
    random_frame,
    two_subspace_frame,
    zero_operator_frame,
)
from linalg_kernel import eigh, orthonormalize


def extremes(s):
    values = np.linalg.eigvalsh(s)
    return max(values[0], 0.0), values[-1]


class TestRandomFrame:
    def test_same_seed_same_bytes(self):
        spec = GeneratorSpec(42, 4, 3, (2, 3, 1), (2, 2, 4))
        assert serialize_frame(random_frame(spec)) == serialize_frame(random_frame(spec))

    def test_seeds_differ(self):
        spec = GeneratorSpec.uniform(1, 3, 2)
        assert serialize_frame(random_frame(spec)) != serialize_frame(random_frame(spec.with_seed(2)))

    def test_ensure_frame(self):
        for seed in range(20):
            frame = random_frame(GeneratorSpec(seed, 4, 3, (2, 2, 1), (2, 1, 3)))
            validate(frame)
            assert engine.frame_bounds(frame).is_frame

    def test_without_ensure_frame(self):
        frame = random_frame(GeneratorSpec(5, 3, 1, (2,), (3,), ensure_frame=False))
        assert not engine.frame_bounds(frame).is_frame

    def test_unsatisfiable(self):
        with pytest.raises(GenerationError) as excinfo:
            random_frame(GeneratorSpec(0, 4, 1, (1,), (4,)))
        assert excinfo.value.attempts == MAX_ATTEMPTS
        assert excinfo.value.lower == pytest.approx(0.0, abs=1e-12)

    def test_real_draws(self):
        frame = random_frame(GeneratorSpec.uniform(9, 3, 2, real=True))
        for member in frame:
            assert np.max(np.abs(member.subspace.imag), initial=0.0) <= 1e-14
            assert np.all(member.operator.imag == 0)

    def test_weights_in_range(self):
        frame = random_frame(GeneratorSpec.uniform(3, 2, 6, weight_range=(0.75, 1.25)))
        assert np.all((frame.weights >= 0.75) & (frame.weights <= 1.25))

    def test_dimensions_follow_generator_spec(self):
        frame = random_frame(GeneratorSpec(8, 5, 3, (5, 0, 2), (1, 2, 3), ensure_frame=False))
        assert [m.subspace_dim for m in frame] == [5, 0, 2]
        assert frame.codomain_dims == (1, 2, 3)


class TestGeneratorSpec:
    @pytest.mark.parametrize("kwargs", [
        {"subspace_dims": (4, 1)},
        {"codomain_dims": (1,)},
        {"weight_range": (0.0, 1.0)},
        {"weight_range": (2.0, 1.0)},
        {"seed": -1},
    ])
    def test_invalid(self, kwargs):
        fields = {"seed": 0, "ambient_dim": 3, "member_count": 2,
                  "subspace_dims": (1, 1), "codomain_dims": (1, 1)}
        fields.update(kwargs)
        with pytest.raises(GeneratorSpecError):
            GeneratorSpec(**fields)

    def test_dict_round_trip(self):
        spec = GeneratorSpec(7, 3, 2, (1, 3), (2, 2), weight_range=(0.5, 1.5), real=True)
        assert GeneratorSpec.from_dict(spec.to_dict()) == spec

    def test_dict_defaults(self):
        spec = GeneratorSpec.from_dict({"ambient_dim": 3, "member_count": 2})
        assert spec.subspace_dims == (3, 3) and spec.codomain_dims == (3, 3)
        assert spec.seed == 0 and spec.ensure_frame

    def test_dict_errors(self):
        with pytest.raises(GeneratorSpecError):
            GeneratorSpec.from_dict({"ambient_dim": 3})
        with pytest.raises(GeneratorSpecError):
            GeneratorSpec.from_dict({"ambient_dim": 3, "member_count": 1, "colour": "red"})
        with pytest.raises(GeneratorSpecError):
            GeneratorSpec.from_dict({"ambient_dim": "three", "member_count": 1})


class TestClassicalFrames:
    def test_standard_basis(self):
        report = engine.frame_bounds(orthonormal_basis_frame(2))
        assert (report.bounds.lower, report.bounds.upper) == (1.0, 1.0)

    def test_repeated_vector(self):
        e1 = np.array([1.0, 0.0])
        frame = from_classical_frame([e1, e1])
        assert np.allclose(engine.frame_operator(frame), np.diag([2.0, 0.0]))
        assert not engine.frame_bounds(frame).is_frame

    def test_mercedes_benz(self):
        bounds = engine.frame_bounds(from_classical_frame(mercedes_benz_vectors())).bounds
        assert bounds.lower == pytest.approx(1.5, abs=1e-12)
        assert bounds.upper == pytest.approx(1.5, abs=1e-12)

    @pytest.mark.parametrize("count", [2, 3, 5, 8])
    def test_equally_spaced_lines_are_tight(self, count):
        bounds = engine.frame_bounds(equiangular_lines_frame(count)).bounds
        assert bounds.lower == pytest.approx(count / 2, abs=1e-12)
        assert bounds.upper == pytest.approx(count / 2, abs=1e-12)

    def test_frame_sum_matches_inner_products(self):
        rng = make_rng(3)
        for _ in range(50):
            n = int(rng.integers(1, 6))
            vectors = [complex_gaussian(rng, n) for _ in range(int(rng.integers(n, n + 4)))]
            frame = from_classical_frame(vectors)
            f = complex_gaussian(rng, n)
            direct = sum(abs(np.vdot(v, f)) ** 2 for v in vectors)
            assert engine.analysis(frame, f).norm_squared() == pytest.approx(direct, rel=1e-12)
            lower, upper = extremes(sum(np.outer(v, v.conj()) for v in vectors))
            bounds = engine.frame_bounds(frame).bounds
            assert bounds.lower == pytest.approx(lower, abs=1e-10)
            assert bounds.upper == pytest.approx(upper, abs=1e-10)

    def test_invalid_input(self):
        with pytest.raises(ValidationError):
            from_classical_frame([])
        with pytest.raises(ValidationError):
            from_classical_frame([np.zeros(2)])
        with pytest.raises(DimensionMismatchError):
            from_classical_frame([np.ones(2), np.ones(3)])


class TestFusionFrames:
    def test_coordinate_axes(self):
        frame = from_fusion_frame([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
        assert engine.frame_bounds(frame).is_parseval

    def test_single_proper_subspace(self):
        assert not engine.frame_bounds(from_fusion_frame([np.eye(3)[:, :2]])).is_frame

    def test_two_subspace_bounds(self):
        bounds = engine.frame_bounds(two_subspace_frame()).bounds
        assert bounds.lower == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-12)
        assert bounds.upper == pytest.approx(1 + 1 / math.sqrt(2), abs=1e-12)

    def test_bounds_match_weighted_projections(self):
        rng = make_rng(4)
        for _ in range(50):
            n = int(rng.integers(1, 6))
            count = int(rng.integers(1, 5))
            spans = [complex_gaussian(rng, (n, int(rng.integers(1, n + 1)))) for _ in range(count)]
            weights = rng.uniform(0.5, 2.0, count)
            frame = from_fusion_frame(spans, weights)
            direct = sum(w ** 2 * (b @ b.conj().T) for w, b in zip(weights, map(orthonormalize, spans)))
            lower, upper = extremes(direct)
            bounds = engine.frame_bounds(frame).bounds
            assert bounds.lower == pytest.approx(lower, abs=1e-10)
            assert bounds.upper == pytest.approx(upper, abs=1e-10)

    def test_weight_count(self):
        with pytest.raises(ValidationError):
            from_fusion_frame([np.eye(2)], weights=[1.0, 2.0])


class TestGFrames:
    def test_identity(self):
        assert engine.frame_bounds(from_g_frame([np.eye(3)])).is_parseval

    def test_rows_of_a_unitary(self):
        q = well_conditioned(make_rng(5), 4, 4, low=1.0, high=1.0)
        frame = from_g_frame([q[j:j + 1] for j in range(4)])
        assert engine.frame_bounds(frame).is_parseval

    def test_bounds_match_operator_sum(self):
        rng = make_rng(6)
        for _ in range(50):
            n = int(rng.integers(1, 5))
            count = int(rng.integers(1, 4))
            operators = [complex_gaussian(rng, (int(rng.integers(1, n + 2)), n)) for _ in range(count)]
            weights = rng.uniform(0.5, 2.0, count)
            frame = from_g_frame(operators, weights)
            lower, upper = extremes(sum(w ** 2 * (op.conj().T @ op) for w, op in zip(weights, operators)))
            bounds = engine.frame_bounds(frame).bounds
            assert bounds.lower == pytest.approx(lower, abs=1e-10)
            assert bounds.upper == pytest.approx(upper, abs=1e-10)

    def test_column_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            from_g_frame([np.eye(2), np.eye(3)])


class TestDegenerates:
    def test_zero_operators(self):
        frame = zero_operator_frame(3, count=2)
        assert len(frame) == 2
        assert np.all(engine.frame_operator(frame) == 0)

    def test_duplication_doubles_frame_operator(self):
        frame = two_subspace_frame()
        doubled = duplicated_frame(frame)
        assert len(doubled) == 4
        assert np.allclose(engine.frame_operator(doubled), 2 * engine.frame_operator(frame))
        assert eigh(engine.frame_operator(doubled)).min == pytest.approx(2 * (1 - 1 / math.sqrt(2)))
