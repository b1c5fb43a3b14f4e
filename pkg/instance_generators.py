"""
Seeded construction of g-fusion frame instances

Random frames, the embeddings of classical frames, fusion frames and
g-frames, a few structured instances with known bounds and some degenerate
families used to exercise the edge cases of the engine.

Random draws use numpy's Philox counter-based generator keyed by the seed,
consumed in member order: subspace Gaussian (n x k_j), operator Gaussian
(m_j x n), then the weight. Complex Gaussians are (x + iy) / sqrt(2) with x
drawn before y, entry-wise over the whole block.
"""
import math
from dataclasses import asdict, dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from errors import DimensionMismatchError, GenerationError, GeneratorSpecError, ValidationError
from frame_engine import frame_operator
from frame_model import GFusionFrame, Member, validate
from linalg_kernel import DEFAULT_TOLERANCE, Tolerance, as_matrix, as_vector, eigh, orthonormalize

MAX_ATTEMPTS = 100
# ensure_frame accepts an instance once A > FRAME_RATIO * B
FRAME_RATIO = 1e-6


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of random_frame

    Args:
        seed: Philox key, any unsigned integer
        ambient_dim: n
        member_count: number of members |J|
        subspace_dims: k_j per member, each at most n
        codomain_dims: m_j per member
        weight_range: (lo, hi) with 0 < lo <= hi, weights are uniform in it
        ensure_frame: resample until the family is a frame
        real: draw real Gaussians instead of complex ones
    """

    seed: int
    ambient_dim: int
    member_count: int
    subspace_dims: Tuple[int, ...]
    codomain_dims: Tuple[int, ...]
    weight_range: Tuple[float, float] = (0.5, 2.0)
    ensure_frame: bool = True
    real: bool = False

    def __post_init__(self):
        object.__setattr__(self, "subspace_dims", tuple(int(k) for k in self.subspace_dims))
        object.__setattr__(self, "codomain_dims", tuple(int(m) for m in self.codomain_dims))
        object.__setattr__(self, "weight_range", tuple(float(w) for w in self.weight_range))

        if int(self.seed) < 0:
            raise GeneratorSpecError(f"seed must be unsigned, got {self.seed}")
        if self.ambient_dim < 1:
            raise GeneratorSpecError(f"ambient_dim must be positive, got {self.ambient_dim}")
        if self.member_count < 1:
            raise GeneratorSpecError(f"member_count must be positive, got {self.member_count}")
        if len(self.subspace_dims) != self.member_count or len(self.codomain_dims) != self.member_count:
            raise GeneratorSpecError("subspace_dims and codomain_dims need one entry per member")
        for j, k in enumerate(self.subspace_dims):
            if not 0 <= k <= self.ambient_dim:
                raise GeneratorSpecError(f"subspace_dims[{j}] = {k} is outside 0..{self.ambient_dim}")
        for j, m in enumerate(self.codomain_dims):
            if m < 0:
                raise GeneratorSpecError(f"codomain_dims[{j}] = {m} is negative")
        if len(self.weight_range) != 2:
            raise GeneratorSpecError("weight_range needs exactly two entries")
        lo, hi = self.weight_range
        if not (0.0 < lo <= hi < math.inf):
            raise GeneratorSpecError(f"weight_range must satisfy 0 < lo <= hi, got ({lo}, {hi})")

    @classmethod
    def uniform(cls, seed: int, ambient_dim: int, member_count: int,
                subspace_dim: Optional[int] = None, codomain_dim: Optional[int] = None,
                **kwargs) -> "GeneratorSpec":
        """Same k and m for every member; both default to ambient_dim"""
        k = ambient_dim if subspace_dim is None else subspace_dim
        m = ambient_dim if codomain_dim is None else codomain_dim
        return cls(seed, ambient_dim, member_count, (k,) * member_count, (m,) * member_count, **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorSpec":
        if not isinstance(doc, dict):
            raise GeneratorSpecError("generator spec must be a JSON object")
        known = {"seed", "ambient_dim", "member_count", "subspace_dims", "codomain_dims",
                 "weight_range", "ensure_frame", "real"}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise GeneratorSpecError(f"unknown generator spec fields: {', '.join(unknown)}")
        try:
            n = int(doc["ambient_dim"])
            count = int(doc["member_count"])
            return cls(
                seed=int(doc.get("seed", 0)),
                ambient_dim=n,
                member_count=count,
                subspace_dims=tuple(doc.get("subspace_dims", [n] * count)),
                codomain_dims=tuple(doc.get("codomain_dims", [n] * count)),
                weight_range=tuple(doc.get("weight_range", (0.5, 2.0))),
                ensure_frame=bool(doc.get("ensure_frame", True)),
                real=bool(doc.get("real", False)),
            )
        except KeyError as e:
            raise GeneratorSpecError(f"generator spec is missing {e.args[0]}")
        except (TypeError, ValueError) as e:
            raise GeneratorSpecError(f"malformed generator spec: {e}")

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["subspace_dims"] = list(self.subspace_dims)
        doc["codomain_dims"] = list(self.codomain_dims)
        doc["weight_range"] = list(self.weight_range)
        return doc

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return replace(self, seed=seed)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed)))


def _gaussian(rng: np.random.Generator, shape: Tuple[int, int], real: bool) -> np.ndarray:
    if real:
        return rng.standard_normal(shape).astype(np.complex128)
    x = rng.standard_normal(shape)
    y = rng.standard_normal(shape)
    return (x + 1j * y) / math.sqrt(2.0)


def _draw_members(spec: GeneratorSpec, rng: np.random.Generator, tol: Tolerance) -> List[Member]:
    n = spec.ambient_dim
    lo, hi = spec.weight_range
    members = []
    for k, m in zip(spec.subspace_dims, spec.codomain_dims):
        basis = orthonormalize(_gaussian(rng, (n, k), spec.real), tol)
        operator = _gaussian(rng, (m, n), spec.real)
        weight = rng.uniform(lo, hi)
        members.append(Member(subspace=basis, operator=operator, weight=weight))
    return members


def random_frame(spec: GeneratorSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> GFusionFrame:
    """Deterministic random family for the given spec

    Raises:
        GenerationError: ensure_frame is set and no draw out of MAX_ATTEMPTS
            had A > FRAME_RATIO * B
    """
    rng = make_rng(spec.seed)
    lower = upper = 0.0
    for _ in range(MAX_ATTEMPTS):
        frame = GFusionFrame(spec.ambient_dim, tuple(_draw_members(spec, rng, tol)))
        validate(frame, tol)
        if not spec.ensure_frame:
            return frame
        spectrum = eigh(frame_operator(frame), tol)
        lower, upper = spectrum.min, spectrum.max
        if upper > 0.0 and lower > FRAME_RATIO * upper:
            return frame
    raise GenerationError(MAX_ATTEMPTS, lower, upper)


# ---------------------------------------------------------------------------
# Embeddings of the classical notions
# ---------------------------------------------------------------------------

def from_classical_frame(vectors: Sequence, tol: Tolerance = DEFAULT_TOLERANCE) -> GFusionFrame:
    """Members (C^n, f_j^H, 1): the g-fusion sum is sum_j |<f, f_j>|^2"""
    if len(vectors) == 0:
        raise ValidationError("a classical frame needs at least one vector")
    rows = [as_vector(f, name=f"vectors[{j}]") for j, f in enumerate(vectors)]
    n = rows[0].shape[0]
    for j, row in enumerate(rows):
        if row.shape[0] != n:
            raise DimensionMismatchError(f"vector has length {row.shape[0]}, expected {n}", member=j)
    if not any(np.any(row) for row in rows):
        raise ValidationError("a classical frame needs at least one nonzero vector")

    identity = np.eye(n, dtype=np.complex128)
    frame = GFusionFrame(n, tuple(
        Member(subspace=identity, operator=row.conj().reshape(1, n), weight=1.0) for row in rows
    ))
    validate(frame, tol)
    return frame


def from_fusion_frame(subspaces: Sequence, weights: Optional[Sequence[float]] = None,
                      tol: Tolerance = DEFAULT_TOLERANCE) -> GFusionFrame:
    """Members (W_j, I_n, v_j); each entry of subspaces spans W_j by its columns"""
    if len(subspaces) == 0:
        raise ValidationError("a fusion frame needs at least one subspace")
    spans = [as_matrix(np.reshape(s, (np.shape(s)[0], -1)), f"subspaces[{j}]")
             for j, s in enumerate(subspaces)]
    weights = [1.0] * len(spans) if weights is None else list(weights)
    if len(weights) != len(spans):
        raise ValidationError(f"{len(weights)} weights for {len(spans)} subspaces")
    n = spans[0].shape[0]
    for j, span in enumerate(spans):
        if span.shape[0] != n:
            raise DimensionMismatchError(f"subspace lives in C^{span.shape[0]}, expected C^{n}",
                                         member=j, field="subspace")

    identity = np.eye(n, dtype=np.complex128)
    frame = GFusionFrame(n, tuple(
        Member(subspace=orthonormalize(span, tol), operator=identity, weight=w)
        for span, w in zip(spans, weights)
    ))
    validate(frame, tol)
    return frame


def from_g_frame(operators: Sequence, weights: Optional[Sequence[float]] = None,
                 tol: Tolerance = DEFAULT_TOLERANCE) -> GFusionFrame:
    """Members (C^n, Lambda_j, v_j): the g-fusion sum is sum_j v_j^2 |Lambda_j f|^2"""
    if len(operators) == 0:
        raise ValidationError("a g-frame needs at least one operator")
    ops = [as_matrix(op, f"operators[{j}]") for j, op in enumerate(operators)]
    weights = [1.0] * len(ops) if weights is None else list(weights)
    if len(weights) != len(ops):
        raise ValidationError(f"{len(weights)} weights for {len(ops)} operators")
    n = ops[0].shape[1]
    for j, op in enumerate(ops):
        if op.shape[1] != n:
            raise DimensionMismatchError(f"operator has {op.shape[1]} columns, expected {n}",
                                         member=j, field="operator")

    identity = np.eye(n, dtype=np.complex128)
    frame = GFusionFrame(n, tuple(
        Member(subspace=identity, operator=op, weight=w) for op, w in zip(ops, weights)
    ))
    validate(frame, tol)
    return frame


# ---------------------------------------------------------------------------
# Structured instances
# ---------------------------------------------------------------------------

def orthonormal_basis_frame(n: int) -> GFusionFrame:
    """Standard basis of C^n as a classical frame; Parseval"""
    return from_classical_frame(list(np.eye(n)))


def mercedes_benz_vectors() -> List[np.ndarray]:
    """Three unit vectors of R^2 at 120 degrees; tight with A = B = 3/2"""
    half_root3 = math.sqrt(3.0) / 2.0
    return [
        np.array([0.0, 1.0]),
        np.array([-half_root3, -0.5]),
        np.array([half_root3, -0.5]),
    ]


def equiangular_lines_frame(count: int) -> GFusionFrame:
    """count unit vectors on equally spaced lines through the origin of R^2

    Tight with A = B = count / 2 for count >= 2.
    """
    if count < 2:
        raise GeneratorSpecError(f"need at least two lines, got {count}")
    angles = np.pi * np.arange(count) / count
    return from_classical_frame([np.array([math.cos(a), math.sin(a)]) for a in angles])


def two_subspace_frame() -> GFusionFrame:
    """span{e1} and span{(e1 + e2) / sqrt 2} in C^2; bounds 1 -+ 1/sqrt 2"""
    return from_fusion_frame([
        np.array([[1.0], [0.0]]),
        np.array([[1.0], [1.0]]) / math.sqrt(2.0),
    ])


def zero_operator_frame(n: int, count: int = 2) -> GFusionFrame:
    """Full subspaces with zero operators: S = 0, nothing is spanned"""
    if n < 1 or count < 1:
        raise GeneratorSpecError(f"need n >= 1 and count >= 1, got n = {n}, count = {count}")
    identity = np.eye(n, dtype=np.complex128)
    return GFusionFrame(n, tuple(
        Member(subspace=identity, operator=np.zeros((n, n)), weight=1.0) for _ in range(count)
    ))


def duplicated_frame(frame: GFusionFrame) -> GFusionFrame:
    """Every member listed twice; the frame operator doubles"""
    return frame.with_members(frame.members + frame.members)
