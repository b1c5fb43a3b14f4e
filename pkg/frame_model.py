"""
Domain types for g-fusion frames and their JSON file formats

A member (W_j, Lambda_j, v_j) stores W_j as an orthonormal n x k_j basis,
Lambda_j as an m_j x n matrix and v_j as a positive float. All types are
immutable once constructed: their arrays are marked read-only.
"""
import json
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from errors import (
    DimensionMismatchError,
    NonOrthonormalSubspaceError,
    NonPositiveWeightError,
    ParseError,
    ShapeMismatchError,
    ValidationError,
)
from linalg_kernel import DEFAULT_TOLERANCE, Tolerance, orthonormality_residual


def _frozen(array) -> np.ndarray:
    arr = np.array(array, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Member:
    """One triple (W_j, Lambda_j, v_j)"""

    subspace: np.ndarray
    operator: np.ndarray
    weight: float

    def __post_init__(self):
        subspace = _frozen(self.subspace)
        if subspace.ndim == 1:
            subspace = _frozen(subspace.reshape(-1, 1))
        object.__setattr__(self, "subspace", subspace)
        object.__setattr__(self, "operator", _frozen(self.operator))
        object.__setattr__(self, "weight", float(self.weight))

    @property
    def ambient_dim(self) -> int:
        return self.subspace.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.subspace.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.operator.shape[0]

    def projection(self) -> np.ndarray:
        """pi_{W_j} as an n x n matrix"""
        return self.subspace @ self.subspace.conj().T

    def restricted_operator(self) -> np.ndarray:
        """Lambda_j pi_{W_j} as an m_j x n matrix"""
        return (self.operator @ self.subspace) @ self.subspace.conj().T


@dataclass(frozen=True)
class GFusionFrame:
    """An ordered finite family of members over a common ambient space C^n"""

    ambient_dim: int
    members: Tuple[Member, ...]

    def __post_init__(self):
        object.__setattr__(self, "ambient_dim", int(self.ambient_dim))
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, index: int) -> Member:
        return self.members[index]

    @property
    def codomain_dims(self) -> Tuple[int, ...]:
        return tuple(member.codomain_dim for member in self.members)

    @property
    def weights(self) -> np.ndarray:
        return np.array([member.weight for member in self.members])

    def with_members(self, members: Sequence[Member]) -> "GFusionFrame":
        return GFusionFrame(self.ambient_dim, tuple(members))


@dataclass(frozen=True)
class CoefficientFamily:
    """An element {f_j} of the direct sum of the codomains C^{m_j}"""

    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = []
        for block in self.blocks:
            arr = _frozen(block).reshape(-1)
            arr.setflags(write=False)
            blocks.append(arr)
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> "CoefficientFamily":
        return cls(tuple(np.zeros(d, dtype=np.complex128) for d in dims))

    @classmethod
    def from_vector(cls, vector: np.ndarray, dims: Sequence[int]) -> "CoefficientFamily":
        vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if vector.shape[0] != sum(dims):
            raise ShapeMismatchError(
                f"stacked vector has length {vector.shape[0]}, expected {sum(dims)}"
            )
        offsets = np.cumsum([0] + list(dims))
        return cls(tuple(vector[offsets[j]:offsets[j + 1]] for j in range(len(dims))))

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(block.shape[0] for block in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def as_vector(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate(self.blocks)

    def norm_squared(self) -> float:
        return float(sum(np.vdot(block, block).real for block in self.blocks))

    def inner(self, other: "CoefficientFamily") -> complex:
        """<self, other> = sum_j <f_j, g_j>, linear in the first argument"""
        self._check_same_shape(other)
        return complex(sum(np.vdot(g, f) for f, g in zip(self.blocks, other.blocks)))

    def matches(self, frame: GFusionFrame):
        if self.dims != frame.codomain_dims:
            raise ShapeMismatchError(
                f"coefficient block sizes {list(self.dims)} do not match "
                f"frame codomains {list(frame.codomain_dims)}"
            )

    def _check_same_shape(self, other: "CoefficientFamily"):
        if self.dims != other.dims:
            raise ShapeMismatchError(f"block sizes differ: {list(self.dims)} vs {list(other.dims)}")

    def __add__(self, other: "CoefficientFamily") -> "CoefficientFamily":
        self._check_same_shape(other)
        return CoefficientFamily(tuple(f + g for f, g in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "CoefficientFamily") -> "CoefficientFamily":
        self._check_same_shape(other)
        return CoefficientFamily(tuple(f - g for f, g in zip(self.blocks, other.blocks)))

    def scaled(self, factor: complex) -> "CoefficientFamily":
        return CoefficientFamily(tuple(factor * block for block in self.blocks))


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float

    def __post_init__(self):
        # eigenvalue round-off can leave tiny negative values
        lower = max(0.0, float(self.lower)) + 0.0
        upper = max(lower, float(self.upper)) + 0.0
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def condition_number(self) -> float:
        if self.lower <= 0.0:
            return math.inf
        return self.upper / self.lower


@dataclass(frozen=True)
class FrameReport:
    bounds: FrameBounds
    is_bessel: bool
    is_frame: bool
    is_parseval: bool
    is_gf_complete: bool
    frame_operator_condition: float


def validate(frame: GFusionFrame, tol: Tolerance = DEFAULT_TOLERANCE):
    """Check every Member and GFusionFrame invariant

    Raises:
        ValidationError: empty family or bad ambient dimension
        DimensionMismatchError: a member does not live in C^n
        NonPositiveWeightError: v_j <= 0 or not finite
        NonOrthonormalSubspaceError: B^H B differs from I by more than residual_abs
    """
    if frame.ambient_dim < 1:
        raise ValidationError(f"ambient_dim must be positive, got {frame.ambient_dim}")
    if len(frame.members) == 0:
        raise ValidationError("a g-fusion frame needs at least one member")

    n = frame.ambient_dim
    for j, member in enumerate(frame.members):
        if member.subspace.ndim != 2 or member.subspace.shape[0] != n:
            raise DimensionMismatchError(
                f"subspace basis has {member.subspace.shape[0]} rows, ambient dimension is {n}",
                member=j, field="subspace",
            )
        if member.subspace.shape[1] > n:
            raise DimensionMismatchError(
                f"subspace basis has {member.subspace.shape[1]} columns, more than {n}",
                member=j, field="subspace",
            )
        if member.operator.ndim != 2 or member.operator.shape[1] != n:
            raise DimensionMismatchError(
                f"operator has shape {member.operator.shape}, expected m x {n}",
                member=j, field="operator",
            )
        if not math.isfinite(member.weight) or member.weight <= 0.0:
            raise NonPositiveWeightError(
                f"weight must be positive, got {member.weight}", member=j, field="weight"
            )
        if not (np.all(np.isfinite(member.subspace)) and np.all(np.isfinite(member.operator))):
            raise ValidationError("non-finite entries", member=j)
        residual = orthonormality_residual(member.subspace)
        if residual > tol.residual_abs:
            raise NonOrthonormalSubspaceError(
                f"subspace basis is not orthonormal (|B^H B - I| = {residual:.3e})",
                member=j, field="subspace",
            )


# ---------------------------------------------------------------------------
# JSON file formats
# ---------------------------------------------------------------------------

def _reject_constant(name):
    raise ParseError("", f"non-finite number {name} is not allowed")


def _load_json(text, kind: str):
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("", f"{kind} file is not valid UTF-8: {e}")
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError("", f"malformed JSON in {kind} file: {e}")


def _require(doc, key: str, path: str):
    if not isinstance(doc, dict):
        raise ParseError(path, "expected an object")
    if key not in doc:
        raise ParseError(f"{path}.{key}" if path else key, "missing field")
    return doc[key]


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(path, f"expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(path, "number is not finite")
    return value


def _complex_entry(value, path: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError(path, "complex entry must be a [re, im] pair")
    return complex(_real(value[0], f"{path}[0]"), _real(value[1], f"{path}[1]"))


def _complex_list(value, path: str, length=None) -> List[complex]:
    if not isinstance(value, list):
        raise ParseError(path, "expected an array of complex entries")
    if length is not None and len(value) != length:
        raise ParseError(path, f"expected {length} entries, got {len(value)}")
    return [_complex_entry(entry, f"{path}[{i}]") for i, entry in enumerate(value)]


def _complex_rows(value, path: str, width=None) -> np.ndarray:
    if not isinstance(value, list):
        raise ParseError(path, "expected an array of arrays")
    rows = [_complex_list(row, f"{path}[{i}]", width) for i, row in enumerate(value)]
    if rows and width is None:
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ParseError(f"{path}[{i}]", f"expected {width} entries, got {len(row)}")
    return np.array(rows, dtype=np.complex128).reshape(len(rows), width or 0)


def _encode_complex(z) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _dump(document) -> bytes:
    return (json.dumps(document) + "\n").encode("utf-8")


def parse_frame(text, tol: Tolerance = DEFAULT_TOLERANCE) -> GFusionFrame:
    """Read the frame file format and validate the result

    Raises:
        ParseError: malformed JSON, missing fields, wrong shapes, non-finite numbers
        ValidationError: the parsed family violates a frame invariant
    """
    doc = _load_json(text, "frame")
    n = _require(doc, "ambient_dim", "")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError("ambient_dim", "expected a positive integer")
    raw_members = _require(doc, "members", "")
    if not isinstance(raw_members, list):
        raise ParseError("members", "expected an array")

    members = []
    for j, raw in enumerate(raw_members):
        path = f"members[{j}]"
        weight = _real(_require(raw, "weight", path), f"{path}.weight")
        columns = _complex_rows(_require(raw, "subspace", path), f"{path}.subspace", n)
        operator = _complex_rows(_require(raw, "operator", path), f"{path}.operator", n)
        members.append(Member(subspace=columns.T, operator=operator, weight=weight))

    frame = GFusionFrame(ambient_dim=n, members=tuple(members))
    validate(frame, tol)
    return frame


def serialize_frame(frame: GFusionFrame) -> bytes:
    document = {
        "ambient_dim": frame.ambient_dim,
        "members": [
            {
                "weight": member.weight,
                "subspace": [[_encode_complex(z) for z in column] for column in member.subspace.T],
                "operator": [[_encode_complex(z) for z in row] for row in member.operator],
            }
            for member in frame.members
        ],
    }
    return _dump(document)


def parse_coefficients(text) -> CoefficientFamily:
    doc = _load_json(text, "coefficient")
    blocks = _require(doc, "blocks", "")
    if not isinstance(blocks, list):
        raise ParseError("blocks", "expected an array")
    return CoefficientFamily(
        tuple(np.array(_complex_list(block, f"blocks[{j}]"), dtype=np.complex128)
              for j, block in enumerate(blocks))
    )


def serialize_coefficients(coeffs: CoefficientFamily) -> bytes:
    return _dump({"blocks": [[_encode_complex(z) for z in block] for block in coeffs.blocks]})


def parse_vector(text, length=None) -> np.ndarray:
    doc = _load_json(text, "vector")
    entries = _complex_list(_require(doc, "vector", ""), "vector", length)
    return np.array(entries, dtype=np.complex128)


def serialize_vector(vector: np.ndarray) -> bytes:
    return _dump({"vector": [_encode_complex(z) for z in np.asarray(vector).reshape(-1)]})


def parse_matrix(text) -> np.ndarray:
    """Read an operator file: a bare array of rows of [re, im] entries"""
    doc = _load_json(text, "operator")
    return _complex_rows(doc, "operator")


def serialize_matrix(matrix: np.ndarray) -> bytes:
    return _dump([[_encode_complex(z) for z in row] for row in np.asarray(matrix)])
