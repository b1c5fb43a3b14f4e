import os

import numpy as np
import pytest

from instance_generators import GeneratorSpec, make_rng, random_frame

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FRAMES_DIR = os.path.join(ROOT, "test_frames")
GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")

INSTANCE_COUNT = 200


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def well_conditioned(rng, rows, cols, low=0.5, high=2.0):
    """Random rows x cols matrix of full rank with singular values in [low, high]"""
    r = min(rows, cols)
    left, _ = np.linalg.qr(complex_gaussian(rng, (rows, r)))
    right, _ = np.linalg.qr(complex_gaussian(rng, (cols, r)))
    return (left * rng.uniform(low, high, r)) @ right.conj().T


def random_unit(rng, n):
    f = complex_gaussian(rng, n)
    return f / np.linalg.norm(f)


def spec_for(seed: int) -> GeneratorSpec:
    """Mixed dimensions; member 0 is full so every instance is a frame"""
    rng = make_rng(10_000 + seed)
    n = int(rng.integers(2, 6))
    count = int(rng.integers(2, 5))
    ks = [n] + [int(k) for k in rng.integers(1, n + 1, count - 1)]
    ms = [n] + [int(m) for m in rng.integers(1, n + 1, count - 1)]
    return GeneratorSpec(seed, n, count, tuple(ks), tuple(ms), weight_range=(0.5, 2.0))


@pytest.fixture(scope="session")
def instances():
    return [random_frame(spec_for(seed)) for seed in range(INSTANCE_COUNT)]


@pytest.fixture
def rng():
    return make_rng(20_240_101)


def frame_path(name: str) -> str:
    return os.path.join(FRAMES_DIR, name)
