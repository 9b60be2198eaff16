"""Shared helpers for the test suite."""

import numpy as np
import pytest


def rand_spd(n: int, rng: np.random.Generator, reg: float = 0.1) -> np.ndarray:
    G = rng.standard_normal((n, n))
    return G.T @ G / n + reg * np.eye(n)


def rand_orthonormal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return Q


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
