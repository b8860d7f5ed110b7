"""Shared random generators for the test suite."""

import numpy as np

from qdisturb import (
    Ensemble,
    PureState,
    QuantumState,
    sample_haar_state,
    sample_mixed_state,
)


def haar_pure(rng, dims):
    total = int(np.prod(dims))
    return PureState(tuple(dims), sample_haar_state(total, rng).amplitudes)


def random_ensemble(rng, dims, n, rank=None):
    probs = rng.dirichlet(np.ones(n))
    return Ensemble([(float(p), sample_mixed_state(dims, rng, rank)) for p in probs])


def random_cq_state(rng, d_a=2, d_b=2):
    """Random bipartite state classical on the first factor in the
    computational basis."""
    probs = rng.dirichlet(np.ones(d_a))
    m = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for i, p in enumerate(probs):
        flag = np.zeros((d_a, d_a))
        flag[i, i] = 1.0
        m += p * np.kron(flag, sample_mixed_state((d_b,), rng).matrix)
    return QuantumState((d_a, d_b), m)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_rotation(rng):
    m = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_bloch(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v) * rng.uniform()


def random_bistochastic(n, rng, transforms=5):
    """Product of random T-transforms (2x2 mixing blocks)."""
    b = np.eye(n)
    for _ in range(transforms):
        i, j = rng.choice(n, size=2, replace=False)
        t = rng.uniform()
        step = np.eye(n)
        step[i, i] = step[j, j] = t
        step[i, j] = step[j, i] = 1.0 - t
        b = step @ b
    return b
