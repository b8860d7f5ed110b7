"""Dense complex-matrix kernels used by every other module.

Operators in this package live on total dimensions of at most a few
dozen, so everything is dense, row-major, and eigendecomposition-based.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, NonSquareInput

HERMITICITY_ATOL = 1e-9
EIGENVALUE_CUTOFF = 1e-12  # magnitudes below this count as zero for ranks


class HermitianEigen(NamedTuple):
    values: np.ndarray   # real, ascending
    vectors: np.ndarray  # orthonormal columns, matching order


def hermitian_eigendecomposition(mat) -> HermitianEigen:
    """Eigendecompose a Hermitian matrix, symmetrizing (M + M†)/2 first."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NonSquareInput(f"expected a square matrix, got shape {mat.shape}")
    deviation = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if deviation > HERMITICITY_ATOL:
        raise NonHermitianInput(
            f"max |M - M†| = {deviation:.3e} exceeds {HERMITICITY_ATOL:.0e}"
        )
    values, vectors = np.linalg.eigh((mat + mat.conj().T) / 2)
    return HermitianEigen(values, vectors)


def trace_norm(mat) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    values, _ = hermitian_eigendecomposition(mat)
    return float(np.abs(values).sum())


def operator_norm(mat) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    values, _ = hermitian_eigendecomposition(mat)
    return float(np.abs(values).max())


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, first argument's indices major."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(mat, dims, keep) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``dims`` are the factor dimensions of the square matrix ``mat``
    (their product must equal its side length); ``keep`` is a nonempty
    set of factor indices that survive, in their original order.
    """
    mat = np.asarray(mat, dtype=complex)
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if mat.ndim != 2 or mat.shape != (total, total):
        raise DimensionMismatch(
            f"matrix shape {mat.shape} incompatible with factor dims {dims}"
        )
    keep = sorted({int(k) for k in keep})
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionMismatch(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(mat.reshape(dims + dims), row + col, out)
    side = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(side, side)


def swap_operator(d: int) -> np.ndarray:
    """The operator exchanging two d-dimensional factors: W|a>|b> = |b>|a>."""
    w = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            w[i * d + j, j * d + i] = 1.0
    return w


def embed_factor(op, dims, target) -> np.ndarray:
    """Pad a single-factor operator with identities on all other factors."""
    dims = tuple(int(d) for d in dims)
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[target], dims[target]):
        raise DimensionMismatch(
            f"operator shape {op.shape} does not match factor {target} of dims {dims}"
        )
    pre = int(np.prod(dims[:target])) if target > 0 else 1
    post = int(np.prod(dims[target + 1:])) if target + 1 < len(dims) else 1
    return np.kron(np.kron(np.eye(pre), op), np.eye(post))


def psd_rank(mat, cutoff: float = EIGENVALUE_CUTOFF) -> int:
    """Rank of a Hermitian matrix with eigenvalues below ``cutoff`` zeroed."""
    values = np.linalg.eigvalsh(np.asarray(mat, dtype=complex))
    return int(np.count_nonzero(np.abs(values) > cutoff))
