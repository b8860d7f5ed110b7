"""Projective measurement channels and state distance functionals.

A complete projective measurement with orthonormal basis {|k>} acts on a
density matrix as Pi[rho] = sum_k |k><k| rho |k><k|, i.e. it dephases the
state in that basis. Measurements here carry the basis as a unitary whose
columns are the measurement vectors, plus a scope naming the tensor
factors they act on.

Distance functionals, all base-2 where a logarithm appears:

    trace distance      D(r, s)  = ||r - s||_1 / 2
    relative entropy    S(r||s)  = Tr r (log2 r - log2 s)
    fidelity            F(r, s)  = Tr sqrt(sqrt(r) s sqrt(r))
    von Neumann entropy S(r)     = -Tr r log2 r

For any projective measurement, S(r||Pi[r]) = S(Pi[r]) - S(r); callers
that only ever compare a state with its own measured version should use
that identity (see the disturbance module) since it avoids logarithms of
nearly singular matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, DomainError, ScopeOutOfRange
from .states import QuantumState


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete projective measurement; columns of ``basis`` are the
    rank-one projector vectors."""

    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", np.asarray(self.basis, dtype=complex))
        if self.basis.ndim != 2 or self.basis.shape[0] != self.basis.shape[1]:
            raise DomainError(f"measurement basis must be square, got {self.basis.shape}")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def validate(self, atol: float = 1e-9) -> "ProjectiveMeasurement":
        gram = self.basis.conj().T @ self.basis
        dev = float(np.max(np.abs(gram - np.eye(self.dim))))
        if dev > atol:
            raise DomainError(f"measurement basis not unitary: deviation {dev:.3e}")
        return self

    @classmethod
    def computational(cls, d: int) -> "ProjectiveMeasurement":
        return cls(np.eye(d, dtype=complex))

    @classmethod
    def eigenbasis_of(cls, mat) -> "ProjectiveMeasurement":
        """Measurement in the eigenbasis of a Hermitian matrix."""
        _, vectors = linalg.hermitian_eigendecomposition(mat)
        return cls(vectors)


@dataclass(frozen=True)
class MeasurementScope:
    """Which tensor factors a measurement acts on (stored sorted)."""

    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(sorted(int(t) for t in self.targets))
        if not targets:
            raise ScopeOutOfRange("measurement scope is empty")
        if len(set(targets)) != len(targets):
            raise ScopeOutOfRange(f"duplicate scope targets {targets}")
        if targets[0] < 0:
            raise ScopeOutOfRange(f"negative scope target in {targets}")
        object.__setattr__(self, "targets", targets)

    @classmethod
    def of(cls, *targets: int) -> "MeasurementScope":
        return cls(tuple(targets))

    @classmethod
    def all_factors(cls, n: int) -> "MeasurementScope":
        return cls(tuple(range(n)))

    def check_against(self, dims) -> None:
        if self.targets[-1] >= len(dims):
            raise ScopeOutOfRange(f"scope {self.targets} out of range for dims {tuple(dims)}")


def _dephase_computational(mat: np.ndarray, dims, target: int) -> np.ndarray:
    """Zero every element whose row and column index differ on ``target``."""
    pre = int(np.prod(dims[:target])) if target > 0 else 1
    d = dims[target]
    post = int(np.prod(dims[target + 1:])) if target + 1 < len(dims) else 1
    shaped = mat.reshape(pre, d, post, pre, d, post)
    eye = np.eye(d)[None, :, None, None, :, None]
    return (shaped * eye).reshape(mat.shape)


def _dephase_axes(shaped: np.ndarray, basis: np.ndarray, n: int, target: int) -> np.ndarray:
    # sum_k (|b_k><b_k| ⊗ 1) rho (|b_k><b_k| ⊗ 1) on the target row/col axes
    labels = list(range(2 * n))
    k = 2 * n
    rest = [ax for ax in labels if ax not in (target, n + target)]
    inner = np.einsum(basis.conj(), [target, k], shaped, labels, basis, [n + target, k],
                      [k] + rest)
    return np.einsum(basis, [target, k], basis.conj(), [n + target, k], inner, [k] + rest,
                     labels)


def _apply_bases(mat: np.ndarray, dims, targets, bases) -> np.ndarray:
    """Dephase ``mat`` in the given basis on each target factor.

    Single-target channels commute, so the composition order is
    irrelevant; targets are processed ascending for determinism.
    """
    n = len(dims)
    out = mat.reshape(tuple(dims) * 2)
    for target, basis in sorted(zip(targets, bases), key=lambda pair: pair[0]):
        out = _dephase_axes(out, np.asarray(basis, dtype=complex), n, target)
    return out.reshape(mat.shape)


def apply_projective(state: QuantumState, measurements, scope: MeasurementScope) -> QuantumState:
    """Apply per-target complete projective measurements to a state.

    ``measurements`` is one ProjectiveMeasurement per scope target, in
    the scope's (sorted) order; a single measurement may be passed bare.
    """
    if isinstance(measurements, ProjectiveMeasurement):
        measurements = [measurements]
    scope.check_against(state.dims)
    if len(measurements) != len(scope.targets):
        raise DimensionMismatch(
            f"{len(measurements)} measurements for {len(scope.targets)} scope targets"
        )
    for target, meas in zip(scope.targets, measurements):
        if meas.dim != state.dims[target]:
            raise DimensionMismatch(
                f"measurement dim {meas.dim} does not match factor {target} "
                f"of dims {state.dims}"
            )
    out = _apply_bases(state.matrix, state.dims, scope.targets, [m.basis for m in measurements])
    return QuantumState(state.dims, (out + out.conj().T) / 2)


def _check_same_dims(rho: QuantumState, sigma: QuantumState) -> None:
    if rho.dims != sigma.dims:
        raise DimensionMismatch(f"state dims differ: {rho.dims} vs {sigma.dims}")


def _trace_distance_raw(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())


def trace_distance(rho: QuantumState, sigma: QuantumState) -> float:
    """Half the trace norm of the difference; lies in [0, 1] for states."""
    _check_same_dims(rho, sigma)
    return _trace_distance_raw(rho.matrix, sigma.matrix)


def _entropy_raw(mat: np.ndarray) -> float:
    w = np.linalg.eigvalsh(mat)
    w = w[w > linalg.EIGENVALUE_CUTOFF]
    if w.size == 0:
        return 0.0
    return float(-(w * np.log2(w)).sum())


def von_neumann_entropy(rho: QuantumState) -> float:
    """Entropy in bits; 0 log 0 counts as 0."""
    return max(0.0, _entropy_raw(rho.matrix))


def relative_entropy(rho: QuantumState, sigma: QuantumState) -> float:
    """S(rho||sigma) in bits, or +inf when rho's support leaks outside
    sigma's support (eigenvalue cutoff 1e-12, projection residual 1e-8)."""
    _check_same_dims(rho, sigma)
    wr, vr = np.linalg.eigh((rho.matrix + rho.matrix.conj().T) / 2)
    ws, vs = np.linalg.eigh((sigma.matrix + sigma.matrix.conj().T) / 2)
    cutoff = linalg.EIGENVALUE_CUTOFF
    null = vs[:, ws <= cutoff]
    if null.shape[1]:
        supported = vr[:, wr > cutoff]
        residual = np.linalg.norm(null.conj().T @ supported, axis=0)
        if residual.size and float(residual.max()) > 1e-8:
            return math.inf
    keep_r = wr > cutoff
    term_r = float((wr[keep_r] * np.log2(wr[keep_r])).sum())
    keep_s = ws > cutoff
    log_sigma = (vs[:, keep_s] * np.log2(ws[keep_s])) @ vs[:, keep_s].conj().T
    term_s = float(np.trace(rho.matrix @ log_sigma).real)
    return max(0.0, term_r - term_s)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((mat + mat.conj().T) / 2)
    # eigenvalue noise of order machine epsilon would inflate sqrt values
    # to ~1e-8; clip it to exact zero first
    w[w < 1e-14] = 0.0
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: QuantumState, sigma: QuantumState) -> float:
    """Uhlmann fidelity, evaluated as the trace norm of sqrt(r) sqrt(s)
    (singular values of the product; symmetric and stable for
    rank-deficient inputs)."""
    _check_same_dims(rho, sigma)
    product = _psd_sqrt(rho.matrix) @ _psd_sqrt(sigma.matrix)
    singulars = np.linalg.svd(product, compute_uv=False)
    return float(min(1.0, singulars.sum()))


def overlap_bounds(rho: QuantumState, sigma: QuantumState) -> tuple[float, float, float]:
    """Sandwich F²/min(rank r, rank s) <= Tr(rho sigma) <= F²."""
    _check_same_dims(rho, sigma)
    f2 = fidelity(rho, sigma) ** 2
    overlap = float(np.trace(rho.matrix @ sigma.matrix).real)
    r = min(linalg.psd_rank(rho.matrix), linalg.psd_rank(sigma.matrix))
    return f2 / r, overlap, f2
