"""Quantum states, ensembles, named constructors, and random sampling.

States are dense density matrices tagged with their tensor-factor
dimensions. Pure states are kept as amplitude vectors until a density
matrix is needed. JSON serialization follows the schema

    state:    {"dims": [d1, ...], "matrix": [[[re, im], ...], ...]}
    ensemble: {"entries": [{"p": w, "state": {...}}, ...]}

with the matrix stored row-major and each entry as a [real, imag] pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    BlochVectorTooLong,
    DimensionMismatch,
    DomainError,
    NotAQubit,
)

STATE_ATOL = 1e-9

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Density matrix on a tensor product of finite-dimensional factors."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        total = int(np.prod(self.dims))
        if self.matrix.ndim != 2 or self.matrix.shape != (total, total):
            raise DimensionMismatch(
                f"matrix shape {self.matrix.shape} incompatible with dims {self.dims}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, atol: float = STATE_ATOL) -> "QuantumState":
        """Check Hermiticity, positivity, and unit trace; return self."""
        m = self.matrix
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > atol:
            raise DomainError(f"state not Hermitian: deviation {dev:.3e}")
        smallest = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
        if smallest < -atol:
            raise DomainError(f"state not positive: smallest eigenvalue {smallest:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > atol:
            raise DomainError(f"state trace {tr} differs from 1")
        return self

    def reduced(self, keep) -> "QuantumState":
        """Partial trace keeping the listed factors."""
        keep = sorted({int(k) for k in keep})
        sub = linalg.partial_trace(self.matrix, self.dims, keep)
        return QuantumState(tuple(self.dims[k] for k in keep), sub)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit amplitude vector on a tensor product of factors."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=complex).ravel())
        total = int(np.prod(self.dims))
        if self.amplitudes.shape != (total,):
            raise DimensionMismatch(
                f"amplitude length {self.amplitudes.shape} incompatible with dims {self.dims}"
            )

    def validate(self, atol: float = 1e-10) -> "PureState":
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > atol:
            raise DomainError(f"amplitude norm {norm} differs from 1")
        return self

    def to_density(self) -> QuantumState:
        return QuantumState(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(eq=False)
class Ensemble:
    """Probability-weighted states on a common factor structure."""

    entries: list[tuple[float, QuantumState]]

    @property
    def dims(self) -> tuple[int, ...]:
        return self.entries[0][1].dims

    def validate(self, atol: float = STATE_ATOL) -> "Ensemble":
        if not self.entries:
            raise DomainError("ensemble has no entries")
        probs = np.array([p for p, _ in self.entries], dtype=float)
        if probs.min() < -atol:
            raise DomainError(f"negative ensemble probability {probs.min():.3e}")
        if abs(probs.sum() - 1.0) > atol:
            raise DomainError(f"ensemble probabilities sum to {probs.sum()}")
        dims = self.dims
        for _, state in self.entries:
            if state.dims != dims:
                raise DimensionMismatch(f"mixed factor dims {state.dims} vs {dims}")
        return self

    def average_matrix(self) -> np.ndarray:
        out = np.zeros_like(self.entries[0][1].matrix)
        for p, state in self.entries:
            out = out + p * state.matrix
        return out

    def average_state(self) -> QuantumState:
        return QuantumState(self.dims, self.average_matrix())

    @classmethod
    def single(cls, state: QuantumState) -> "Ensemble":
        return cls([(1.0, state)])

    @classmethod
    def pair(cls, rho: QuantumState, sigma: QuantumState) -> "Ensemble":
        """Equal-weight two-state ensemble."""
        return cls([(0.5, rho), (0.5, sigma)])


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Descending Schmidt probabilities with the two local bases."""

    probs: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    def reconstruct(self) -> PureState:
        d_a = self.basis_a.shape[0]
        d_b = self.basis_b.shape[0]
        amps = np.zeros(d_a * d_b, dtype=complex)
        for i, p in enumerate(self.probs):
            if p <= 0.0:
                continue
            amps += np.sqrt(p) * np.kron(self.basis_a[:, i], self.basis_b[:, i])
        return PureState((d_a, d_b), amps)


def schmidt_decompose(psi: PureState, d_a: int, d_b: int) -> SchmidtDecomposition:
    """Schmidt decomposition of a bipartite pure state via SVD.

    Probabilities below 1e-12 are clamped to exactly zero. Under
    degenerate Schmidt probabilities the local bases carry an arbitrary
    rotation, so only the probability multiset and the reconstruction
    are meaningful to compare.
    """
    if tuple(psi.dims) != (int(d_a), int(d_b)):
        raise DimensionMismatch(f"state dims {psi.dims} do not match ({d_a}, {d_b})")
    coeff = psi.amplitudes.reshape(d_a, d_b)
    u, s, vh = np.linalg.svd(coeff)
    probs = s ** 2
    probs[probs < 1e-12] = 0.0
    return SchmidtDecomposition(probs, u, vh.T)


def sample_haar_state(d: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state: a normalized vector of complex Gaussians.

    The global phase is fixed by making the largest amplitude real and
    positive; the induced distribution on projectors is unchanged.
    """
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    v *= np.conj(v[k]) / np.abs(v[k])
    return PureState((d,), v)


def sample_haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix with the
    R-diagonal phases folded back in (plain QR alone is not Haar)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def sample_mixed_state(dims, rng: np.random.Generator, rank: int | None = None) -> QuantumState:
    """Random density matrix GG†/Tr(GG†) from a complex Ginibre G."""
    dims = tuple(int(d) for d in dims)
    d = int(np.prod(dims))
    r = d if rank is None else int(rank)
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    return QuantumState(dims, m / np.trace(m).real)


def bloch_from_qubit(state: QuantumState) -> np.ndarray:
    """Bloch vector (x, y, z) of a single-qubit state."""
    if state.dim != 2 or len(state.dims) != 1:
        raise NotAQubit(f"expected a single factor of dimension 2, got dims {state.dims}")
    m = state.matrix
    return np.array([
        np.trace(m @ _SIGMA_X).real,
        np.trace(m @ _SIGMA_Y).real,
        np.trace(m @ _SIGMA_Z).real,
    ])


def qubit_from_bloch(v) -> QuantumState:
    """Qubit state (1 + v·sigma)/2 for a Bloch vector of norm at most 1."""
    v = np.asarray(v, dtype=float).ravel()
    if v.shape != (3,):
        raise DomainError(f"Bloch vector must have 3 components, got {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm > 1.0 + 1e-9:
        raise BlochVectorTooLong(f"Bloch vector norm {norm} exceeds 1")
    m = 0.5 * (np.eye(2, dtype=complex) + v[0] * _SIGMA_X + v[1] * _SIGMA_Y + v[2] * _SIGMA_Z)
    return QuantumState((2,), m)


def maximally_entangled(d: int) -> PureState:
    """The state (1/sqrt(d)) sum_i |i>|i> on two d-dimensional factors."""
    return PureState((d, d), np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d))


def flagged_state(ensemble: Ensemble) -> QuantumState:
    """Attach an orthogonal flag factor recording each member's index:
    sum_i p_i rho_i ⊗ |i><i|."""
    n = len(ensemble.entries)
    dims = ensemble.dims + (n,)
    total = int(np.prod(dims))
    out = np.zeros((total, total), dtype=complex)
    for i, (p, state) in enumerate(ensemble.entries):
        flag = np.zeros((n, n), dtype=complex)
        flag[i, i] = 1.0
        out += p * np.kron(state.matrix, flag)
    return QuantumState(dims, out)


def werner_states(d: int) -> tuple[QuantumState, QuantumState]:
    """Normalized projectors onto the symmetric and antisymmetric
    subspaces of two d-dimensional factors: (1 ± W)/(d(d ± 1))."""
    if d < 2:
        raise DomainError("symmetric/antisymmetric pair needs local dimension >= 2")
    w = linalg.swap_operator(d)
    eye = np.eye(d * d, dtype=complex)
    sym = QuantumState((d, d), (eye + w) / (d * (d + 1)))
    anti = QuantumState((d, d), (eye - w) / (d * (d - 1)))
    return sym, anti


def max_cq_qubit_state() -> QuantumState:
    """The two-qubit classical-quantum state (1/2)|0><0|⊗|0><0| +
    (1/2)|+><+|⊗|1><1|, classical on the second factor."""
    ket0 = np.array([1.0, 0.0], dtype=complex)
    ket1 = np.array([0.0, 1.0], dtype=complex)
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
    m = 0.5 * np.kron(np.outer(ket0, ket0.conj()), np.outer(ket0, ket0.conj()))
    m += 0.5 * np.kron(np.outer(plus, plus.conj()), np.outer(ket1, ket1.conj()))
    return QuantumState((2, 2), m)


def hiding_pair_from_unitaries(d: int, unitaries) -> tuple[QuantumState, QuantumState]:
    """Pair (one-sided random-unitary mixture of a maximally entangled
    state, maximally mixed state) built from the given unitaries."""
    unitaries = list(unitaries)
    n = len(unitaries)
    total = d * d
    hidden = np.zeros((total, total), dtype=complex)
    for u in unitaries:
        vec = np.asarray(u, dtype=complex).reshape(-1) / np.sqrt(d)
        hidden += np.outer(vec, vec.conj())
    hidden /= n
    mixed = np.eye(total, dtype=complex) / total
    return QuantumState((d, d), hidden), QuantumState((d, d), mixed)


def randomized_hiding_pair(d: int, n: int, rng: np.random.Generator) -> tuple[QuantumState, QuantumState]:
    """Hiding pair from n independent Haar-random unitaries; the first
    state has rank at most n, the second is maximally mixed."""
    if d < 2 or n < 1:
        raise DomainError("need d >= 2 and n >= 1")
    unitaries = [sample_haar_unitary(d, rng) for _ in range(n)]
    return hiding_pair_from_unitaries(d, unitaries)


def state_to_dict(state: QuantumState) -> dict:
    return {
        "dims": list(state.dims),
        "matrix": [[[z.real, z.imag] for z in row] for row in state.matrix],
    }


def state_from_dict(obj) -> QuantumState:
    if not isinstance(obj, dict) or "dims" not in obj or "matrix" not in obj:
        raise ValueError("state object must carry 'dims' and 'matrix'")
    dims = tuple(int(d) for d in obj["dims"])
    rows = obj["matrix"]
    try:
        matrix = np.array([[complex(e[0], e[1]) for e in row] for row in rows])
    except (TypeError, IndexError) as exc:
        raise ValueError(f"malformed matrix entries: {exc}") from exc
    try:
        state = QuantumState(dims, matrix)
    except DimensionMismatch as exc:
        # a dims/matrix disagreement in a file is a schema problem
        raise ValueError(str(exc)) from exc
    return state.validate()


def ensemble_to_dict(ensemble: Ensemble) -> dict:
    return {
        "entries": [{"p": float(p), "state": state_to_dict(s)} for p, s in ensemble.entries]
    }


def ensemble_from_dict(obj) -> Ensemble:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("ensemble object must carry 'entries'")
    entries = []
    for item in obj["entries"]:
        if "p" not in item or "state" not in item:
            raise ValueError("ensemble entry must carry 'p' and 'state'")
        entries.append((float(item["p"]), state_from_dict(item["state"])))
    return Ensemble(entries).validate()
