"""Optimized measurement-induced disturbance for states and ensembles.

The central quantity is the minimum, over complete projective
measurements Pi on a chosen set of tensor factors, of the average
disturbance

    Q = min_Pi  sum_i p_i D(rho_i, Pi[rho_i])

of an ensemble {(p_i, rho_i)}, with D either the trace distance or the
relative entropy. For a single pure bipartite state under one-sided
(equivalently, two-sided) measurement the trace-distance minimum has a
closed form: it is the unique c >= 0 solving

    sum_i p_i / (c + p_i) = 1

over the nonzero Schmidt probabilities p_i, and it is attained by
measuring in the local Schmidt basis. That root, computed by
``entanglement_of_disturbance``, is an entanglement monotone. The general
ensemble case has no known closed form and is handled by a
derivative-free simplex search over measurement bases with deterministic
warm starts anchoring the proven-optimal cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize as _nelder_mead

from . import linalg, measure
from .errors import (
    DimensionMismatch,
    DomainError,
    InvalidDistribution,
    InvalidKrausSet,
    OptimizerFailure,
    ReportInvariantViolation,
)
from .measure import MeasurementScope, ProjectiveMeasurement
from .states import Ensemble, PureState, sample_haar_state, sample_haar_unitary, schmidt_decompose

DISTANCES = ("trace", "relative-entropy")


@dataclass(frozen=True)
class OptimizerConfig:
    """Budget for the measurement-basis search."""

    restarts: int = 16
    max_iterations: int = 2000
    tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1 or self.tolerance <= 0:
            raise DomainError("optimizer budget fields must be positive")


@dataclass
class DisturbanceReport:
    """Result of a quantumness minimization."""

    value: float
    optimal_measurements: list[ProjectiveMeasurement]
    scope: MeasurementScope
    distance: str
    restarts_used: int
    best_restart_iterations: int
    converged: bool

    def validate(self, ensemble: Ensemble) -> "DisturbanceReport":
        if self.value < -1e-9:
            raise ReportInvariantViolation(f"negative disturbance value {self.value}")
        again = average_disturbance(ensemble, self.optimal_measurements, self.scope, self.distance)
        if abs(again - self.value) > 1e-7:
            raise ReportInvariantViolation(
                f"re-evaluation {again} drifts from reported value {self.value}"
            )
        return self


def _check_distance(distance: str) -> None:
    if distance not in DISTANCES:
        raise DomainError(f"unknown distance {distance!r}; expected one of {DISTANCES}")


def _raw_average(members, dims, targets, bases, distance, base_entropies=None) -> float:
    total = 0.0
    for k, (p, mat) in enumerate(members):
        out = measure._apply_bases(mat, dims, targets, bases)
        if distance == "trace":
            term = 0.5 * float(np.abs(np.linalg.eigvalsh(mat - out)).sum())
        else:
            before = base_entropies[k] if base_entropies is not None else measure._entropy_raw(mat)
            term = max(0.0, measure._entropy_raw(out) - before)
        total += p * term
    return float(total)


def average_disturbance(ensemble: Ensemble, measurements, scope: MeasurementScope,
                        distance: str = "trace") -> float:
    """Average disturbance sum_i p_i D(rho_i, Pi[rho_i]) at a fixed
    measurement choice (one ProjectiveMeasurement per scope target).

    The relative-entropy branch uses S(r||Pi[r]) = S(Pi[r]) - S(r), which
    is finite for every complete projective measurement.
    """
    _check_distance(distance)
    if isinstance(measurements, ProjectiveMeasurement):
        measurements = [measurements]
    dims = ensemble.dims
    scope.check_against(dims)
    if len(measurements) != len(scope.targets):
        raise DimensionMismatch(
            f"{len(measurements)} measurements for {len(scope.targets)} scope targets"
        )
    for target, meas in zip(scope.targets, measurements):
        if meas.dim != dims[target]:
            raise DimensionMismatch(
                f"measurement dim {meas.dim} does not match factor {target} of dims {dims}"
            )
    members = [(p, s.matrix) for p, s in ensemble.entries]
    bases = [m.basis for m in measurements]
    value = _raw_average(members, dims, scope.targets, bases, distance)
    if not math.isfinite(value):
        raise ReportInvariantViolation("average disturbance is not finite")
    return value


def _hermitian_from_params(x: np.ndarray, d: int) -> np.ndarray:
    h = np.zeros((d, d), dtype=complex)
    h[np.diag_indices(d)] = x[:d]
    if d > 1:
        m = d * (d - 1) // 2
        iu = np.triu_indices(d, 1)
        h[iu] = x[d:d + m] + 1j * x[d + m:d + 2 * m]
        h[(iu[1], iu[0])] = np.conj(h[iu])
    return h


def _unitary_from_params(x: np.ndarray, d: int) -> np.ndarray:
    w, v = np.linalg.eigh(_hermitian_from_params(x, d))
    return (v * np.exp(1j * w)) @ v.conj().T


class SearchResult(NamedTuple):
    value: float
    bases: list[np.ndarray]
    restarts_used: int
    best_iterations: int
    converged: bool


def optimize_measurement_bases(objective: Callable[[list[np.ndarray]], float],
                               target_dims: Sequence[int],
                               config: OptimizerConfig | None = None,
                               warm_bases: Sequence[Sequence[np.ndarray]] = (),
                               maximize: bool = False) -> SearchResult:
    """Derivative-free search of ``objective`` over one unitary basis per
    target factor.

    Each start anchors a base point: every unitary is parametrized as
    base @ exp(iH) with H Hermitian from d² real parameters, so a warm
    start is evaluated exactly at its own basis. Deterministic warm
    starts come first; Haar-random bases fill the remaining restart
    budget. All target generators are optimized jointly in one parameter
    vector (alternating optimization can stall on symmetric instances).
    """
    config = config or OptimizerConfig()
    rng = np.random.default_rng(config.seed)
    sign = -1.0 if maximize else 1.0
    target_dims = [int(d) for d in target_dims]
    sizes = [d * d for d in target_dims]
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    n_params = int(offsets[-1])

    def build(x: np.ndarray, anchors) -> list[np.ndarray]:
        return [anchors[i] @ _unitary_from_params(x[offsets[i]:offsets[i + 1]], d)
                for i, d in enumerate(target_dims)]

    def fun(x: np.ndarray, anchors) -> float:
        return sign * objective(build(x, anchors))

    starts = [[np.asarray(b, dtype=complex) for b in group] for group in warm_bases]
    while len(starts) < config.restarts:
        starts.append([sample_haar_unitary(d, rng) for d in target_dims])

    best = None
    best_fun = math.inf
    finite_values = []
    for anchors in starts:
        result = _nelder_mead(
            fun, np.zeros(n_params), args=(anchors,), method="Nelder-Mead",
            options={"maxiter": config.max_iterations,
                     "fatol": config.tolerance, "xatol": 1e-6},
        )
        if not math.isfinite(result.fun):
            continue
        finite_values.append(float(result.fun))
        if result.fun < best_fun:
            best_fun = float(result.fun)
            best = (result.x.copy(), anchors, int(result.nit))
    if best is None:
        raise OptimizerFailure("every restart produced a non-finite objective")
    x, anchors, iterations = best
    finite_values.sort()
    converged = len(finite_values) < 2 or (
        finite_values[1] - finite_values[0] <= 10 * config.tolerance
    )
    return SearchResult(sign * best_fun, build(x, anchors), len(starts), iterations, converged)


def _reduced_eigenbases(matrix: np.ndarray, dims, targets) -> list[np.ndarray]:
    bases = []
    for target in targets:
        sub = linalg.partial_trace(matrix, dims, [target])
        _, vectors = np.linalg.eigh((sub + sub.conj().T) / 2)
        bases.append(vectors)
    return bases


def _warm_starts(ensemble: Ensemble, scope: MeasurementScope) -> list[list[np.ndarray]]:
    dims = ensemble.dims
    targets = scope.targets
    starts = [[np.eye(dims[t], dtype=complex) for t in targets]]
    starts.append(_reduced_eigenbases(ensemble.average_matrix(), dims, targets))
    if len(ensemble.entries) == 1 and len(dims) == 2:
        mat = ensemble.entries[0][1].matrix
        purity = float(np.trace(mat @ mat).real)
        if purity >= 1.0 - 1e-9:
            w, v = np.linalg.eigh((mat + mat.conj().T) / 2)
            psi = PureState(dims, v[:, -1])
            sd = schmidt_decompose(psi, dims[0], dims[1])
            local = {0: sd.basis_a, 1: sd.basis_b}
            starts.append([local[t] for t in targets])
    return starts


def quantumness(ensemble: Ensemble, scope: MeasurementScope, distance: str = "trace",
                config: OptimizerConfig | None = None,
                extra_bases: Sequence[Sequence[np.ndarray]] = ()) -> DisturbanceReport:
    """Minimize the average disturbance of an ensemble over measurement
    bases on the scope targets.

    Warm starts always tried: the computational basis, the eigenbasis of
    the ensemble's average state reduced to each target, and, for a
    single pure bipartite member, its local Schmidt bases. ``converged``
    reports whether the two best restarts agree within 10x tolerance; a
    False value flags a possibly multimodal landscape, not an error.
    """
    _check_distance(distance)
    config = config or OptimizerConfig()
    dims = ensemble.dims
    scope.check_against(dims)
    members = [(p, s.matrix) for p, s in ensemble.entries]
    base_entropies = None
    if distance == "relative-entropy":
        base_entropies = [measure._entropy_raw(mat) for _, mat in members]

    def objective(bases: list[np.ndarray]) -> float:
        return _raw_average(members, dims, scope.targets, bases, distance, base_entropies)

    warm = _warm_starts(ensemble, scope) + [list(group) for group in extra_bases]
    search = optimize_measurement_bases(objective, [dims[t] for t in scope.targets],
                                        config, warm)
    return DisturbanceReport(
        value=search.value,
        optimal_measurements=[ProjectiveMeasurement(b) for b in search.bases],
        scope=scope,
        distance=distance,
        restarts_used=search.restarts_used,
        best_restart_iterations=search.best_iterations,
        converged=search.converged,
    )


def implicit_residual(c: float, probs) -> float:
    """sum_i p_i/(c + p_i) - 1 over entries above the zero cutoff;
    strictly decreasing in c >= 0."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > linalg.EIGENVALUE_CUTOFF]
    return float((p / (c + p)).sum() - 1.0)


def entanglement_of_disturbance(probs, atol: float = 1e-9) -> float:
    """The unique c >= 0 with sum_i p_i/(c + p_i) = 1.

    ``probs`` is renormalized internally after entries below 1e-12 are
    dropped. Solved by bisection on [0, 1]: the residual at 0 is the
    number of nonzero entries minus one (nonnegative) and at 1 it is
    negative, and the residual is strictly monotone, so bisection is
    unconditionally safe.
    """
    p = np.asarray(probs, dtype=float).ravel()
    if p.size == 0 or not np.all(np.isfinite(p)) or float(p.min(initial=0.0)) < -1e-12:
        raise InvalidDistribution(f"not a probability vector: {probs!r}")
    total = float(p.sum())
    if abs(total - 1.0) > atol:
        raise InvalidDistribution(f"probabilities sum to {total}, expected 1")
    p = p[p > 1e-12]
    if p.size <= 1:
        return 0.0
    p = p / p.sum()
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if float((p / (mid + p)).sum()) - 1.0 > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def edist_upper_bound(p1: float, rank: int) -> float:
    """Closed-form upper bound on the disturbance root in terms of the
    largest probability p1 and the number R of nonzero probabilities."""
    rank = int(rank)
    if rank < 1:
        raise DomainError(f"rank must be at least 1, got {rank}")
    if not (1.0 / rank - 1e-12 <= p1 <= 1.0 + 1e-12):
        raise DomainError(f"p1 = {p1} outside [1/{rank}, 1]")
    if rank == 1:
        return 0.0
    disc = (4 - 4 * p1 - 4 * rank + 4 * p1 * p1 * rank
            + rank * rank + 2 * p1 * rank * rank - 3 * p1 * p1 * rank * rank)
    disc = max(disc, 0.0)
    return (-2 + 2 * p1 + rank - p1 * rank + math.sqrt(disc)) / (2 * (rank - 1))


def edist_upper_bound_limit(p1: float) -> float:
    """Rank-independent limit of ``edist_upper_bound`` (R -> infinity)."""
    if not (-1e-12 <= p1 <= 1.0 + 1e-12):
        raise DomainError(f"p1 = {p1} outside [0, 1]")
    return 0.5 * (1 - p1 + math.sqrt(max(0.0, -3 * p1 * p1 + 1 + 2 * p1)))


def edist_lower_bound(p1: float, p2: float) -> float:
    """Lower bound on the disturbance root from the two largest
    probabilities p1 >= p2."""
    if p2 < -1e-12 or p1 < p2 - 1e-12 or p1 + p2 > 1.0 + 1e-12:
        raise DomainError(f"need p1 >= p2 >= 0 and p1 + p2 <= 1, got ({p1}, {p2})")
    disc = -3 * p1 * p1 + (p2 - 1) ** 2 + 2 * p1 * (1 + p2)
    return 0.5 * (1 - p1 - p2 + math.sqrt(max(0.0, disc)))


def edist_simple_lower(p1: float) -> float:
    """The loosest lower bound, 1 - p1 (set p2 = p1 above)."""
    if not (-1e-12 <= p1 <= 1.0 + 1e-12):
        raise DomainError(f"p1 = {p1} outside [0, 1]")
    return 1.0 - p1


def max_disturbance_bound(dims) -> float:
    """Largest possible trace-distance disturbance under complete
    projective measurements on factors of the given dimensions:
    1 - 1/prod(dims)."""
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 1:
        raise DomainError(f"measured dims must be positive, got {dims}")
    return 1.0 - 1.0 / float(np.prod(dims))


def classical_member_bound(q: float, dims) -> float:
    """Cap on ensemble disturbance when one member of weight q is left
    invariant by some measurement on the given factors."""
    if not (0.0 <= q <= 1.0):
        raise DomainError(f"weight q = {q} outside [0, 1]")
    return (1.0 - q) * max_disturbance_bound(dims)


def n_classical_bound(n: int, dims) -> float:
    """Cap when all n members are individually classical on the measured
    factors: (1 - 1/n)(1 - 1/prod(dims))."""
    n = int(n)
    if n < 1:
        raise DomainError(f"ensemble size must be at least 1, got {n}")
    return (1.0 - 1.0 / n) * max_disturbance_bound(dims)


def log_disturbance(q: float) -> float:
    """-log2(1 - q); maps the disturbance cap 1 - 1/d to log2(d)."""
    if not (0.0 <= q < 1.0):
        raise DomainError(f"log disturbance needs 0 <= q < 1, got {q}")
    return -math.log2(1.0 - q)


def haar_bounds(kind: str, d_a: int, d_b: int | None = None) -> tuple[float, float]:
    """Analytic bracket [lower, upper] for the average trace-distance
    disturbance of the uniform (Haar) pure-state ensemble.

    kinds: "single" (one factor of dimension d_a), "one-sided" (measure
    the d_a factor of a d_a x d_b pair), "two-sided" (measure both).
    """
    d_a = int(d_a)
    if kind == "single":
        lower = 1.0 - 2.0 / (d_a + 1)
    elif kind == "one-sided":
        if d_b is None:
            raise DomainError("one-sided bracket needs the spectator dimension d_b")
        lower = 1.0 - (int(d_b) + 1) / (d_a * int(d_b) + 1)
    elif kind == "two-sided":
        if d_b is None:
            raise DomainError("two-sided bracket needs both dimensions")
        lower = 1.0 - 2.0 / (d_a * int(d_b) + 1)
    else:
        raise DomainError(f"unknown bracket kind {kind!r}")
    return lower, math.sqrt(lower)


def haar_average_disturbance(dims, scope: MeasurementScope, n_samples: int,
                             rng: np.random.Generator) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the trace-distance
    disturbance of Haar-random pure states under a fixed computational
    measurement on the scope targets (by unitary invariance the basis
    choice does not matter)."""
    if n_samples < 2:
        raise DomainError("need at least 2 samples for a standard error")
    dims = tuple(int(d) for d in dims)
    scope.check_against(dims)
    total = int(np.prod(dims))
    values = np.empty(n_samples)
    for k in range(n_samples):
        amps = sample_haar_state(total, rng).amplitudes
        rho = np.outer(amps, amps.conj())
        out = rho
        for target in scope.targets:
            out = measure._dephase_computational(out, dims, target)
        values[k] = 0.5 * float(np.abs(np.linalg.eigvalsh(rho - out)).sum())
    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n_samples))
    return estimate, stderr


def random_kraus_set(d: int, n_outcomes: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Kraus operators cut as row blocks of a Haar-random isometry, so
    that sum_i C_i† C_i = 1 exactly (up to rounding)."""
    g = rng.standard_normal((n_outcomes * d, d)) + 1j * rng.standard_normal((n_outcomes * d, d))
    q, _ = np.linalg.qr(g)
    return [q[i * d:(i + 1) * d, :] for i in range(n_outcomes)]


def slocc_monotonicity_trial(psi: PureState, kraus_ops) -> tuple[float, float]:
    """Disturbance root of a bipartite pure state before, and on average
    after, a stochastic local operation on the first factor.

    Outcomes are |phi_i> = (C_i ⊗ 1)|psi>/sqrt(p_i) with probabilities
    p_i; outcomes below probability 1e-12 are skipped.
    """
    if len(psi.dims) != 2:
        raise DimensionMismatch(f"need a bipartite pure state, got dims {psi.dims}")
    d_a, d_b = psi.dims
    kraus_ops = [np.asarray(c, dtype=complex) for c in kraus_ops]
    resolution = sum(c.conj().T @ c for c in kraus_ops)
    if float(np.max(np.abs(resolution - np.eye(d_a)))) > 1e-8:
        raise InvalidKrausSet("Kraus operators do not sum to the identity")
    coeff = psi.amplitudes.reshape(d_a, d_b)
    before = entanglement_of_disturbance(
        np.linalg.svd(coeff, compute_uv=False) ** 2, atol=1e-6)
    after = 0.0
    for c in kraus_ops:
        mapped = c @ coeff
        p = float(np.linalg.norm(mapped) ** 2)
        if p < 1e-12:
            continue
        s = np.linalg.svd(mapped / math.sqrt(p), compute_uv=False)
        after += p * entanglement_of_disturbance(s ** 2, atol=1e-6)
    return before, after
