"""Quantum data hiding analysis.

A hiding pair is a pair of bipartite states that a global measurement
distinguishes almost perfectly while local operations with classical
communication (LOCC) barely tell them apart. Writing the global
distinguishability as 1 - epsilon and the LOCC one as delta, the hiding
capability of the pair is 1 - epsilon - delta.

The exact LOCC norm has no tractable characterization, so reports carry
a certified lower bound on delta obtained from one-way strategies that
start with a complete projective measurement on the first factor (the
receiver's optimal follow-up is folded into the trace norm of the
measured difference). Consequently ``capability_upper_estimate``
over-estimates the true capability. The estimate never exceeds twice the
one-sided ensemble quantumness of the equal-weight pair; that bound is
enforced on every report. Analytic values are attached where known
(symmetric/antisymmetric Werner pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, states
from .disturbance import (
    OptimizerConfig,
    optimize_measurement_bases,
    quantumness,
    _reduced_eigenbases,
)
from .errors import DimensionMismatch, DomainError, ReportInvariantViolation
from .measure import MeasurementScope, ProjectiveMeasurement, _apply_bases, trace_distance
from .states import Ensemble, QuantumState, sample_haar_state, sample_haar_unitary


@dataclass
class HidingReport:
    """Distinguishability budget of a candidate hiding pair.

    ``locc_lower_bound`` is a lower bound on delta (one-sided projective
    strategies only), so ``capability_upper_estimate`` = global minus
    that bound upper-estimates the true hiding capability. ``analytic``
    carries exact values when the pair admits them.
    """

    global_distance: float
    locc_lower_bound: float
    capability_upper_estimate: float
    ensemble_quantumness: float
    quantumness_bound: float
    analytic: dict | None = None

    def validate(self) -> "HidingReport":
        if not (0.0 <= self.locc_lower_bound <= self.global_distance + 1e-9):
            raise ReportInvariantViolation(
                f"LOCC bound {self.locc_lower_bound} outside [0, {self.global_distance}]"
            )
        if self.capability_upper_estimate > self.quantumness_bound + 1e-5:
            raise ReportInvariantViolation(
                f"capability estimate {self.capability_upper_estimate} exceeds "
                f"quantumness bound {self.quantumness_bound}"
            )
        return self


def projective_distinguishability(rho: QuantumState, sigma: QuantumState,
                                  scope: MeasurementScope,
                                  config: OptimizerConfig | None = None,
                                  extra_bases=()) -> tuple[float, list[ProjectiveMeasurement]]:
    """max over projective measurements on the scope targets of
    (1/2) ||Pi[rho - sigma]||_1, a lower bound on LOCC distinguishability."""
    if rho.dims != sigma.dims:
        raise DimensionMismatch(f"state dims differ: {rho.dims} vs {sigma.dims}")
    dims = rho.dims
    scope.check_against(dims)
    diff = rho.matrix - sigma.matrix

    def objective(bases):
        out = _apply_bases(diff, dims, scope.targets, bases)
        return 0.5 * float(np.abs(np.linalg.eigvalsh(out)).sum())

    warm = [[np.eye(dims[t], dtype=complex) for t in scope.targets]]
    warm.append(_reduced_eigenbases(diff, dims, scope.targets))
    warm.extend(list(group) for group in extra_bases)
    search = optimize_measurement_bases(objective, [dims[t] for t in scope.targets],
                                        config, warm, maximize=True)
    return search.value, [ProjectiveMeasurement(b) for b in search.bases]


def hiding_capability_bounds(rho: QuantumState, sigma: QuantumState,
                             config: OptimizerConfig | None = None) -> HidingReport:
    """Global distance, one-sided projective LOCC lower bound, and the
    ensemble-quantumness cap for a pair of bipartite states."""
    if rho.dims != sigma.dims:
        raise DimensionMismatch(f"state dims differ: {rho.dims} vs {sigma.dims}")
    if len(rho.dims) != 2:
        raise DimensionMismatch(f"hiding analysis needs bipartite states, got dims {rho.dims}")
    config = config or OptimizerConfig()
    scope = MeasurementScope.of(0)
    global_distance = trace_distance(rho, sigma)
    pair_report = quantumness(Ensemble.pair(rho, sigma), scope, "trace", config)
    optimal = [[m.basis for m in pair_report.optimal_measurements]]
    locc_lower, _ = projective_distinguishability(rho, sigma, scope, config,
                                                  extra_bases=optimal)
    locc_lower = min(locc_lower, global_distance)  # data processing, float hygiene
    report = HidingReport(
        global_distance=global_distance,
        locc_lower_bound=locc_lower,
        capability_upper_estimate=global_distance - locc_lower,
        ensemble_quantumness=pair_report.value,
        quantumness_bound=2.0 * pair_report.value,
    )
    return report.validate()


def werner_hiding_report(d: int, config: OptimizerConfig | None = None) -> HidingReport:
    """Report for the symmetric/antisymmetric pair (1 ± W)/(d(d ± 1)),
    with exact values attached.

    The pair is orthogonal, so the global distance is 1; the LOCC value
    is exactly 2/(d + 1) (local orthogonal projections attain it, and
    even measurements positive under partial transposition do no
    better), giving capability (d - 1)/(d + 1). The equal-weight
    ensemble quantumness is d/(2(d + 1)) in every one-sided basis.
    """
    if d < 2:
        raise DomainError("Werner pair needs local dimension >= 2")
    sym, anti = states.werner_states(d)
    report = hiding_capability_bounds(sym, anti, config)
    report.analytic = {
        "global_distance": 1.0,
        "locc_distance": 2.0 / (d + 1),
        "hiding_capability": (d - 1) / (d + 1),
        "ensemble_quantumness": d / (2.0 * (d + 1)),
        "quantumness_bound": d / (d + 1.0),
    }
    return report.validate()


def classical_hiding_limit(rank: int, eps: float) -> float:
    """Floor on LOCC distinguishability when one state of the pair is
    classical-quantum: 1 - sqrt(2 R eps), clamped below at 0.

    R is the lesser of the ranks of the classical state and of the other
    state dephased in the classical basis; eps is one minus the global
    distinguishability.
    """
    rank = int(rank)
    if rank < 1:
        raise DomainError(f"rank must be at least 1, got {rank}")
    if eps < 0:
        raise DomainError(f"eps must be nonnegative, got {eps}")
    return max(0.0, 1.0 - math.sqrt(2.0 * rank * eps))


def check_randomizing_pair(d: int, n: int, rng: np.random.Generator,
                           n_probes: int = 6) -> dict:
    """Build a random-unitary hiding pair and report its figures of merit.

    Returns epsilon = 1 - global distance (guaranteed at most n/d² by the
    rank of the hidden state), the hidden state's rank, and an empirical
    randomizing constant eta: d times the largest operator-norm deviation
    of the channel output from maximally mixed over Haar-random probe
    states. eta is a probe-based estimate, not the exact supremum.
    """
    if d < 2 or n < 1:
        raise DomainError("need d >= 2 and n >= 1")
    unitaries = [sample_haar_unitary(d, rng) for _ in range(n)]
    hidden, mixed = states.hiding_pair_from_unitaries(d, unitaries)
    epsilon = 1.0 - trace_distance(hidden, mixed)
    if epsilon > n / d ** 2 + 1e-9:
        raise ReportInvariantViolation(
            f"epsilon {epsilon} exceeds the rank bound {n / d ** 2}"
        )
    eta = 0.0
    target = np.eye(d) / d
    for _ in range(n_probes):
        amps = sample_haar_state(d, rng).amplitudes
        probe = np.outer(amps, amps.conj())
        out = sum(u @ probe @ u.conj().T for u in unitaries) / n
        eta = max(eta, d * linalg.operator_norm(out - target))
    return {
        "epsilon": float(epsilon),
        "eta_empirical": float(eta),
        "rank": linalg.psd_rank(hidden.matrix),
    }
