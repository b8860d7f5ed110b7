"""Closed-form and grid-search quantumness for qubit ensembles.

A complete projective measurement of a qubit dephases along an axis v on
the Bloch sphere, sending Bloch vector r to (v·r)v. Its trace-distance
disturbance is therefore ||r|| |sin(angle(v, r))| / 2, and the ensemble
quantumness becomes a geometric minimization over the unit sphere:

    Q = (1/2) min_v sum_i p_i ||r_i|| |sin(angle(v, r_i))|.

For two-member ensembles the minimum has a closed form; larger ensembles
are handled with a Fibonacci-sphere scan followed by a local simplex
polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _nelder_mead

from . import states
from .errors import DomainError

_GRID_POINTS = 2048


@dataclass(eq=False)
class QubitEnsemble:
    """Probability-weighted qubit states in Bloch form."""

    entries: list[tuple[float, np.ndarray]]

    def __post_init__(self):
        self.entries = [(float(p), np.asarray(r, dtype=float).ravel()) for p, r in self.entries]

    def validate(self, atol: float = 1e-9) -> "QubitEnsemble":
        if not self.entries:
            raise DomainError("qubit ensemble has no entries")
        probs = np.array([p for p, _ in self.entries])
        if probs.min() < -atol or abs(probs.sum() - 1.0) > atol:
            raise DomainError(f"bad probability vector {probs}")
        for _, r in self.entries:
            if r.shape != (3,):
                raise DomainError(f"Bloch vector has shape {r.shape}, expected (3,)")
            if np.linalg.norm(r) > 1.0 + 1e-9:
                raise DomainError(f"Bloch vector {r} longer than 1")
        return self

    def to_ensemble(self) -> states.Ensemble:
        """Density-matrix form, for cross-checks against the general optimizer."""
        return states.Ensemble([(p, states.qubit_from_bloch(r)) for p, r in self.entries])


def _sine_angle(a: np.ndarray, b: np.ndarray) -> float:
    """|sin| of the angle between two vectors via atan2 of cross/dot
    magnitudes (stable near collinearity); 0 if either vector vanishes."""
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-15 or nb < 1e-15:
        return 0.0
    angle = math.atan2(float(np.linalg.norm(np.cross(a, b))), float(np.dot(a, b)))
    return abs(math.sin(angle))


def two_state_formula(p: float, r1, r2) -> float:
    """Quantumness of {(p, r1), (1-p, r2)}:
    (1/2) |sin(angle(r1, r2))| min(p ||r1||, (1-p) ||r2||).

    A zero Bloch vector is invariant under every projective measurement,
    so its sine term counts as 0.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    n1, n2 = float(np.linalg.norm(r1)), float(np.linalg.norm(r2))
    if n1 < 1e-15 or n2 < 1e-15:
        return 0.0
    return 0.5 * _sine_angle(r1, r2) * min(p * n1, (1.0 - p) * n2)


def _objective(v: np.ndarray, probs: np.ndarray, vectors: np.ndarray) -> float:
    # ||v x r|| = ||r|| sin(angle) for unit v
    cross = np.cross(v, vectors)
    return 0.5 * float(probs @ np.linalg.norm(cross, axis=1))


def _fibonacci_directions(n: int) -> np.ndarray:
    i = np.arange(n)
    golden = (1 + math.sqrt(5)) / 2
    z = 1.0 - (2 * i + 1.0) / n
    azimuth = 2 * math.pi * i / golden
    radial = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.stack([radial * np.cos(azimuth), radial * np.sin(azimuth), z], axis=1)


def _from_angles(angles: np.ndarray) -> np.ndarray:
    theta, phi = angles
    return np.array([math.sin(theta) * math.cos(phi),
                     math.sin(theta) * math.sin(phi),
                     math.cos(theta)])


_REFINE_CANDIDATES = 12


def _grid_minimum(probs: np.ndarray, vectors: np.ndarray) -> tuple[float, np.ndarray]:
    dirs = _fibonacci_directions(_GRID_POINTS)
    # one cross product batch for the whole grid: (N, n, 3)
    cross = np.cross(dirs[:, None, :], vectors[None, :, :])
    values = 0.5 * (np.linalg.norm(cross, axis=2) @ probs)

    def fun(angles):
        return _objective(_from_angles(angles), probs, vectors)

    # polish the several best grid points; a single candidate can sit in
    # the basin of a nearby, slightly worse local minimum
    order = np.argsort(values)[:_REFINE_CANDIDATES]
    best_value = float(values[order[0]])
    best_dir = dirs[order[0]]
    for idx in order:
        v0 = dirs[idx]
        theta0 = math.acos(min(1.0, max(-1.0, v0[2])))
        phi0 = math.atan2(v0[1], v0[0])
        result = _nelder_mead(fun, np.array([theta0, phi0]), method="Nelder-Mead",
                              options={"maxiter": 400, "fatol": 1e-13, "xatol": 1e-9})
        if result.fun < best_value:
            best_value = float(result.fun)
            v = _from_angles(result.x)
            best_dir = v / np.linalg.norm(v)
    return best_value, best_dir


def qubit_ensemble_quantumness(ensemble: QubitEnsemble,
                               method: str = "auto") -> tuple[float, np.ndarray]:
    """Minimum average disturbance of a qubit ensemble and a measurement
    axis achieving it (within 1e-8).

    method: "auto" picks the two-member closed form when it applies and
    the sphere scan otherwise; "grid" forces the scan (used to cross-check
    the closed form); "closed-form" forces the two-member formula.
    """
    if method not in ("auto", "grid", "closed-form"):
        raise DomainError(f"unknown method {method!r}")
    ensemble.validate()
    if method == "closed-form" and len(ensemble.entries) != 2:
        raise DomainError("closed form only covers two-member ensembles")
    probs = np.array([p for p, _ in ensemble.entries])
    vectors = np.array([r for _, r in ensemble.entries])

    weighted = probs[:, None] * vectors
    lengths = np.linalg.norm(weighted, axis=1)
    if lengths.max() < 1e-15:
        return 0.0, np.array([0.0, 0.0, 1.0])
    reference = vectors[int(np.argmax(lengths))]
    cross_norms = np.linalg.norm(np.cross(reference, vectors), axis=1)
    if method != "grid" and float(cross_norms.max()) < 1e-15:
        # all members commute: measure along the common axis
        return 0.0, reference / np.linalg.norm(reference)

    if method == "closed-form" or (method == "auto" and len(ensemble.entries) == 2):
        value = two_state_formula(probs[0], vectors[0], vectors[1])
        axis = reference / np.linalg.norm(reference)
        return value, axis
    return _grid_minimum(probs, vectors)
