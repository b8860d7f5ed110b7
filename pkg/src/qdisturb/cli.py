"""Command-line front end.

Subcommands
    edist        closed-form disturbance root of a probability vector or
                 of a pure bipartite state file, with analytic bounds
    quantumness  optimized ensemble quantumness of a state/ensemble file
    haar         Monte Carlo average disturbance of the uniform ensemble
                 against its analytic bracket
    hiding       hiding-pair analysis (Werner pair, explicit pair, or
                 random-unitary construction)
    figure1      disturbance root vs upper bound on the ordered
                 probability simplex at local dimension 3, as CSV

Results are printed as JSON with floats at 17 significant digits so
outputs round-trip exactly; rerunning a command with the same seed
reproduces every numeric field byte for byte (wall_time excluded). CSV
uses '.' decimals, ',' separators, a header row, and LF line endings.

Exit codes: 0 success, 2 malformed input, 3 domain error, 4 optimizer
failure, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time

import numpy as np

from . import hiding as hiding_mod
from . import states
from .disturbance import (
    OptimizerConfig,
    edist_lower_bound,
    edist_simple_lower,
    edist_upper_bound,
    edist_upper_bound_limit,
    entanglement_of_disturbance,
    haar_average_disturbance,
    haar_bounds,
    implicit_residual,
    quantumness,
)
from .errors import (
    DisturbanceError,
    DomainError,
    OptimizerFailure,
    ReportInvariantViolation,
)
from .measure import MeasurementScope
from .states import Ensemble, schmidt_decompose


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _to_json(obj, level: int = 0) -> str:
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_to_json(v, level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{_to_json(v, level + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    return json.dumps(str(obj))


def _digest(inputs: dict) -> str:
    canon = _to_json(inputs).encode()
    return hashlib.sha256(canon).hexdigest()[:16]


def _emit(command: str, inputs: dict, seed: int, values: dict,
          report: dict | None, started: float) -> None:
    out = {
        "command": command,
        "inputs_digest": _digest(inputs),
        "seed": int(seed),
        "values": values,
        "report": report,
        "wall_time": time.perf_counter() - started,
    }
    sys.stdout.write(_to_json(out) + "\n")


def _parse_floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip() != ""]


def _parse_ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _matrix_to_pairs(mat: np.ndarray) -> list:
    return [[[z.real, z.imag] for z in row] for row in mat]


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, max_iterations=args.max_iterations,
                           tolerance=args.tol, seed=args.seed)


def _add_optimizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--restarts", type=int, default=16,
                        help="optimizer restarts, deterministic warm starts included")
    parser.add_argument("--max-iterations", type=int, default=2000,
                        help="simplex iterations per restart")
    parser.add_argument("--tol", type=float, default=1e-8, help="optimizer tolerance")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument("--threads", type=int, default=0,
                        help="worker cap (0 = all); results do not depend on it")


def _pure_bipartite_probs(state: states.QuantumState) -> np.ndarray:
    if len(state.dims) != 2:
        raise DomainError(f"need a bipartite state, got dims {state.dims}")
    mat = state.matrix
    purity = float(np.trace(mat @ mat).real)
    if purity < 1.0 - 1e-9:
        raise DomainError(f"state is not pure (purity {purity})")
    _, vectors = np.linalg.eigh((mat + mat.conj().T) / 2)
    psi = states.PureState(state.dims, vectors[:, -1])
    return schmidt_decompose(psi, state.dims[0], state.dims[1]).probs


def cmd_edist(args) -> int:
    started = time.perf_counter()
    if args.probs is not None:
        probs = np.asarray(_parse_floats(args.probs), dtype=float)
        inputs = {"probs": [float(p) for p in probs]}
    else:
        payload = _load_json(args.state)
        inputs = {"state": payload}
        probs = _pure_bipartite_probs(states.state_from_dict(payload))
    value = entanglement_of_disturbance(probs, atol=1e-6)
    kept = np.sort(probs[probs > 1e-12])[::-1]
    kept = kept / kept.sum()
    p1 = float(kept[0])
    p2 = float(kept[1]) if kept.size > 1 else 0.0
    rank = int(kept.size)
    values = {
        "value": value,
        "residual": implicit_residual(value, kept),
        "simple_lower": edist_simple_lower(p1),
        "lower": edist_lower_bound(p1, p2),
        "upper": edist_upper_bound(p1, rank),
        "upper_limit": edist_upper_bound_limit(p1),
    }
    _emit("edist", inputs, args.seed, values, None, started)
    return 0


def _parse_scope(text: str | None, dims) -> MeasurementScope:
    if text is None or text.strip().lower() == "all":
        return MeasurementScope.all_factors(len(dims))
    return MeasurementScope(tuple(_parse_ints(text)))


def cmd_quantumness(args) -> int:
    started = time.perf_counter()
    payload = _load_json(args.ensemble)
    if isinstance(payload, dict) and "entries" in payload:
        ensemble = states.ensemble_from_dict(payload)
    else:
        ensemble = Ensemble.single(states.state_from_dict(payload))
    scope = _parse_scope(args.scope, ensemble.dims)
    config = _optimizer_config(args)
    report = quantumness(ensemble, scope, args.distance, config)
    report.validate(ensemble)
    inputs = {"ensemble": payload, "scope": list(scope.targets), "distance": args.distance,
              "restarts": config.restarts, "max_iterations": config.max_iterations,
              "tolerance": config.tolerance}
    report_dict = {
        "value": report.value,
        "scope": list(report.scope.targets),
        "distance": report.distance,
        "restarts_used": report.restarts_used,
        "best_restart_iterations": report.best_restart_iterations,
        "converged": report.converged,
    }
    if args.emit_basis:
        basis_payload = {
            "targets": list(report.scope.targets),
            "bases": [_matrix_to_pairs(m.basis) for m in report.optimal_measurements],
        }
        with open(args.emit_basis, "w", encoding="utf-8") as handle:
            handle.write(_to_json(basis_payload) + "\n")
    _emit("quantumness", inputs, args.seed, {"value": report.value}, report_dict, started)
    return 0


def _haar_bracket(dims, scope: MeasurementScope):
    if len(dims) == 1:
        return haar_bounds("single", dims[0])
    if len(dims) == 2:
        if scope.targets == (0, 1):
            return haar_bounds("two-sided", dims[0], dims[1])
        if scope.targets == (0,):
            return haar_bounds("one-sided", dims[0], dims[1])
        if scope.targets == (1,):
            return haar_bounds("one-sided", dims[1], dims[0])
    return None


def cmd_haar(args) -> int:
    started = time.perf_counter()
    dims = tuple(_parse_ints(args.dims))
    scope = _parse_scope(args.scope, dims)
    if args.samples < 2 or args.batches < 1 or args.samples < 2 * args.batches:
        raise DomainError("need at least 2 samples per batch")
    rng = np.random.default_rng(args.seed)
    per_batch = args.samples // args.batches
    used = per_batch * args.batches
    batches = []
    for index in range(args.batches):
        estimate, stderr = haar_average_disturbance(dims, scope, per_batch, rng)
        batches.append((index, per_batch, estimate, stderr))
    overall = float(np.mean([b[2] for b in batches]))
    overall_se = float(np.sqrt(np.sum([b[3] ** 2 for b in batches])) / args.batches)
    bracket = _haar_bracket(dims, scope)
    lower, upper = bracket if bracket else (None, None)
    if args.csv:
        lines = ["batch,samples,estimate,standard_error,bracket_lower,bracket_upper"]
        for index, count, estimate, stderr in batches:
            lo = _format_float(lower) if lower is not None else ""
            hi = _format_float(upper) if upper is not None else ""
            lines.append(f"{index},{count},{_format_float(estimate)},"
                         f"{_format_float(stderr)},{lo},{hi}")
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            handle.write("\n".join(lines) + "\n")
    if args.plot:
        from . import plotting
        plotting.render_haar_batches(batches, lower, upper, args.plot)
    inputs = {"dims": list(dims), "scope": list(scope.targets),
              "samples": args.samples, "batches": args.batches}
    values = {
        "estimate": overall,
        "standard_error": overall_se,
        "bracket_lower": lower,
        "bracket_upper": upper,
        "samples": used,
        "batches": args.batches,
    }
    _emit("haar", inputs, args.seed, values, None, started)
    return 0


def _hiding_report_dict(report: hiding_mod.HidingReport) -> dict:
    out = {
        "global_distance": report.global_distance,
        "locc_lower_bound": report.locc_lower_bound,
        "capability_upper_estimate": report.capability_upper_estimate,
        "ensemble_quantumness": report.ensemble_quantumness,
        "quantumness_bound": report.quantumness_bound,
        "labels": {
            "global_distance": "exact trace distance",
            "locc_lower_bound": "one-sided projective lower bound",
            "capability_upper_estimate": "upper estimate of the hiding capability",
            "ensemble_quantumness": "numerical minimum over one-sided bases",
            "quantumness_bound": "twice the ensemble quantumness",
        },
    }
    if report.analytic is not None:
        out["analytic"] = dict(report.analytic)
    return out


def cmd_hiding(args) -> int:
    started = time.perf_counter()
    config = _optimizer_config(args)
    if args.werner is not None:
        report = hiding_mod.werner_hiding_report(args.werner, config)
        report.validate()
        inputs = {"werner": args.werner, "restarts": config.restarts}
        values = {"capability_upper_estimate": report.capability_upper_estimate,
                  "quantumness_bound": report.quantumness_bound}
        _emit("hiding", inputs, args.seed, values, _hiding_report_dict(report), started)
        return 0
    if args.pair is not None:
        rho = states.state_from_dict(_load_json(args.pair[0]))
        sigma = states.state_from_dict(_load_json(args.pair[1]))
        report = hiding_mod.hiding_capability_bounds(rho, sigma, config)
        report.validate()
        inputs = {"pair": [args.pair[0], args.pair[1]], "restarts": config.restarts}
        values = {"capability_upper_estimate": report.capability_upper_estimate,
                  "quantumness_bound": report.quantumness_bound}
        _emit("hiding", inputs, args.seed, values, _hiding_report_dict(report), started)
        return 0
    d, n = args.random
    rng = np.random.default_rng(args.seed)
    record = hiding_mod.check_randomizing_pair(d, n, rng)
    inputs = {"random": [d, n]}
    values = {
        "epsilon": record["epsilon"],
        "eta_empirical": record["eta_empirical"],
        "rank": record["rank"],
        "global_distance": 1.0 - record["epsilon"],
        "epsilon_ceiling": n / d ** 2,
    }
    _emit("hiding", inputs, args.seed, values, None, started)
    return 0


def figure_rows(grid_steps: int) -> list[tuple[float, float, float, float]]:
    """(p1, p2, value, bound) over the grid p1 >= p2 >= 1 - p1 - p2 >= 0
    with resolution 1/grid_steps, at three nonzero levels."""
    if grid_steps < 2:
        raise ValueError(f"grid steps must be at least 2, got {grid_steps}")
    k = int(grid_steps)
    rows = []
    for i in range((k + 2) // 3, k + 1):
        j_lo = (k - i + 1) // 2
        for j in range(j_lo, min(i, k - i) + 1):
            p1, p2, p3 = i / k, j / k, (k - i - j) / k
            value = entanglement_of_disturbance([p1, p2, p3], atol=1e-9)
            bound = edist_upper_bound(p1, 3)
            rows.append((p1, p2, value, bound))
    return rows


def cmd_figure1(args) -> int:
    rows = figure_rows(args.grid_steps)
    lines = ["p1,p2,E,upper_bound"]
    for p1, p2, value, bound in rows:
        lines.append(f"{_format_float(p1)},{_format_float(p2)},"
                     f"{_format_float(value)},{_format_float(bound)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if args.plot:
        from . import plotting
        plotting.render_disturbance_surface(rows, args.plot)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdisturb",
        description="Measurement disturbance, ensemble quantumness, and data hiding bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_edist = sub.add_parser("edist", help="closed-form disturbance root and bounds")
    group = p_edist.add_mutually_exclusive_group(required=True)
    group.add_argument("--probs", help="comma-separated probabilities, e.g. 0.5,0.3,0.2")
    group.add_argument("--state", help="JSON file with a pure bipartite state")
    _add_common_flags(p_edist)
    p_edist.set_defaults(func=cmd_edist)

    p_quant = sub.add_parser("quantumness", help="optimized ensemble quantumness")
    p_quant.add_argument("ensemble", help="JSON file with an ensemble or a single state")
    p_quant.add_argument("--scope", default=None,
                         help="comma-separated factor indices (default: all factors)")
    p_quant.add_argument("--distance", choices=["trace", "relative-entropy"], default="trace")
    p_quant.add_argument("--emit-basis", default=None,
                         help="write the optimal measurement bases to this JSON file")
    _add_optimizer_flags(p_quant)
    _add_common_flags(p_quant)
    p_quant.set_defaults(func=cmd_quantumness)

    p_haar = sub.add_parser("haar", help="Monte Carlo Haar-ensemble disturbance")
    p_haar.add_argument("--dims", required=True, help="factor dimensions, e.g. 2,2")
    p_haar.add_argument("--scope", default=None,
                        help="comma-separated factor indices (default: all factors)")
    p_haar.add_argument("--samples", type=int, default=10000)
    p_haar.add_argument("--batches", type=int, default=1)
    p_haar.add_argument("--csv", default=None, help="write one CSV row per batch here")
    p_haar.add_argument("--plot", default=None, help="render batch estimates to this file")
    _add_common_flags(p_haar)
    p_haar.set_defaults(func=cmd_haar)

    p_hide = sub.add_parser("hiding", help="hiding-pair analysis")
    group = p_hide.add_mutually_exclusive_group(required=True)
    group.add_argument("--werner", type=int, default=None, metavar="D",
                       help="symmetric/antisymmetric pair at local dimension D")
    group.add_argument("--pair", nargs=2, default=None, metavar=("RHO", "SIGMA"),
                       help="two bipartite state JSON files")
    group.add_argument("--random", nargs=2, type=int, default=None, metavar=("D", "N"),
                       help="random-unitary pair: local dimension D, N unitaries")
    _add_optimizer_flags(p_hide)
    _add_common_flags(p_hide)
    p_hide.set_defaults(func=cmd_hiding)

    p_fig = sub.add_parser("figure1",
                           help="disturbance root vs upper bound on the simplex (CSV)")
    p_fig.add_argument("--grid-steps", type=int, default=40)
    p_fig.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p_fig.add_argument("--plot", default=None, help="render the surfaces to this file")
    _add_common_flags(p_fig)
    p_fig.set_defaults(func=cmd_figure1)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OptimizerFailure as exc:
        print(f"optimizer failure: {exc}", file=sys.stderr)
        return 4
    except ReportInvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 5
    except DisturbanceError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
