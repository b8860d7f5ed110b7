import json
import re

import numpy as np
import pytest

from qdisturb import (
    Ensemble,
    QuantumState,
    ensemble_to_dict,
    max_cq_qubit_state,
    state_to_dict,
    werner_states,
)
from qdisturb.cli import main
from qdisturb.errors import ReportInvariantViolation

LEAN_FLAGS = ["--restarts", "4", "--max-iterations", "400"]


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def strip_wall_time(text: str) -> str:
    return re.sub(r'"wall_time": [^\n]+', '"wall_time": X', text)


def test_edist_uniform_pair(capsys):
    code, out = run_cli(capsys, ["edist", "--probs", "0.5,0.5"])
    assert code == 0
    payload = json.loads(out)
    assert payload["values"]["value"] == pytest.approx(0.5, abs=1e-10)


def test_edist_single_entry(capsys):
    code, out = run_cli(capsys, ["edist", "--probs", "1"])
    assert code == 0
    assert json.loads(out)["values"]["value"] == 0.0


def test_edist_three_entry_residual(capsys):
    code, out = run_cli(capsys, ["edist", "--probs", "0.5,0.3,0.2"])
    assert code == 0
    values = json.loads(out)["values"]
    assert abs(values["residual"]) < 1e-12
    assert values["lower"] <= values["value"] <= values["upper"]


def test_edist_from_pure_state_file(capsys, tmp_path):
    bell = np.zeros((4, 4), dtype=complex)
    vec = np.array([1, 0, 0, 1]) / np.sqrt(2)
    bell = np.outer(vec, vec)
    path = tmp_path / "bell.json"
    path.write_text(json.dumps(state_to_dict(QuantumState((2, 2), bell))))
    code, out = run_cli(capsys, ["edist", "--state", str(path)])
    assert code == 0
    assert json.loads(out)["values"]["value"] == pytest.approx(0.5, abs=1e-10)


def test_edist_exit_codes(capsys, tmp_path):
    assert main(["edist", "--probs", "0.5,0.6"]) == 3        # bad normalization
    capsys.readouterr()
    assert main(["edist", "--probs", "a,b"]) == 2            # unparsable numbers
    capsys.readouterr()
    assert main(["edist", "--state", str(tmp_path / "no.json")]) == 2
    capsys.readouterr()
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["edist", "--state", str(broken)]) == 2
    capsys.readouterr()
    mixed = tmp_path / "mixed.json"
    mixed.write_text(json.dumps(state_to_dict(QuantumState((2, 2), np.eye(4) / 4))))
    assert main(["edist", "--state", str(mixed)]) == 3       # not a pure state
    capsys.readouterr()


def test_quantumness_max_cq(capsys, tmp_path):
    path = tmp_path / "maxcq.json"
    path.write_text(json.dumps(state_to_dict(max_cq_qubit_state())))
    code, out = run_cli(capsys, ["quantumness", str(path), "--scope", "0"] + LEAN_FLAGS)
    assert code == 0
    payload = json.loads(out)
    assert payload["values"]["value"] == pytest.approx(0.25, abs=1e-5)
    assert payload["report"]["converged"] is True


def test_quantumness_classical_classical_two_sided(capsys, tmp_path):
    state = QuantumState((2, 2), np.diag([0.4, 0.3, 0.2, 0.1]))
    path = tmp_path / "cc.json"
    path.write_text(json.dumps(state_to_dict(state)))
    code, out = run_cli(capsys, ["quantumness", str(path), "--scope", "0,1"] + LEAN_FLAGS)
    assert code == 0
    assert json.loads(out)["values"]["value"] < 1e-6


def test_quantumness_relative_entropy_distance(capsys, tmp_path):
    state = QuantumState((2, 2), np.diag([0.4, 0.3, 0.2, 0.1]))
    path = tmp_path / "cc.json"
    path.write_text(json.dumps(state_to_dict(state)))
    code, out = run_cli(capsys, ["quantumness", str(path), "--scope", "0,1",
                                 "--distance", "relative-entropy"] + LEAN_FLAGS)
    assert code == 0
    payload = json.loads(out)
    assert payload["values"]["value"] < 1e-6
    assert payload["report"]["distance"] == "relative-entropy"


def test_quantumness_werner_d3(capsys, tmp_path):
    sym, anti = werner_states(3)
    path = tmp_path / "werner3.json"
    path.write_text(json.dumps(ensemble_to_dict(Ensemble.pair(sym, anti))))
    code, out = run_cli(capsys, ["quantumness", str(path), "--scope", "0"] + LEAN_FLAGS)
    assert code == 0
    assert json.loads(out)["values"]["value"] == pytest.approx(3 / 8, abs=1e-5)


def test_quantumness_emit_basis(capsys, tmp_path):
    path = tmp_path / "maxcq.json"
    path.write_text(json.dumps(state_to_dict(max_cq_qubit_state())))
    basis_path = tmp_path / "basis.json"
    code, _ = run_cli(capsys, ["quantumness", str(path), "--scope", "0",
                               "--emit-basis", str(basis_path)] + LEAN_FLAGS)
    assert code == 0
    payload = json.loads(basis_path.read_text())
    assert payload["targets"] == [0]
    basis = np.array([[complex(re, im) for re, im in row] for row in payload["bases"][0]])
    assert np.max(np.abs(basis.conj().T @ basis - np.eye(2))) < 1e-9


def test_quantumness_scope_out_of_range(capsys, tmp_path):
    path = tmp_path / "maxcq.json"
    path.write_text(json.dumps(state_to_dict(max_cq_qubit_state())))
    assert main(["quantumness", str(path), "--scope", "5"]) == 3
    capsys.readouterr()


def test_haar_single_qubit_bracket(capsys):
    code, out = run_cli(capsys, ["haar", "--dims", "2", "--samples", "2000", "--seed", "1"])
    assert code == 0
    values = json.loads(out)["values"]
    slack = 3 * values["standard_error"]
    assert values["bracket_lower"] - slack <= values["estimate"] <= values["bracket_upper"] + slack


def test_haar_trivial_dimension(capsys):
    code, out = run_cli(capsys, ["haar", "--dims", "1", "--samples", "10"])
    assert code == 0
    assert json.loads(out)["values"]["estimate"] == pytest.approx(0.0, abs=1e-12)


def test_haar_two_sided_bracket_and_csv(capsys, tmp_path):
    csv_path = tmp_path / "haar.csv"
    code, out = run_cli(capsys, ["haar", "--dims", "2,2", "--scope", "0,1",
                                 "--samples", "2000", "--batches", "4",
                                 "--seed", "2", "--csv", str(csv_path)])
    assert code == 0
    values = json.loads(out)["values"]
    slack = 3 * values["standard_error"]
    assert 0.6 - slack <= values["estimate"] <= np.sqrt(0.6) + slack
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "batch,samples,estimate,standard_error,bracket_lower,bracket_upper"
    assert len(lines) == 5


def test_hiding_werner(capsys):
    code, out = run_cli(capsys, ["hiding", "--werner", "2"] + LEAN_FLAGS)
    assert code == 0
    payload = json.loads(out)
    analytic = payload["report"]["analytic"]
    assert analytic["hiding_capability"] == pytest.approx(1 / 3)
    assert analytic["quantumness_bound"] == pytest.approx(2 / 3)
    assert payload["report"]["locc_lower_bound"] == pytest.approx(2 / 3, abs=1e-5)


def test_hiding_same_pair_zero(capsys, tmp_path):
    path = tmp_path / "mixed.json"
    path.write_text(json.dumps(state_to_dict(QuantumState((2, 2), np.eye(4) / 4))))
    code, out = run_cli(capsys, ["hiding", "--pair", str(path), str(path)] + LEAN_FLAGS)
    assert code == 0
    report = json.loads(out)["report"]
    assert report["global_distance"] == pytest.approx(0.0, abs=1e-12)
    assert report["capability_upper_estimate"] == pytest.approx(0.0, abs=1e-9)
    assert report["ensemble_quantumness"] == pytest.approx(0.0, abs=1e-7)


def test_hiding_random_pair(capsys):
    code, out = run_cli(capsys, ["hiding", "--random", "8", "64", "--seed", "7"])
    assert code == 0
    values = json.loads(out)["values"]
    assert values["epsilon"] <= 64 / 64 + 1e-9
    assert values["rank"] <= 64


def test_figure_csv_rows(capsys):
    code, out = run_cli(capsys, ["figure1", "--grid-steps", "12"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p1,p2,E,upper_bound"
    rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    assert np.all(rows[:, 2] <= rows[:, 3] + 1e-9)


def test_figure_grid_too_small(capsys):
    assert main(["figure1", "--grid-steps", "1"]) == 2
    capsys.readouterr()


def test_figure_plot_and_out_files(capsys, tmp_path):
    csv_path = tmp_path / "fig.csv"
    png_path = tmp_path / "fig.png"
    code, _ = run_cli(capsys, ["figure1", "--grid-steps", "9",
                               "--out", str(csv_path), "--plot", str(png_path)])
    assert code == 0
    assert csv_path.read_text().startswith("p1,p2,E,upper_bound\n")
    assert png_path.stat().st_size > 0


def test_haar_plot_file(capsys, tmp_path):
    png_path = tmp_path / "haar.png"
    code, _ = run_cli(capsys, ["haar", "--dims", "2", "--samples", "200",
                               "--batches", "2", "--plot", str(png_path)])
    assert code == 0
    assert png_path.stat().st_size > 0


def test_internal_invariant_maps_to_exit_5(capsys, monkeypatch, tmp_path):
    import qdisturb.cli as cli_mod

    def explode(*args, **kwargs):
        raise ReportInvariantViolation("forced failure")

    monkeypatch.setattr(cli_mod, "quantumness", explode)
    path = tmp_path / "maxcq.json"
    path.write_text(json.dumps(state_to_dict(max_cq_qubit_state())))
    assert main(["quantumness", str(path)]) == 5
    capsys.readouterr()


def test_optimizer_failure_maps_to_exit_4(capsys, monkeypatch, tmp_path):
    import qdisturb.cli as cli_mod
    from qdisturb.errors import OptimizerFailure

    def explode(*args, **kwargs):
        raise OptimizerFailure("forced failure")

    monkeypatch.setattr(cli_mod, "quantumness", explode)
    path = tmp_path / "maxcq.json"
    path.write_text(json.dumps(state_to_dict(max_cq_qubit_state())))
    assert main(["quantumness", str(path)]) == 4
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["edist", "--probs", "0.5,0.5"],
    ["haar", "--dims", "2,2", "--scope", "0", "--samples", "400", "--seed", "3"],
    ["hiding", "--random", "4", "4", "--seed", "11"],
    ["figure1", "--grid-steps", "7"],
])
def test_determinism_byte_identical(capsys, argv):
    _, first = run_cli(capsys, argv)
    _, second = run_cli(capsys, argv)
    assert strip_wall_time(first) == strip_wall_time(second)
