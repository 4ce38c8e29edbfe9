"""CLI contract tests via click's runner."""

import json

import numpy as np
from click.testing import CliRunner

from belldiag.cli import main


def run(args, **kw):
    return CliRunner().invoke(main, args, **kw)


def test_verify_command():
    result = run(["verify", "--dims", "2,3", "--trials", "5", "--seed", "1"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["all_passed"]


def test_ecc_demo_random_and_fixed():
    result = run(["ecc-demo", "--dim", "3", "--rounds", "25", "--seed", "2"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["success_rate"] == 1.0
    result = run(["ecc-demo", "--dim", "2", "--k", "1", "--l", "0", "--seed", "2"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["success_rate"] == 1.0


def test_ecc_demo_rejects_half_specified_error():
    result = run(["ecc-demo", "--dim", "3", "--k", "1", "--seed", "2"])
    assert result.exit_code == 1
    err = json.loads(result.stderr)
    assert "together" in err["message"]


def test_classify_coefficient_state(tmp_path):
    doc = {"d": 3, "c": (np.full((3, 3), 1 / 9)).tolist(), "alpha": "standard"}
    path = tmp_path / "state.json"
    path.write_text(json.dumps(doc))
    result = run(["classify", "--in", str(path)])
    assert result.exit_code == 0
    record = json.loads(result.stdout)
    assert record["ppt"] is True
    assert record["e2"] is False
    assert abs(record["realign_sum"] - 1 / 3) < 1e-9


def test_classify_generalized_state(tmp_path):
    rng = np.random.default_rng(1)
    phases = rng.uniform(0, 2 * np.pi, (3, 3)).tolist()
    c = np.zeros((3, 3))
    c[0, 0] = 1.0
    doc = {"d": 3, "c": c.tolist(), "alpha": {"phases": phases}}
    path = tmp_path / "state.json"
    path.write_text(json.dumps(doc))
    result = run(["classify", "--in", str(path)])
    assert result.exit_code == 0
    record = json.loads(result.stdout)
    assert record["ppt"] is False


def test_classify_density_state(tmp_path):
    rho = np.eye(4, dtype=complex) / 4
    doc = {
        "d1": 2,
        "d2": 2,
        "rho": [[[rho[i, j].real, rho[i, j].imag] for j in range(4)] for i in range(4)],
    }
    path = tmp_path / "state.json"
    path.write_text(json.dumps(doc))
    result = run(["classify", "--in", str(path)])
    assert result.exit_code == 0
    record = json.loads(result.stdout)
    assert record["ppt"] is True and record["e3"] is False


def test_classify_bad_input_gives_json_error(tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"nonsense": 1}))
    result = run(["classify", "--in", str(path)])
    assert result.exit_code == 1
    err = json.loads(result.stderr)
    assert err["error"] == "ValueError"


def test_slice_scan_writes_contract_csv(tmp_path):
    out = tmp_path / "scan.csv"
    result = run(
        ["slice-scan", "--alpha-mode", "standard", "--a-range", "-1:3",
         "--b-range", "-1:3", "--grid", "21x21", "--seed", "0", "--out", str(out)]
    )
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "a,b,valid,ppt,e2,e3"
    assert len(lines) == 1 + 21 * 21
    flags = {tuple(line.split(",")[2:]) for line in lines[1:]}
    assert all(set(f) <= {"0", "1"} for f in flags)


def test_slice_scan_alpha_file(tmp_path):
    alpha = {"d": 3, "phases": np.zeros((3, 3)).tolist()}
    alpha_path = tmp_path / "alpha.json"
    alpha_path.write_text(json.dumps(alpha))
    out = tmp_path / "scan.csv"
    std_out = tmp_path / "scan_std.csv"
    args = ["--a-range", "-1:3", "--b-range", "-1:3", "--grid", "15x15", "--seed", "0"]
    assert run(["slice-scan", "--alpha-file", str(alpha_path), *args, "--out", str(out)]).exit_code == 0
    assert run(["slice-scan", "--alpha-mode", "standard", *args, "--out", str(std_out)]).exit_code == 0
    # zero phases are exactly the standard construction
    assert out.read_bytes() == std_out.read_bytes()


def test_sample_stats_small_run(tmp_path):
    out = tmp_path / "stats.json"
    result = run(
        ["sample-stats", "--dim", "3", "--states", "150", "--systems", "4",
         "--alpha-mode", "full", "--seed", "9", "--out", str(out), "--jobs", "1"]
    )
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["seed"] == 9
    assert len(doc["systems"]) == 4
    assert "standard_reference" in doc


def test_sample_stats_small_alpha_mode(tmp_path):
    out = tmp_path / "stats.json"
    result = run(
        ["sample-stats", "--dim", "3", "--states", "100", "--systems", "2",
         "--alpha-mode", "small:0.001", "--seed", "9", "--out", str(out), "--jobs", "1"]
    )
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["alpha_mode"] == "small"
    assert doc["config"]["eps"] == 0.001


def test_bad_alpha_mode_rejected(tmp_path):
    result = run(
        ["sample-stats", "--alpha-mode", "bogus", "--out", str(tmp_path / "x.json")]
    )
    assert result.exit_code != 0
