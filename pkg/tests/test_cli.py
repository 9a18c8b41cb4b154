import csv
import json

import pytest

from treegibbs.cli import main
from treegibbs.io import CSV_HEADER

HEADER = "theta,classification,lambda_star,c1,lambda1,c2,lambda2,c3,lambda3,residual"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_unique(capsys):
    code, out, _ = run(capsys, "classify", "--k", "2", "--n", "1", "--theta", "0.5")
    assert code == 0
    assert "classification: UniqueMeasure" in out
    assert out.count("fixed point ") == 1
    assert "theta_1: 1.3228342099734995" in out


def test_classify_out_of_domain(capsys):
    code, out, err = run(capsys, "classify", "--k", "2", "--n", "1", "--theta", "2.0")
    assert code == 2
    assert "outside the domain" in err and len(err.strip().splitlines()) == 1
    assert out == ""


@pytest.mark.parametrize("argv", [
    ["classify", "--k", "1", "--n", "1", "--theta", "0.1"],
    ["classify", "--k", "2", "--n", "0", "--theta", "0.1"],
    ["sweep", "--k", "2", "--n", "1", "--theta-min", "0", "--theta-max", "1", "--steps", "1"],
    ["sweep", "--k", "2", "--n", "1", "--theta-min", "1", "--theta-max", "0", "--steps", "5"],
    ["sweep", "--k", "2", "--n", "1", "--theta-min", "0", "--theta-max", "3", "--steps", "5"],
    ["verify", "--only", "no-such-suite"],
    ["verify", "--k", "1"],
    ["classify", "--k", "2", "--n", "1", "--theta", "0.1", "--quad-order", "2"],
])
def test_invalid_arguments_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--k", "2"])
    assert exc.value.code == 2


def test_classify_verify_three(capsys):
    code, out, err = run(capsys, "classify", "--k", "2", "--n", "1", "--theta", "1.45", "--verify")
    assert code == 0
    assert "classification: ThreeMeasures" in out
    residuals = [float(line.split("residual=")[1]) for line in out.splitlines() if "residual=" in line]
    assert len(residuals) == 3 and max(residuals) < 1e-8
    assert err.startswith("warning:")


def test_classify_odd_prints_top_threshold(capsys):
    _, out, _ = run(capsys, "classify", "--k", "3", "--n", "1", "--theta", "0.2")
    assert "theta_3:" in out


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code, stdout, err = run(capsys, "sweep", "--k", "3", "--n", "1", "--theta-min", "0", "--theta-max", "1.5",
                            "--steps", "50", "--format", "csv", "-o", str(out))
    assert code == 0 and stdout == ""
    lines = out.read_text().splitlines()
    assert lines[0] == HEADER == ",".join(CSV_HEADER)
    assert len(lines) == 51
    rows = list(csv.DictReader(lines))
    first = rows[0]
    assert first["classification"] == "UniqueMeasure"
    assert first["lambda_star"] == "" and first["c2"] == "" and first["lambda3"] == ""
    assert rows[-1]["classification"] == "ThreeMeasures" and rows[-1]["c3"] != ""
    regions = list(csv.DictReader((tmp_path / "out.regions.csv").read_text().splitlines()))
    assert [r["classification"] for r in regions] == ["UniqueMeasure", "ThreeMeasures"]
    # warnings go to stderr, not into the data file
    assert "warning" in err and "warning" not in out.read_text()


def test_sweep_two_steps_below_theta1(capsys):
    code, out, _ = run(capsys, "sweep", "--k", "2", "--n", "1", "--theta-min", "0", "--theta-max", "1", "--steps", "2")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [r["classification"] for r in rows] == ["UniqueMeasure", "UniqueMeasure"]


def test_sweep_json(tmp_path, capsys):
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "sweep", "--k", "2", "--n", "1", "--theta-min", "1", "--theta-max", "1.5",
                     "--steps", "6", "--format", "json", "-o", str(out), "--verify")
    assert code == 0
    doc = json.loads(out.read_text())
    assert list(doc) == ["params", "rows", "regions", "thresholds", "warnings"]
    assert len(doc["rows"]) == 6
    assert all(r["residual"] < 1e-8 for r in doc["rows"])
    assert doc["params"]["k"] == 2
    assert not (tmp_path / "out.regions.csv").exists()


def test_sweep_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--k", "2", "--n", "1", "--theta-min", "0", "--theta-max", "1",
                       "--steps", "3", "-o", str(tmp_path / "missing" / "out.csv"))
    assert code == 3
    assert "cannot write" in err


def test_sweep_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(capsys, "sweep", "--k", "4", "--n", "2", "--theta-min", "-1", "--theta-max", "1.3",
            "--steps", "25", "-o", str(p), "--workers", "3")
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_reals_round_trip(capsys):
    _, out, _ = run(capsys, "sweep", "--k", "2", "--n", "1", "--theta-min", "1.4", "--theta-max", "1.5", "--steps", "3")
    rows = list(csv.DictReader(out.splitlines()))
    assert float(rows[1]["theta"]) == 1.45


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--k", "4", "--n", "2", "--only", "oracle-equivalence")
    assert code == 0
    suite_lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(suite_lines) == 1 and "oracle-equivalence" in suite_lines[0]
    assert "k=4 n=2" in out


def test_verify_coarse_quadrature_fails(capsys):
    code, out, _ = run(capsys, "verify", "--quad-order", "8", "--only", "moments")
    assert code == 1
    assert "[FAIL] moments" in out


def test_verify_prints_odd_readings(capsys):
    code, out, _ = run(capsys, "verify", "--k", "5", "--n", "1", "--only", "threshold-chain")
    assert code == 0
    assert "k=5 n=1" in out and "coefficients beta_{2i+1}" in out


def test_thresholds_text_and_json(capsys):
    code, out, _ = run(capsys, "thresholds", "--k", "3", "--n", "2")
    assert code == 0 and "theta_3" in out and "(2n+2i+3) reading" in out
    code, out, _ = run(capsys, "thresholds", "--k", "2", "--n", "1", "--format", "json", "--literal-kernel")
    doc = json.loads(out)
    assert doc["thresholds"]["theta1"] == pytest.approx(5 / 6)
    assert [r["classification"] for r in doc["stated_regions"]][-1] == "TwoMeasures"
