import io
import json
from fractions import Fraction

import pytest

from zetalab import cli
from zetalab.errors import MissingSection


def run(tmp_path, *argv):
    buf = io.StringIO()
    code, rep = cli.run([*argv, "--out", str(tmp_path)], stdout=buf)
    return code, rep, buf.getvalue()


def test_validate_fixture(tmp_path, fixtures_dir):
    code, rep, text = run(tmp_path, "validate", "--in", str(fixtures_dir / "lfuns.json"))
    assert code == cli.EXIT_OK
    data = json.loads(text)
    assert data["status"] == "ok" and data["command"] == "validate"
    assert (tmp_path / "validate.json").read_text() == text


def test_validate_reports_rh_violation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"q": 2, "w": 1, "coeffs": ["1", "-3"]}]))
    code, rep, text = run(tmp_path, "validate", "--in", str(bad))
    assert code == cli.EXIT_HARD
    assert json.loads(text)["status"] == "hard_failure"


def test_input_errors(tmp_path):
    assert run(tmp_path, "validate", "--in", str(tmp_path / "missing.json"))[0] == cli.EXIT_INPUT
    assert run(tmp_path, "validate")[0] == cli.EXIT_INPUT
    assert run(tmp_path, "nonsense")[0] == cli.EXIT_INPUT
    # constant A and B is not a surface over F_q(t)
    assert run(tmp_path, "ell-lfun", "--p", "5", "--A", "0", "--B", "1")[0] == cli.EXIT_INPUT
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert run(tmp_path, "validate", "--in", str(garbled))[0] == cli.EXIT_INPUT


def test_curve_zeta_command(tmp_path):
    code, rep, text = run(tmp_path, "curve-zeta", "--q", "3", "--genus", "1", "--poly", "0,2,0,1")
    assert code == cli.EXIT_OK
    entry = json.loads(text)["sections"]["curve"]
    assert entry["numerator_coeffs"] == [1, 0, 3] and entry["h"] == 4
    code, rep, text = run(tmp_path, "curve-zeta", "--q", "2", "--genus", "1", "--counts", "3")
    assert code == cli.EXIT_OK and json.loads(text)["sections"]["curve"]["h"] == 3


def test_ell_lfun_command(tmp_path):
    code, rep, text = run(tmp_path, "ell-lfun", "--p", "5", "--A", "0,1", "--B", "1", "--fibre-check")
    assert code == cli.EXIT_OK
    sec = json.loads(text)["sections"]
    assert sec["surface"]["n_E"] == 5 and sec["surface"]["degree"] == 1


def test_family_report_trivial(tmp_path, fixtures_dir):
    code, rep, text = run(tmp_path, "family-report", "--in", str(fixtures_dir / "family_trivial.json"))
    assert code == cli.EXIT_OK
    assert json.loads(text)["sections"]["asymptotics"]["classification_text"] == "exact, good, not_very_exact"


def test_family_report_with_tower(tmp_path, fixtures_dir):
    code, rep, text = run(
        tmp_path, "family-report", "--in", str(fixtures_dir / "family_curves.json"),
        "--tower", str(fixtures_dir / "tower.json"), "--plot", "sweep",
    )
    assert code == cli.EXIT_OK
    assert json.loads(text)["sections"]["base_change"]["slack"] > 0
    assert (tmp_path / "family-report_sweep.csv").read_text().startswith("x,slack\n")


def test_output_is_deterministic(tmp_path, fixtures_dir):
    argv = ("zero-density", "--in", str(fixtures_dir / "family_power.json"), "--plot", "density")
    first = run(tmp_path / "a", *argv)[2]
    second = run(tmp_path / "b", *argv)[2]
    assert first == second
    a = (tmp_path / "a" / "zero-density_density.csv").read_bytes()
    assert a == (tmp_path / "b" / "zero-density_density.csv").read_bytes()
    lines = a.decode().split("\n")
    assert lines[0] == "x,value" and b"\r" not in a
    assert len([ln for ln in lines if ln]) == 4097


def test_curve_density_and_histogram(tmp_path, fixtures_dir):
    code, rep, text = run(tmp_path, "zero-density", "--phi", "0.1,0.05", "--q", "9")
    assert code == cli.EXIT_OK
    code, rep, text = run(tmp_path, "zero-hist", "--in", str(fixtures_dir / "family_power.json"), "--bins", "4")
    assert code == cli.EXIT_OK


def test_bs_report_csv(tmp_path, fixtures_dir):
    code, rep, text = run(
        tmp_path, "bs-report", "--in", str(fixtures_dir / "family_power.json"), "--s", "0.75", "--plot", "bs"
    )
    assert code == cli.EXIT_OK
    header = (tmp_path / "bs-report_bs.csv").read_text().splitlines()[0]
    assert header == ",".join(cli.PLOT_HEADERS["bs"])


def test_emit_plotdata_missing_section(tmp_path):
    rep = cli.Report("validate", {}, "0" * 64)
    with pytest.raises(MissingSection):
        cli.emit_plotdata(rep, "density", tmp_path)


def test_jsonable():
    assert cli.jsonable({"a": Fraction(3, 1), "b": Fraction(1, 2), "c": 1 + 2j, "d": float("inf")}) == {
        "a": 3, "b": "1/2", "c": [1.0, 2.0], "d": "inf",
    }
