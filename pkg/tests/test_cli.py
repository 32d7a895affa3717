import json

import pytest

from app import main, setup_parser
from scripts.cmgreen.commands import cmd_torsion, run
from scripts.cmgreen.records import RunRecord
from scripts.cmgreen.tool import poincare_prec


def _json_run(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        setup_parser().parse_args([])


def test_torsion(capsys):
    code, record = _json_run(capsys, "torsion")
    assert code == 0
    assert record["command"] == "torsion"
    assert record["exact"]["N_A"] == "1"
    assert record["exact"]["N_B"] == "2"
    assert record["exact"]["N"] == "2"
    assert record["exact"]["H0 invariant factors"] == "[1, 1, 2]"
    assert "wall_time" not in record


def test_timing_is_opt_in(capsys):
    _, record = _json_run(capsys, "torsion", "--timing")
    assert record["wall_time"] >= 0


def test_identical_runs_print_identical_records(capsys):
    main(["torsion", "--json"])
    first = capsys.readouterr().out
    main(["torsion", "--json"])
    assert capsys.readouterr().out == first


def test_table_output(capsys):
    assert main(["torsion"]) == 0
    out = capsys.readouterr().out
    assert "N_B: 2" in out
    assert "✨" in out


def test_intersect_builtin(capsys):
    code, record = _json_run(capsys, "intersect", "--builtin", "tau7")
    assert code == 0
    assert record["passed"]
    assert {"Z1", "Z2", "DiagE", "Γ_tau7", "Z_τ"} <= set(record["exact"])


def test_intersect_plain_curve(capsys):
    code, record = _json_run(capsys, "intersect", "--curve=1,1")
    assert code == 0
    assert "Z_τ" not in record["exact"]


def test_degenerate_curve_is_an_input_error(capsys):
    code, record = _json_run(capsys, "intersect", "--curve=-3,2")
    assert code == 2
    assert not record["passed"]
    assert record["error"].startswith("DegenerateCurve")


def test_intersect_needs_a_source(capsys):
    code, record = _json_run(capsys, "intersect")
    assert code == 2
    assert record["error"].startswith("InputError")


def test_series_verify_at_short_order_fails(capsys):
    code, record = _json_run(capsys, "series-verify", "--order", "8")
    assert code == 1
    failed = [c for c in record["checks"] if not c["passed"]]
    assert failed
    assert all("TruncationExhausted" in c["detail"] for c in failed)


def test_series_verify_passes(capsys):
    code, record = _json_run(capsys, "series-verify", "--order", "20")
    assert code == 0
    assert record["passed"]


def test_green_poincare(capsys):
    code, record = _json_run(capsys, "green", "--z1", "0.1,1.3", "--z2", "i", "--bound", "5", "--prec", "64")
    assert code == 0
    g = record["numeric"]["G"]
    assert g["prec"] == 64
    assert g["error_bound"] is not None


def test_green_reports_the_precision_it_summed_at(capsys):
    code, record = _json_run(
        capsys, "green", "--z1", "0.1,1.3", "--z2", "i", "--bound", "5", "--prec", str(poincare_prec + 160)
    )
    assert code == 0
    assert record["numeric"]["G"]["prec"] == poincare_prec
    assert record["params"]["poincare_prec"] == str(poincare_prec)


def test_green_on_the_same_orbit(capsys):
    code, record = _json_run(capsys, "green", "--z1", "tau7", "--z2", "tau7", "--bound", "5", "--prec", "64")
    assert code == 2
    assert record["error"].startswith("OrbitCollision")


def test_eichler_route_needs_a_cm_form(capsys):
    code, record = _json_run(capsys, "green", "--z1", "0.1,1.3", "--method", "eichler")
    assert code == 2
    assert record["error"].startswith("InputError")


def test_conjecture_without_data(capsys):
    code, record = _json_run(capsys, "conjecture", "--disc=-8")
    assert code == 2
    assert record["error"].startswith("DecompositionMissing")
    assert record["numeric"] == {}


def test_run_wraps_records():
    record, code = run(cmd_torsion, "torsion")
    assert code == 0
    assert record.wall_time is not None


@pytest.mark.slow
def test_psi(capsys):
    code, record = _json_run(capsys, "psi")
    assert code == 0
    assert record["exact"]["Ψ'(B) at (a,b) = (-35,-98)"]


@pytest.mark.slow
def test_green_by_eichler_integrals(capsys):
    code, record = _json_run(capsys, "green", "--z1", "tau7", "--method", "eichler", "--prec", "128")
    assert code == 0
    assert float(record["numeric"]["G"]["re"]) == pytest.approx(-8.37164, abs=1e-4)
    assert record["exact"]["modulus"] == "πi·Z"


def test_records_parse_back(capsys):
    main(["intersect", "--builtin", "tau7", "--json"])
    out = capsys.readouterr().out
    record = RunRecord.model_validate_json(out)
    assert record.command == "intersect"
    assert record.schema_version == 1
    assert record.model_dump_json(indent=2, exclude={"wall_time"}) == out.strip()
