import csv
import io
import json
import math

import pytest

from noondamp.cli import (
    EXIT_CERT,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    ScanSpec,
    figure1_rows,
    figure2_rows,
    fmt,
    main,
    render_table,
)
from noondamp.core import DampingParams
from noondamp.measures import distillable_entanglement_dephasing
from noondamp.metrology import distillation_phase_deviation, phase_deviation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_record(text):
    return json.loads(text)


def test_fmt():
    assert fmt(1.0 / 3.0) == "0.333333333333"
    assert fmt(2) == "2"
    assert fmt(math.inf) == "inf"
    assert fmt(True) == "true"
    assert fmt(1e-20) == "1e-20"


@pytest.mark.parametrize(
    "kwargs",
    [dict(lo=1.0, hi=0.5), dict(steps=1), dict(phi_fracs=[0.0]), dict(phi_fracs=[1.2]), dict(n_photons=[0])],
)
def test_scan_spec_validation(kwargs):
    with pytest.raises(ValueError):
        ScanSpec(**kwargs).validate()


def test_figure1_header_and_anchor_row():
    header, rows = figure1_rows(ScanSpec(n_photons=[3], steps=5))
    assert header == ["gamma_t", "n", "res_phi_1", "res_phi_0.75", "res_phi_0.5", "res_phi_0.25", "res_distill"]
    first = rows[0]
    assert first[0] == 0.0 and first[1] == 3
    assert first[2] == pytest.approx(3.0, rel=1e-12)
    assert first[-1] == pytest.approx(3.0, rel=1e-12)


def test_figure1_phase_ordering():
    _, rows = figure1_rows(ScanSpec(n_photons=[2, 3, 4], steps=40))
    for row in rows:
        res = row[2:6]
        assert all(a >= b * (1 - 1e-12) for a, b in zip(res, res[1:]))


def test_figure1_wrong_mode():
    with pytest.raises(ValueError):
        figure1_rows(ScanSpec(mode="amplitude"))
    with pytest.raises(ValueError):
        figure2_rows(ScanSpec(mode="dephasing"))


def test_figure2_header_and_anchor_row():
    header, rows = figure2_rows(ScanSpec(n_photons=[4], mode="amplitude", hi=1.0, steps=5))
    assert header == ["Gamma_t", "n", "res_best", "res_dl", "res_du"]
    assert rows[0][2:] == pytest.approx([4.0, 4.0, 4.0], rel=1e-12)


def test_figure2_bound_ordering():
    _, rows = figure2_rows(ScanSpec(n_photons=[2, 3, 4], mode="amplitude", hi=1.0, steps=50))
    assert all(row[3] >= row[4] * (1 - 1e-12) for row in rows)


def test_figure1_csv_round_trip(capsys):
    code, out, _ = run(capsys, "figure1", "--n", "2", "3", "--steps", "7", "--max", "0.3")
    assert code == EXIT_OK
    assert "\r" not in out
    reader = list(csv.DictReader(io.StringIO(out)))
    assert len(reader) == 14
    for row in reader:
        n, g = int(row["n"]), float(row["gamma_t"])
        p = DampingParams.symmetric(n, 0.0, g)
        res = 1.0 / phase_deviation(p, 0.5 * math.pi / (2 * n))
        assert row["res_phi_0.5"] == fmt(res)
        e_d = distillable_entanglement_dephasing(n, g)
        assert row["res_distill"] == fmt(1.0 / distillation_phase_deviation(n, e_d))


def test_json_table():
    header, rows = figure2_rows(ScanSpec(n_photons=[2], mode="amplitude", hi=1.0, steps=3))
    records = json.loads(render_table(header, rows, "json"))
    assert records[0] == {"Gamma_t": 0.0, "n": 2, "res_best": 2.0, "res_dl": 2.0, "res_du": 2.0}


def test_report_undamped(capsys):
    code, out, _ = run(capsys, "report", "--n", "2", "--Gamma-t", "0", "--gamma-t", "0")
    assert code == EXIT_OK
    rec = parse_record(out)
    assert rec["e_r"] == 1.0 and rec["i_c"] == 1.0
    assert rec["ppt_min"] == -0.5 and rec["best_res"] == 2.0
    assert rec["numeric"] is False


def test_report_symmetric_amplitude(capsys):
    code, out, _ = run(capsys, "report", "--n", "2", "--Gamma-t", "0.1")
    rec = parse_record(out)
    assert code == EXIT_OK
    assert rec["e_r"] == pytest.approx(0.7647, abs=5e-5)
    assert rec["numeric"] is False
    assert "e_d" not in rec
    assert {"c_00", "c_10", "c_20", "c_01", "c_02", "c_off", "e_f_upper", "delta_phi_best"} <= rec.keys()


def test_report_dephasing_has_distillable(capsys):
    _, out, _ = run(capsys, "report", "--n", "2", "--gamma-t", "0.1")
    rec = parse_record(out)
    assert rec["e_d"] == pytest.approx(rec["e_r"], abs=1e-11)


def test_report_asymmetric_is_numeric(capsys):
    code, out, _ = run(capsys, "report", "--n", "2", "--Gamma1-t", "0.1", "--Gamma2-t", "0.3", "--starts", "8")
    rec = parse_record(out)
    assert code == EXIT_OK
    assert rec["numeric"] is True
    assert 0.0 < rec["e_r"] < 1.0
    assert rec["certificate_passed"] is True


def test_report_csv_format(capsys):
    _, out, _ = run(capsys, "report", "--n", "1", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert "e_r,1" in lines


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--Gamma-t", "0.1", "--starts", "64", "--seed", "0")
    rec = parse_record(out)
    assert code == EXIT_OK
    assert rec["passed"] is True
    assert rec["max_product_overlap"] <= 1.0 + 1e-8


def test_verify_perturbed_fails(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--Gamma-t", "0.1", "--starts", "16", "--perturb", "0.05")
    assert code == EXIT_CERT
    assert parse_record(out)["passed"] is False


def test_verify_separable_point_passes(capsys):
    code, _, _ = run(capsys, "verify", "--n", "2", "--Gamma-t", "0.2", "--gamma-t", "500", "--starts", "8")
    assert code == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        ["report"],
        ["report", "--n", "2", "3"],
        ["verify", "--n", "2", "--starts", "0"],
        ["report", "--n", "2", "--Gamma-t", "-1"],
        ["figure1", "--min", "0.5", "--max", "0.1"],
        ["figure2", "--format", "xml"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == EXIT_USAGE


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "figure2", "--steps", "3", "--out", str(target))
    assert code == EXIT_IO
    assert "cannot write" in err


def test_output_file(capsys, tmp_path):
    target = tmp_path / "fig2.csv"
    code, out, _ = run(capsys, "figure2", "--n", "2", "--steps", "3", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_bytes().startswith(b"Gamma_t,n,res_best,res_dl,res_du\n")
