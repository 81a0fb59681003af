"""Command-line surface: frozen examples, exit codes, output determinism, file emission."""

import json
import os
from fractions import Fraction

import pytest

from jackdunkl.cli import main, poly_text
from jackdunkl.exactpoly import LaurentPoly
from jackdunkl.laplace import verify_kadell
from jackdunkl.combinatorics import Params
from jackdunkl.plotting import fmt_float, residual_figure, write_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- frozen command examples --------------------------------------------------


def test_expand_example_is_single_variable(capsys):
    code, out, _ = run_cli(capsys, "jack", "expand", "--n", "2", "--k", "1/2", "--eta", "0,1")
    assert code == 0
    assert out.strip() == "x2"


def test_series_example_matches_exponential(capsys):
    code, out, _ = run_cli(
        capsys,
        "series", "eval", "--type", "0F0", "--z", "1,1", "--w", "1,1",
        "--k", "1", "--tol", "1e-10",
    )
    assert code == 0
    first = out.splitlines()[0]
    assert first.startswith("value: 7.38905609893")


def test_expand_json_lists_exact_coefficients(capsys):
    code, out, _ = run_cli(
        capsys,
        "jack", "expand", "--n", "2", "--k", "1", "--eta", "2,0", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["eta"] == [2, 0]
    coeffs = {tuple(t["exponent"]): t["coefficient"] for t in doc["polynomial"]}
    assert coeffs == {(2, 0): "1", (1, 1): "2/3", (0, 2): "1/3"}


def test_eval_reports_exact_fraction(capsys):
    code, out, _ = run_cli(
        capsys,
        "jack", "eval", "--n", "2", "--k", "1/2", "--eta", "1,1", "--point", "1/2,2/3",
    )
    assert code == 0
    value = out.strip().split(" = ")[0]
    assert Fraction(value) == Fraction(1, 3)


# -- text rendering -----------------------------------------------------------


def test_poly_text_folds_signs_and_units():
    p = LaurentPoly(2, {(2, 0): Fraction(1), (0, 1): Fraction(-1, 2)})
    assert poly_text(p) == "x1^2 - 1/2*x2"
    assert poly_text(LaurentPoly(2)) == "0"
    assert poly_text(LaurentPoly(2, {(0, 0): Fraction(3, 4)})) == "3/4"
    assert poly_text(LaurentPoly(1, {(-2,): Fraction(-1)})) == "-x1^-2"


def test_table_csv_has_header_and_rows(capsys):
    code, out, _ = run_cli(
        capsys,
        "jack", "table", "--n", "2", "--k", "1", "--maxweight", "2", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("eta,weight,spectral_vector,")
    assert len(lines) == 1 + 6


def test_table_json_round_trips(capsys):
    code, out, _ = run_cli(
        capsys,
        "jack", "table", "--n", "2", "--k", "1/2", "--maxweight", "1", "--format", "json",
    )
    assert code == 0
    rows = json.loads(out)
    assert [r["eta"] for r in rows] == ["0,0", "1,0", "0,1"]
    assert all(Fraction(r["valueAtOnes"]) > 0 for r in rows)


# -- exit-code contract -------------------------------------------------------


def test_bad_series_type_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "series", "eval", "--type", "3Z1", "--z", "1")
    assert code == 2
    assert "error:" in err


def test_wrong_parameter_count_is_usage_error(capsys):
    code, _, err = run_cli(
        capsys,
        "series", "eval", "--type", "1K1", "--z", "0.5,0.5", "--upper", "2.0,3.0",
        "--lower", "2.5",
    )
    assert code == 2
    assert "error:" in err


def test_eta_length_mismatch_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "jack", "expand", "--n", "3", "--k", "1", "--eta", "1,0")
    assert code == 2
    assert "error:" in err


def test_domain_violation_is_usage_error(capsys):
    code, _, err = run_cli(
        capsys,
        "verify", "master", "--n", "2", "--k", "1/2", "--eta", "0,0",
        "--mu", "0.2", "--z", "2,3",
    )
    assert code == 2
    assert "error:" in err


def test_verification_failure_exits_one(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "master", "--n", "1", "--k", "0", "--eta", "1",
        "--mu", "1.5", "--z", "2", "--tol", "1e-15",
    )
    assert code == 1
    assert "FAIL" in out


def test_verification_pass_exits_zero(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "master", "--n", "1", "--k", "0", "--eta", "1",
        "--mu", "1.5", "--z", "2",
    )
    assert code == 0
    assert "PASS" in out


# -- suite runner -------------------------------------------------------------


def test_suite_subset_runs_and_reports(capsys):
    code, out, _ = run_cli(capsys, "verify", "all", "--only", "gram-schmidt")
    assert code == 0
    assert "[PASS] gram-schmidt" in out
    assert "suite desk: 9/9 checks passed" in out


def test_suite_rejects_unknown_key(capsys):
    code, _, err = run_cli(capsys, "verify", "all", "--only", "no-such-criterion")
    assert code == 2
    assert "no-such-criterion" in err


def test_suite_writes_summary_files(tmp_path, capsys):
    code, _, _ = run_cli(
        capsys,
        "verify", "all", "--only", "gram-schmidt", "--out-dir", str(tmp_path),
    )
    assert code == 0
    assert (tmp_path / "suite.json").is_file()
    assert (tmp_path / "suite.png").is_file()
    assert (tmp_path / "suite.csv").is_file()
    doc = json.loads((tmp_path / "suite.json").read_text())
    assert doc[0]["criterion"] == "gram-schmidt"
    assert all(c["pass"] for c in doc[0]["checks"])


# -- report files and determinism ---------------------------------------------


def test_verify_emits_report_and_figure(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "master", "--n", "1", "--k", "0", "--eta", "1",
        "--mu", "1.5", "--z", "2", "--format", "json", "--out-dir", str(tmp_path),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["identityName"] == "master"
    assert (tmp_path / "master.json").is_file()
    assert (tmp_path / "master_convergence.png").is_file()
    assert (tmp_path / "master_convergence.csv").is_file()
    rows = (tmp_path / "master_convergence.csv").read_text().strip().splitlines()
    assert rows[0] == "start_points_per_axis,rel_error,runtime_ms"
    assert len(rows) == 4


def test_json_output_is_deterministic(capsys):
    argv = (
        "verify", "kadell", "--n", "2", "--k", "1/2", "--lam", "1,0",
        "--mu", "2", "--nu", "2.5", "--format", "json",
    )
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    docs = [json.loads(o) for o in (out1, out2)]
    for doc in docs:
        doc.pop("runtimeMs")
    assert docs[0] == docs[1]


def test_postwidder_demo_converges(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "postwidder", "--n", "1", "--k", "0", "--xi", "1",
        "--orders", "5,10", "--out-dir", str(tmp_path),
    )
    assert code == 0
    assert "PASS" in out
    assert (tmp_path / "postwidder.json").is_file()
    assert (tmp_path / "postwidder_decay.png").is_file()
    assert (tmp_path / "postwidder_decay.csv").is_file()


def test_series_eval_emits_convergence_files(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "series", "eval", "--type", "0F0", "--z", "0.5,0.5", "--k", "1",
        "--out-dir", str(tmp_path),
    )
    assert code == 0
    assert (tmp_path / "series_0f0.png").is_file()
    assert (tmp_path / "series_0f0.csv").is_file()


def test_plot_convergence_writes_pair(tmp_path, capsys):
    stem = tmp_path / "demo"
    code, _, _ = run_cli(
        capsys,
        "plot", "convergence", "--type", "1K1", "--z", "0.4", "--w", "0.5",
        "--upper", "2.0", "--lower", "2.5", "--k", "1/2", "--out", str(stem),
    )
    assert code == 0
    assert stem.with_suffix(".png").is_file()
    assert stem.with_suffix(".csv").is_file()


# -- cache commands -----------------------------------------------------------


def test_cache_build_and_inspect(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "cache", "build", "--n", "2", "--k", "1/2", "--maxweight", "3",
        "--cache-dir", str(tmp_path),
    )
    assert code == 0
    assert "cache ready" in out
    code, out, _ = run_cli(
        capsys, "cache", "inspect", "--cache-dir", str(tmp_path), "--format", "json",
    )
    assert code == 0
    entries = json.loads(out)
    assert len(entries) == 1
    assert entries[0]["state"] == "ok"
    assert entries[0]["entries"] == 10


def test_cache_inspect_empty_dir(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "cache", "inspect", "--cache-dir", str(tmp_path / "none"))
    assert code == 0
    assert "no cache directory" in out


def test_cache_env_variable_is_honored(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("JACKDUNKL_CACHE_DIR", str(tmp_path))
    code, _, _ = run_cli(capsys, "cache", "build", "--n", "1", "--k", "1", "--maxweight", "2")
    assert code == 0
    assert list(tmp_path.glob("jack_n1_*.json.gz"))


# -- figure helpers not exercised through a subcommand ------------------------


def test_fmt_float_is_stable():
    assert fmt_float(0.1 + 0.2) == "0.3"
    assert fmt_float(complex(1.0, -2.0)) == "1-2j"


def test_write_csv_places_numbers_verbatim(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ("a", "b"), [(1.0, "x"), (0.25, "y")])
    assert path.read_text() == "a,b\n1,x\n0.25,y\n"


def test_residual_figure_renders_batch(tmp_path):
    p = Params(2, Fraction(1, 2))
    reports = [
        verify_kadell(p, (0, 0), 2.0, 2.5),
        verify_kadell(p, (1, 0), 2.0, 2.5),
    ]
    png, csv_path = residual_figure(reports, str(tmp_path / "resid.png"))
    assert os.path.isfile(png) and os.path.isfile(csv_path)
    with open(csv_path, encoding="utf-8") as fh:
        header = fh.readline().strip()
    assert header == "identity,lhs,rhs,rel_error,tolerance,verdict,runtime_ms"
