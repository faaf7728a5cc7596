"""Verifier plumbing and CLI tests: statuses, refusal loci, report
determinism, serialization round-trip, and exit codes."""

import json
import math

import pytest

from ellr.rmatrix import make_params
from ellr import verifiers as V
from ellr.cli import main, emit, parse_report, build_report, resolve_config, UsageError


P31 = make_params(3, 1)


# ---------------------------------------------------------------------------
# Verifier behavior
# ---------------------------------------------------------------------------


def test_all_checks_known():
    results = V.run_suite(P31, ["theta", "qybe"], seed=0)
    assert all(r.status == "pass" for r in results)


def test_unknown_check_rejected():
    with pytest.raises(ValueError):
        V.run_suite(P31, ["nonsense"])


def test_refusal_on_torsion_tau():
    pt = make_params(3, 1, tau=1 / 3)
    results = V.det_check(pt)
    assert results[0].status == "refused"
    results = V.hilbert_check(pt)
    assert results[0].status == "refused"


def test_half_torsion_nullity_recorded_not_asserted():
    ph = make_params(3, 1, tau=1 / 6)
    (res,) = V.nullity_table(ph)
    assert res.status == "refused"
    obs = res.params["observed_nullities"]["nullity_at_tau"]
    assert obs >= 6  # the only claim available on this locus is a lower bound


def test_report_summary_and_ok():
    results = V.run_suite(P31, ["qybe"], seed=0)
    rep = V.Report(V.VERSION, {"n": 3}, results).finalize()
    s = rep.summary
    assert s["fail"] == 0 and s["total"] == len(results)
    assert rep.ok


def test_failing_check_surfaces():
    # a deliberately wrong expectation must produce a fail, never a silent pass
    bad = V.CheckResult("synthetic", {}, 0, 1, 1.0, "fail", 0.0)
    rep = V.Report(V.VERSION, {}, [bad])
    assert not rep.ok and rep.summary["fail"] == 1


def test_results_deterministically_ordered():
    r1 = V.Report(V.VERSION, {}, V.run_suite(P31, ["transforms"], seed=0)).finalize()
    r2 = V.Report(V.VERSION, {}, V.run_suite(P31, ["transforms"], seed=0)).finalize()
    assert [r.name for r in r1.results] == [r.name for r in r2.results]


def test_empty_check_list_gives_zero_summary():
    rep = V.Report(V.VERSION, {}, []).finalize()
    assert rep.summary == {"pass": 0, "fail": 0, "ambiguous": 0, "refused": 0,
                           "total": 0}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _small_report():
    cfg = resolve_config(_Args())
    return build_report(cfg, ["qybe"])


class _Args:
    n = 3
    k = 1
    eta = None
    tau = None
    d_max = None
    seed = None
    precision = None
    out = None
    format = None
    allow_ambiguous = None
    timings = None
    config = None
    command = "check"
    which = "qybe"


def test_json_round_trip():
    rep = _small_report()
    text = emit(rep, "json")
    back = parse_report(text)
    assert emit(back, "json") == text
    assert back.version == rep.version
    assert back.summary == rep.summary


def test_round_trip_with_timings_is_identity():
    rep = _small_report()
    text = emit(rep, "json", keep_times=True)
    assert parse_report(text) == rep


def test_emit_byte_stable():
    a = emit(build_report(resolve_config(_Args()), ["qybe"]), "json")
    b = emit(build_report(resolve_config(_Args()), ["qybe"]), "json")
    assert a == b


def test_csv_emission():
    text = emit(_small_report(), "csv")
    lines = text.strip().split("\n")
    assert lines[0].startswith("name,status,residual")
    assert len(lines) == 3  # header + two qybe rows


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_check_qybe_exit_zero(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["check", "qybe", "--n", "3", "--k", "1", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["version"] == V.VERSION
    assert data["summary"]["fail"] == 0
    header = capsys.readouterr().out
    assert "eta=0.31+1.37i" in header.replace(" ", "").replace("+0.31", "0.31") or "0.31" in header


def test_cli_hilbert_series(tmp_path, capsys):
    out = tmp_path / "h.json"
    assert main(["hilbert", "--n", "3", "--d-max", "4", "--out", str(out)]) == 0
    shown = capsys.readouterr().out
    assert "1,3,6,10,15" in shown


def test_cli_usage_errors():
    assert main(["check", "qybe", "--n", "4", "--k", "2"]) == 2  # not coprime
    assert main(["check", "qybe", "--eta", "bogus"]) == 2
    assert main(["check", "qybe", "--d-max", "9"]) == 2
    assert main(["bogus-subcommand"]) == 2


def test_cli_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 3, "k": 2, "seed": 5}))
    out = tmp_path / "rep.json"
    assert main(["check", "qybe", "--config", str(cfg), "--k", "1",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["config"]["k"] == 1  # flag wins
    assert data["config"]["seed"] == 5  # file value kept


def test_cli_rejects_unknown_config_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 3, "bogus": 1}))
    assert main(["check", "qybe", "--config", str(cfg)]) == 2


def test_cli_io_error_exit_two():
    assert main(["check", "qybe", "--out", "/nonexistent-dir/x.json"]) == 2


def test_cli_report_all_byte_stable(tmp_path):
    o1, o2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["report", "all", "--n", "3", "--k", "1", "--out", str(o1)]) == 0
    assert main(["report", "all", "--n", "3", "--k", "1", "--out", str(o2)]) == 0
    assert o1.read_bytes() == o2.read_bytes()


def test_cli_csv_format(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["check", "transforms", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().startswith("name,status,residual")


def test_config_validation():
    with pytest.raises(UsageError):
        args = _Args()
        args.d_max = 9
        resolve_config(args)
