import csv
import io
import json

import pytest

from boolfour import verify as vf
from boolfour.gate import UNIFORM, InputMeasure, enumerate_gates, make_gate


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "duration_s"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


@pytest.fixture(scope="module")
def bivariate():
    return vf.verify_bivariate()


@pytest.fixture(scope="module")
def trivariate():
    return vf.verify_trivariate((0.25, 0.75))


def test_bivariate_suite_passes(bivariate):
    assert bivariate.ok, bivariate.failures()[:5]
    assert bivariate.gate_count == 16
    for name in ("bivariate_exact", "pid_identities", "unate_sign_recovery", "unate_pair_relation",
                 "monotone_consistency", "bivariate_stab_variant", "poincare_pid_chain"):
        assert bivariate.checks[name].evaluated > 0


def test_bivariate_flags_printed_forms(bivariate):
    flags = bivariate.flags
    assert flags["printed_pbiased_bivariate_scale"].failed > 0
    assert flags["printed_pair_relation"].failed > 0
    assert flags["printed_stability"].failed > 0


def test_trivariate_suite_passes(trivariate):
    assert trivariate.ok, trivariate.failures()[:5]
    assert trivariate.gate_count == 256
    assert trivariate.checks["bounds_containment"].failed == 0
    assert trivariate.flags["printed_trivariate_monotone"].failed > 0
    assert trivariate.extras["self_checks_ok"]


def test_trivariate_monotone_count(trivariate):
    text = json.dumps(trivariate.extras)
    assert str(vf.EXPECTED_MONOTONE_3) in text


def test_report_json_shape(bivariate):
    out = bivariate.to_json()
    assert set(out) == {"schema", "suite", "gate_count", "pid_measure", "ok", "checks",
                        "printed_formula_discrepancies", "extras", "duration_s"}
    assert out["pid_measure"] == "imin"
    json.loads(vf.dumps(bivariate.to_json(include_records=True)))


def test_report_csv(bivariate):
    rows = list(csv.DictReader(io.StringIO(bivariate.to_csv())))
    assert len(rows) == len(bivariate.records)
    assert set(rows[0]) == {"gate", "measure", "check", "residual", "pass"}


def test_failures_are_reported():
    rec = vf.CheckRecord("2:0001", "uniform", "demo", 0.5, False)
    rep = vf.VerificationReport("demo", 1, [rec])
    assert not rep.ok
    assert rep.failures() == [rec]
    assert rep.to_json()["checks"]["demo"]["fail"] == 1


def test_infinite_residual_serializes_as_null():
    rec = vf.CheckRecord("g", "uniform", "demo", float("inf"), False)
    assert rec.to_json()["residual"] is None
    vf.dumps(vf.VerificationReport("demo", 1, [rec]).to_json(include_records=True))


def test_determinism_and_thread_independence(monkeypatch):
    a = vf.verify_bivariate((0.25,)).to_json(include_records=True)
    monkeypatch.setenv("BOOLFOUR_THREADS", "4")
    assert vf.thread_count() == 4
    b = vf.verify_bivariate((0.25,)).to_json(include_records=True)
    assert _strip_timing(a) == _strip_timing(b)
    monkeypatch.setenv("BOOLFOUR_THREADS", "junk")
    assert vf.thread_count() == 1


def test_merge_reports():
    a = vf.parseval_sweep((0.25,), max_n=2)
    b = vf.exact_influence_sweep(max_n=2)
    merged = vf.merge_reports("both", [a, b])
    assert merged.gate_count == a.gate_count + b.gate_count
    assert len(merged.records) == len(a.records) + len(b.records)
    assert merged.ok


def test_identity_sweeps():
    for rep in (vf.parseval_sweep(), vf.exact_influence_sweep(), vf.fourier_entropy_sweep((0.3,)),
                vf.influence_identity_sweep((0.3,))):
        assert rep.ok, rep.failures()[:3]
    assert vf.parseval_sweep(max_n=4).gate_count == 4 + 16 + 256 + 65536


def test_conjecture_scan_default():
    res = vf.conjecture_scan()
    assert res.passed
    assert res.gate_count == 256
    assert res.to_json()["measure"] == "imin"
    assert "evidence" in res.to_json()["note"]


def test_conjecture_scan_huge_eps_collides():
    res = vf.conjecture_scan(eps=10.0)
    assert not res.passed
    assert len(res.groups) == 1 and len(res.groups[0]) == 256


def test_conjecture_scan_only_imin():
    with pytest.raises(ValueError):
        vf.conjecture_scan(measure="mmi")


def test_mapping_reports_for_single_gates():
    reps = vf.mapping_reports(make_gate("MAJ3"))
    by_name = {r.theorem: r for r in reps}
    assert by_name["trivariate-bounds"].passed
    assert by_name["trivariate-bounds"].residuals["min_slack"] == pytest.approx(0.125)
    assert by_name["trivariate-unate"].passed
    assert by_name["trivariate-monotone-printed"].printed_formula_discrepancy
    reps = vf.mapping_reports(make_gate("AND"), InputMeasure.pbiased(0.75))
    assert {r.theorem for r in reps} == {"bivariate-exact", "bivariate-unate"}
    assert all(r.passed for r in reps)
    assert vf.mapping_reports(make_gate("DICT_1_1")) == []


def test_p_sweep_rows():
    rows = vf.p_sweep(list(enumerate_gates(2)), [0.2, 0.5])
    assert [r["p"] for r in rows] == [0.2, 0.5]
    assert all(set(r) == set(vf.SWEEP_COLUMNS) for r in rows)
    assert all(r["max_exact_residual"] < 1e-9 for r in rows)
    assert rows[0]["contained"] is None
    rows = vf.p_sweep([make_gate("MAJ3")], [0.3])
    assert rows[0]["contained"] == 1 and rows[0]["min_bound_slack"] > 0


def test_run_all_arity_two():
    rep = vf.run_all((0.25,), arity=2)
    assert rep.ok and rep.suite == "arity2"
    assert UNIFORM.to_json() in {r.measure for r in rep.records}
