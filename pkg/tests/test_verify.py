import json
from fractions import Fraction

import pytest

from yangian_eval.seriesop import op_letter, op_zero
from yangian_eval.verify import (
    Trial,
    cartan,
    check_current,
    check_iota_suite,
    check_minimalistic,
    check_minor_lemmas,
    check_omega_symmetry,
    check_rtt_like,
    check_symfun,
    check_thm_ref_and_conventions,
    run_instances,
    run_suites,
)

ALLOWED = {"pass", "fail", "not-in-paper", "range-excluded", "mismatch"}


def test_cartan_matrix():
    assert [[cartan(3, i, j) for j in range(3)] for i in range(3)] == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert cartan(4, 0, 2) == 0 and cartan(4, 0, 3) == -1


def test_small_rtt_suite_and_schema():
    rep = check_rtt_like(3, 2, 2, 1, seed=1)
    assert not rep.failed()
    d = json.loads(rep.to_json())
    assert set(d["config"]) >= {"n", "D", "R", "trials", "seed", "module", "convention", "normalization"}
    for row in d["results"]:
        assert set(row) >= {"id", "indices", "status", "residual", "millis"}
        assert row["status"] in ALLOWED
        if row["status"] == "pass":
            assert row["residual"] == ""


def test_failures_are_reported_not_raised():
    trial = [Trial(3, 1, 1, {"hbar": Fraction(1), "c": Fraction(2), "lam": Fraction(0)})]
    inst = [("bogus", {}, lambda tr: (op_letter(3, 1, 2), op_zero(3)), "check"),
            ("bogus-probe", {}, lambda tr: (op_letter(3, 1, 2), op_zero(3)), "probe")]
    rows = run_instances(inst, trial)
    assert rows[0].status == "fail" and "depth 1" in rows[0].residual
    assert rows[1].status == "mismatch"


def test_natural_modules():
    for module in ("natural", "natural2"):
        assert not check_rtt_like(3, 2, 1, 1, seed=3, module=module).failed()


def test_minimalistic_small():
    rep = check_minimalistic(3, 1, 1, seed=2)
    assert not rep.failed()
    assert rep.count("not-in-paper") >= 1
    assert rep.count("pass", "Eq2.10") == 12


def test_current_small():
    rep = check_current(3, 2, 4, 1, 1, seed=2)
    assert not rep.failed()
    with pytest.raises(ValueError):
        check_current(3, 3, 4, 1, 1)


def test_iota_small():
    rep = check_iota_suite(3, 2, 3, 1, seed=2)
    assert not rep.failed()
    statuses = {(r.id, r.indices["normalization"]): r.status for r in rep.results if r.id == "Eq2.16"}
    assert statuses[("Eq2.16", "derived")] == "pass"
    assert statuses[("Eq2.16", "printed")] == "mismatch"


def test_minor_lemmas_small():
    rep = check_minor_lemmas(3, 2, 1, 1, seed=2, R_vanish=3)
    assert not rep.failed()
    assert rep.count("mismatch", "al101-printed") > 0


def test_probe_matrix_names_one_configuration():
    rep = check_thm_ref_and_conventions(3, 2, 2, 1, seed=4)
    assert not rep.failed()
    assert rep.config["canonical"] == {"convention": "hbar-scaled", "shift": "reflected", "normalization": "derived"}
    assert rep.count("pass", "probe-matrix") == 1


def test_omega_and_symfun():
    rep = check_omega_symmetry(3, 3)
    assert not rep.failed() and rep.count("mismatch", "omega-literal") > 0
    assert not check_symfun(4, 3).failed()


def test_reports_are_deterministic():
    a = run_suites(["ga", "omega"], n=3, D=1, R=3, r_max=2, trials=2, seed=11)
    b = run_suites(["ga", "omega"], n=3, D=1, R=3, r_max=2, trials=2, seed=11)
    assert a.to_json(timings=False) == b.to_json(timings=False)
    c = run_suites(["ga"], n=3, D=1, R=3, r_max=2, trials=2, seed=12)
    assert c.config["ga"]["parameters"] != a.config["ga"]["parameters"]


def test_thread_fan_out_gives_the_same_report(monkeypatch):
    base = check_rtt_like(3, 1, 1, 2, seed=5).to_json(timings=False)
    monkeypatch.setenv("YANGIAN_EVAL_THREADS", "2")
    assert check_rtt_like(3, 1, 1, 2, seed=5).to_json(timings=False) == base
