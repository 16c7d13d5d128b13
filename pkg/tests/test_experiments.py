import math

import pytest

from weylcap.experiments import (
    FIELDNAMES,
    SweepRow,
    run_sweep,
    special_report,
    sweep_csv_text,
    sweep_row,
    thread_limit,
)


def test_fieldnames():
    assert FIELDNAMES == (
        "seed",
        "d",
        "chi_lb",
        "chi_ub",
        "chi_opt",
        "coincide",
        "dset_achievable",
        "argmin_n",
        "argmin_m",
        "lb_runtime_seconds",
    )


def test_sweep_row_without_oracle():
    row = sweep_row(3, 4, oracle=False)
    assert row.chi_opt is None and row.lb_runtime_seconds is None
    assert row.seed == 4 and row.d == 3
    assert row.chi_lb <= row.chi_ub + 1e-9


def test_run_sweep_order_and_seeds():
    rows = run_sweep(3, 12, seed=100, oracle=False, workers=1)
    assert sorted(r.seed for r in rows) == list(range(100, 112))
    ub = [r.chi_ub for r in rows]
    assert ub == sorted(ub, reverse=True)


def test_parallel_sweep_matches_serial():
    a = run_sweep(2, 8, oracle=False, workers=1)
    b = run_sweep(2, 8, oracle=False, workers=2)
    assert sweep_csv_text(a) == sweep_csv_text(b)


def test_run_sweep_rejects_empty():
    with pytest.raises(ValueError):
        run_sweep(2, 0)


def test_normalized_row():
    row = SweepRow(1, 4, 1.0, 1.5, None, False, False, 0, 1, None)
    n = row.normalized()
    assert (n.chi_lb, n.chi_ub, n.chi_opt) == (0.5, 0.75, None)


def test_csv_formatting():
    row = SweepRow(1, 2, 0.1, 1 / 3, None, True, False, 0, 1, None)
    text = sweep_csv_text([row])
    assert text.split("\r\n")[1] == "1,2,0.10000000000000001,0.33333333333333331,,true,false,0,1,"


def test_thread_limit(monkeypatch):
    monkeypatch.setenv("WEYLCAP_THREADS", "1")
    assert thread_limit() == 1
    monkeypatch.setenv("WEYLCAP_THREADS", "junk")
    assert thread_limit() >= 1


def test_special_report_depol_like_two_qudit():
    rep = special_report("depol-like-2", 3, eta=0.7, kappa=0.8, idx_a=(0, 1), idx_b=(1, 0))
    assert rep["coincide"]
    assert rep["abs_diff_lb"] < 1e-9 and rep["abs_diff_ub"] < 1e-9


def test_special_report_depolarizing_fully_mixed():
    rep = special_report("depolarizing", 5, mu=1.0)
    assert rep["analytic"] == pytest.approx(0.0, abs=1e-15)
    assert rep["chi_ub"] <= math.log2(5)


def test_special_report_unknown():
    with pytest.raises(ValueError):
        special_report("amplitude-damping", 2)
