import json

import pytest
from mpmath import mp, mpf, mpc

from zetalab.precision import Precision
from zetalab.numeric import DomainError
from zetalab.weilform import LogInterval, TrigTestFunction
from zetalab.zeroapprox import (EntireEvaluator, argument_count,
                                difference_table, eta_hat, find_real_zeros,
                                write_report_csv, write_report_json)
from zetalab.zeros_io import ZeroList

P40 = Precision(40)


def _mode_free_evaluator(lam2, coeffs, digits=40):
    iv = LogInterval.from_pmax(lam2, Precision(digits))
    f = TrigTestFunction(interval=iv, coeffs=[mpf(c) for c in coeffs],
                         digits=digits)
    return EntireEvaluator.from_test_function(f), iv


# ----------------------------------------------------------------------
# the entire evaluator
# ----------------------------------------------------------------------

def test_eta_hat_constant_mode_at_zero():
    ev, iv = _mode_free_evaluator(5, [1, 0, 0])
    with mp.workdps(50):
        assert abs(eta_hat(ev, 0) - mp.sqrt(iv.length)) < mpf("1e-35")


def test_eta_hat_cosine_modes_vanish_at_zero():
    for k in (1, 2, 3):
        coeffs = [0] * 4
        coeffs[k] = 1
        ev, _ = _mode_free_evaluator(5, coeffs)
        assert eta_hat(ev, 0) == 0


def test_eta_hat_reality_symmetry():
    ev, _ = _mode_free_evaluator(5, [1, "0.5", "-0.25", "0.125"])
    with mp.workdps(50):
        z = mpc(1, "0.2")
        assert abs(eta_hat(ev, z) - mp.conj(eta_hat(ev, mp.conj(z)))) < mpf("1e-35")


def test_eta_hat_matches_direct_transform():
    # closed form vs brute quadrature int f(s) e^{-isz} ds
    ev, iv = _mode_free_evaluator(5, ["0.6", "-0.3", "0.4", "0.2"])
    f = TrigTestFunction(interval=iv, coeffs=[mpf("0.6"), mpf("-0.3"),
                                              mpf("0.4"), mpf("0.2")], digits=40)
    with mp.workdps(60):
        L = iv.length
        for z in (mpf("3.1"), mpc("2.0", "0.4"), mpf("17.3")):
            direct = mp.quad(lambda s: f(s) * mp.exp(-mpc(0, 1) * s * z),
                             [-L / 2, 0, L / 2])
            assert abs(ev(z) - direct) < mpf("1e-35")


def test_eta_hat_lattice_points_are_removable():
    ev, iv = _mode_free_evaluator(5, [1, "0.5", "0.25"])
    with mp.workdps(50):
        w2 = iv.omega(2)
        exact = ev(w2)
        near = ev(w2 + mpf(10) ** -25)
        assert abs(exact - near) < mpf("1e-20")
        assert mp.isfinite(exact)


def test_sinc_zeros_of_constant_mode():
    # with only the constant coefficient the transform is a dilated sinc:
    # zeros exactly at 2 pi k / L (analytic oracle)
    ev, iv = _mode_free_evaluator(5, [1])
    zl = find_real_zeros(ev, 20, P40)
    with mp.workdps(50):
        L = iv.length
        for i, g in enumerate(zl, start=1):
            assert abs(g - 2 * mp.pi * i / L) < mpf("1e-30")


def test_phase_invariance_of_zero_list():
    ev1, _ = _mode_free_evaluator(5, [1, "0.4", "0.2"])
    ev2, _ = _mode_free_evaluator(5, [-1, "-0.4", "-0.2"])
    z1 = find_real_zeros(ev1, 15, P40)
    z2 = find_real_zeros(ev2, 15, P40)
    assert all(a == b for a, b in zip(z1, z2))


# ----------------------------------------------------------------------
# argument principle
# ----------------------------------------------------------------------

def test_argument_count_empty_rectangle(ci_mode):
    ev = EntireEvaluator.from_mode(ci_mode.mode)
    assert argument_count(ev, (16, 19, -1, 1), Precision(60)) == 0


def test_argument_count_isolates_first_zero(ci_mode):
    ev = EntireEvaluator.from_mode(ci_mode.mode)
    assert argument_count(ev, (13, 15, -1, 1), Precision(60)) == 1


def test_reality_rectangle_vs_real_zeros(ci_mode):
    assert ci_mode.rectangle_count == ci_mode.rectangle_real_count


# ----------------------------------------------------------------------
# difference table
# ----------------------------------------------------------------------

def test_difference_table_identical_lists():
    zl = ZeroList([mpf(14), mpf(21), mpf(25)], digits=30, source="imported")
    table = difference_table(zl, zl, 3)
    assert all(d == 0 for d in table.diffs)
    assert table.largest == 0


def test_difference_table_statistics():
    a = ZeroList([mpf(1), mpf(2), mpf(3), mpf(4)], digits=30, source="imported")
    b = ZeroList([mpf("1.1"), mpf("2.2"), mpf("3.3"), mpf("4.4")],
                 digits=30, source="imported")
    t = difference_table(a, b, 4)
    with mp.workdps(35):
        assert abs(t.first - mpf("0.1")) < mpf("1e-20")
        assert abs(t.largest - mpf("0.4")) < mpf("1e-20")
    with pytest.raises(DomainError):
        difference_table(a, b, 5)


def test_ci_mode_difference_quality(ci_mode):
    """CI-scale reproduction: first difference far below 1e-8 and the
    table degrades (weakly) toward later zeros."""
    table = ci_mode.table
    assert table.first < mpf("1e-8")
    assert table.median_head <= table.median_tail
    assert ci_mode.mode.verified


def test_report_serialization(ci_mode, tmp_path):
    rec = ci_mode.report()
    for key in ("lambda", "N", "digits", "zeros", "diffs", "gap", "even",
                "verified"):
        assert key in rec
    jpath = tmp_path / "report.json"
    write_report_json(rec, jpath)
    parsed = json.loads(jpath.read_text())
    assert parsed["N"] == rec["N"]
    cpath = tmp_path / "report.csv"
    write_report_csv(rec, cpath)
    rows = cpath.read_text().strip().splitlines()
    assert len(rows) == 1 + len(rec["zeros"])
