import json
import math

import numpy as np
import pytest

from weylprod.bounds import (BoundReport, cesaro_bound_value, check_cesaro_log_bound,
                             check_hlawka, check_kronecker_conjectures,
                             check_kronecker_sandwich, check_ostrowski_bound,
                             check_type_growth, check_vdc_limits,
                             grid_hlawka_report, hlawka_sequence_report,
                             kronecker_log_trace)
from weylprod.irrational import cf_expand, surd_from_cf
from weylprod.numerics import LOG2
from weylprod.products import ProductTrace


# ------------------------------------------------------------------ hlawka

def test_hlawka_grid_example():
    rep = grid_hlawka_report(100)
    assert rep.passed
    # the product is exactly N+1; the bound is below (N+1)^2
    assert rep.empirical_constants["P_N"] == pytest.approx(101.0, rel=1e-10)
    assert rep.empirical_constants["bound"] <= 101.0 ** 2


def test_hlawka_vdc_prefixes():
    rep = hlawka_sequence_report("vdc", 2000)
    assert rep.passed and not rep.violations
    # the bound itself stays within the N^(gamma log N) shape
    assert rep.empirical_constants["gamma_hat"] < 3.0


def test_hlawka_kronecker_prefixes(sqrt2m1):
    rep = hlawka_sequence_report("kronecker", 2000, alpha=sqrt2m1)
    assert rep.passed and not rep.violations


def test_hlawka_misaligned_traces():
    tr = ProductTrace(np.zeros(5), 0.0, 5)
    with pytest.raises(ValueError):
        check_hlawka(tr, [])


# ---------------------------------------------------------------- sandwich

def test_sandwich_single_factor(sqrt2m1):
    # q = 2: P_1 = 2 sin(pi alpha) lies in [1, q^2/2] = [1, 2]
    rep = check_kronecker_sandwich(sqrt2m1, q_max=2)
    assert rep.passed
    lp = 2.0 * math.sin(math.pi * (math.sqrt(2.0) - 1.0))
    assert 1.0 <= lp <= 2.0


def test_sandwich_sqrt2_denominators(sqrt2m1):
    rep = check_kronecker_sandwich(sqrt2m1, q_max=1000)
    assert rep.passed and not rep.violations
    assert rep.n_range == (2, 985)


def test_sandwich_golden_fibonacci(golden):
    rep = check_kronecker_sandwich(golden, q_max=10 ** 4)
    assert rep.passed and not rep.violations


def test_sandwich_rejects_untabulated(sqrt2m1):
    with pytest.raises(ValueError):
        check_kronecker_sandwich(sqrt2m1, q_max=100, q_list=[7])


# ---------------------------------------------------------------- ostrowski

def test_ostrowski_bound_no_violations(sqrt2m1):
    rep = check_ostrowski_bound(sqrt2m1, 2000)
    assert rep.passed and not rep.violations
    assert rep.empirical_constants["min_slack"] > 0


def test_ostrowski_bound_n1(sqrt2m1):
    # N = 1: log(2 sin(pi alpha)) <= b_0 log 2 + 3 log q_0 = log 2
    logs, _ = kronecker_log_trace(sqrt2m1, 1)
    assert logs[0] <= LOG2


def test_ostrowski_bound_at_denominators(sqrt2m1):
    # N = q_l: rhs includes the 2 q_l^3 block, lhs is at most ~2 log q_l
    table = cf_expand(sqrt2m1, 8)
    logs, _ = kronecker_log_trace(sqrt2m1, table.q[-2])
    for l in range(2, 7):
        q = table.q[l]
        rhs = LOG2 + 3.0 * math.fsum(math.log(t) for t in table.q[:l + 1])
        assert logs[q - 1] <= rhs


# ------------------------------------------------------------------ cesaro

def test_cesaro_bound_holds(sqrt2m1):
    rep = check_cesaro_log_bound(sqrt2m1, 2000)
    assert rep.passed and not rep.violations
    assert rep.empirical_constants["limsup_proxy"] < 0.1


def test_cesaro_mean_near_zero_at_denominators(sqrt2m1):
    rep = check_cesaro_log_bound(sqrt2m1, 10 ** 4)
    means = rep.empirical_constants["mean_at_q_minus_1"]
    for q, mean in means.items():
        if q >= 100:
            assert -1e-9 <= mean <= 0.05, q


def test_cesaro_bound_value_shape(sqrt2m1):
    table = cf_expand(sqrt2m1, 12)
    vals = [cesaro_bound_value(table, l) for l in range(3, 12)]
    assert all(a > b for a, b in zip(vals, vals[1:]))  # shrinks up the table


# ------------------------------------------------------------- type growth

def test_type_growth_bounded_quotients(sqrt2m1):
    rep = check_type_growth(sqrt2m1, 2000, t=1.01)
    # N^(1-1/t) ~ N^0: the reported constant is just a finite sup
    assert rep.passed
    assert math.isfinite(rep.empirical_constants["C_sup"])


def test_type_growth_huge_quotient():
    alpha = surd_from_cf([1, 1, 1000], [2])
    rep = check_type_growth(alpha, 5000, t=3.0)
    assert rep.passed
    assert rep.empirical_constants["C_sup"] < 50


def test_type_growth_rejects_t_at_most_1(sqrt2m1):
    with pytest.raises(ValueError):
        check_type_growth(sqrt2m1, 100, t=1.0)


# -------------------------------------------------------------- vdc limits

def test_vdc_limits_small():
    rep = check_vdc_limits(10)
    assert rep.passed and not rep.violations
    assert rep.empirical_constants["octave_min"][3] == \
        pytest.approx(16 * math.sin(math.pi / 16), rel=1e-12)


def test_vdc_limits_limit_values():
    rep = check_vdc_limits(14)
    peaks = rep.empirical_constants["peak_over_n2"]
    mins = rep.empirical_constants["octave_min"]
    assert peaks[14] == pytest.approx(1.0 / (2 * math.pi), rel=1e-3)
    assert mins[14] == pytest.approx(math.pi, rel=1e-7)


def test_vdc_limits_guard():
    with pytest.raises(ValueError):
        check_vdc_limits(25)


# ------------------------------------------------------------- conjectures

def test_conjectures_argmax_positions(sqrt2m1):
    rep = check_kronecker_conjectures(sqrt2m1, 500)
    assert rep.passed  # evidence reports never fail
    rows = rep.empirical_constants["argmax_per_interval"]
    found = [r["found"] for r in rows if r["l"] >= 1]
    assert found == [4, 11, 28, 69, 168, 407]
    assert rep.empirical_constants["all_argmax_match"]


def test_conjectures_running_max_bounded(sqrt2m1):
    rep = check_kronecker_conjectures(sqrt2m1, 500)
    series = rep.empirical_constants["normalized_running_max"]
    assert series[-1]["running_max_P_over_q"] < 2.0


def test_conjectures_degenerate_window(sqrt2m1):
    rep = check_kronecker_conjectures(sqrt2m1, 1)
    assert rep.empirical_constants["argmax_per_interval"] == []


# ------------------------------------------------------------------ report

def test_report_json_round_trip():
    rep = BoundReport("hlawka", {"gen": "vdc"}, (16, 100),
                      violations=[(17, 1.0, 0.5)], passed=False,
                      empirical_constants={"gamma_hat": 1.2})
    blob = json.dumps(rep.to_dict())
    back = json.loads(blob)
    assert back["theorem"] == "hlawka"
    assert back["violations"] == [[17, 1.0, 0.5]]
    assert back["passed"] is False
