import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import stats as scistats

from weylprod.irrational import FracPartEvaluator
from weylprod.sequences import (PointSet, RationalArray, kronecker, lacunary,
                                random_subsequence, random_uniform,
                                uniform_grid, van_der_corput,
                                van_der_corput_floats, write_pointset_csv)


# ---------------------------------------------------------------- kronecker

def test_kronecker_first_two(sqrt2m1):
    ps = kronecker(sqrt2m1, 2)
    with mpmath.mp.workprec(200):
        r2 = mpmath.sqrt(2)
        assert abs(ps.points[0] - (r2 - 1)) < ps.point_error
        assert abs(ps.points[1] - (2 * r2 - 2)) < ps.point_error


def test_kronecker_one_point_per_interval(sqrt2m1):
    # {k alpha}, k = 1..q-1, occupies q-1 distinct cells [m/q, (m+1)/q).
    # Which end cell stays empty depends on the sign of alpha - p/q: for
    # q = 5 (alpha above 2/5) cells 1..q-1 are hit, for q = 12 (alpha below
    # 5/12) the mirror image 0..q-2.
    ps5 = kronecker(sqrt2m1, 4)
    assert sorted(int(5 * float(x)) for x in ps5.points) == [1, 2, 3, 4]
    ps12 = kronecker(sqrt2m1, 11)
    assert sorted(int(12 * float(x)) for x in ps12.points) == list(range(11))
    ps29 = kronecker(sqrt2m1, 28)
    assert sorted(int(29 * float(x)) for x in ps29.points) == list(range(1, 29))


def test_kronecker_500_vs_256bit_oracle(sqrt2m1):
    ps = kronecker(sqrt2m1, 500)
    with mpmath.mp.workprec(256):
        a = mpmath.sqrt(2) - 1
        tol = mpmath.ldexp(1, -100)
        for k, x in enumerate(ps.points, 1):
            assert abs(x - (k * a) % 1) < tol


def test_kronecker_points_distinct(sqrt2m1):
    ps = kronecker(sqrt2m1, 500)
    assert len(set(ps.points)) == 500


def test_kronecker_respects_budget(sqrt2m1):
    ev = FracPartEvaluator(sqrt2m1, n_max=100)
    with pytest.raises(ValueError):
        kronecker(sqrt2m1, 101, evaluator=ev)


# ----------------------------------------------------------- van der corput

def test_vdc_small_values():
    assert [x for x in van_der_corput(3).points] == \
        [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)]
    assert [x for x in van_der_corput(7).points] == \
        [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(1, 8),
         Fraction(5, 8), Fraction(3, 8), Fraction(7, 8)]


def test_vdc_powers_of_two():
    ps = van_der_corput(1 << 10)
    for s in range(11):
        assert ps.points[(1 << s) - 1] == Fraction(1, 1 << (s + 1))


def test_vdc_prefix_is_permutation():
    for s in (3, 6, 10):
        n = (1 << s) - 1
        got = sorted(van_der_corput(n).points)
        want = [Fraction(k, 1 << s) for k in range(1, 1 << s)]
        assert got == want


def test_vdc_floats_match_fractions():
    ps = van_der_corput(2000)
    arr = van_der_corput_floats(2000)
    for x, f in zip(ps.points, arr):
        assert float(x) == f  # dyadics are exact in float64


# ------------------------------------------------------------ uniform grid

def test_grid_small():
    assert list(uniform_grid(3).points) == \
        [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert list(uniform_grid(1).points) == [Fraction(1, 2)]


def test_rational_array_sequence_protocol():
    ra = RationalArray([1, 2, 3], 4)
    assert len(ra) == 3
    assert ra[1] == Fraction(1, 2)
    assert list(ra[:2]) == [Fraction(1, 4), Fraction(1, 2)]
    assert np.array_equal(ra.to_float_array(), np.array([0.25, 0.5, 0.75]))


# ---------------------------------------------------------------- lacunary

def test_lacunary_first_point(sqrt2m1):
    ps = lacunary(sqrt2m1, 1)
    with mpmath.mp.workprec(200):
        assert abs(ps.points[0] - (2 * mpmath.sqrt(2) - 2)) < ps.point_error


def test_lacunary_doubling_identity(sqrt2m1):
    ps = lacunary(sqrt2m1, 30)
    with mpmath.mp.workprec(140):  # doubling must not round back to 53 bits
        tol = mpmath.ldexp(1, -80)
        for k in range(len(ps.points) - 1):
            doubled = (2 * ps.points[k]) % 1
            assert abs(ps.points[k + 1] - doubled) < tol


def test_lacunary_20_vs_512bit_oracle(sqrt2m1):
    ps = lacunary(sqrt2m1, 20, precision_bits=280)
    with mpmath.mp.workprec(512):
        a = mpmath.sqrt(2) - 1
        tol = mpmath.ldexp(1, -200)
        for k, x in enumerate(ps.points, 1):
            assert abs(x - ((1 << k) * a) % 1) < tol


def test_lacunary_budget(sqrt2m1):
    with pytest.raises(ValueError):
        lacunary(sqrt2m1, 61)


# ------------------------------------------------------------------ random

def test_random_uniform_deterministic():
    a = random_uniform(1000, seed=42)
    b = random_uniform(1000, seed=42)
    assert a.points == b.points
    assert random_uniform(0, seed=1).points == []


def test_random_uniform_ks():
    ps = random_uniform(10 ** 6, seed=7)
    stat = scistats.kstest(ps.points, "uniform").statistic
    assert stat < 1.95 / math.sqrt(10 ** 6)


def test_random_subsequence_all_heads(sqrt2m1):
    heads = lambda rng, size: np.ones(size, dtype=bool)
    sub = random_subsequence(sqrt2m1, 50, seed=0, coin=heads)
    kr = kronecker(sqrt2m1, 50)
    assert sub.params["indices"] == list(range(1, 51))
    assert sub.points == kr.points


def test_random_subsequence_density(sqrt2m1):
    sub = random_subsequence(sqrt2m1, 3000, seed=3)
    n_last = sub.params["indices"][-1]
    assert abs(3000 - n_last / 2) <= 3 * math.sqrt(n_last)


def test_random_subsequence_deterministic(sqrt2m1):
    a = random_subsequence(sqrt2m1, 200, seed=9)
    b = random_subsequence(sqrt2m1, 200, seed=9)
    assert a.params["indices"] == b.params["indices"]
    assert a.points == b.points


# -------------------------------------------------------------- invariants

def test_range_invariants(sqrt2m1):
    for ps in (kronecker(sqrt2m1, 100), van_der_corput(100),
               uniform_grid(100), lacunary(sqrt2m1, 10),
               random_uniform(100, 1)):
        assert len(ps) == ps.params["N"]
        for x in ps:
            assert 0 <= x <= 1


def test_pointset_rejects_bad_points():
    with pytest.raises(ValueError):
        PointSet([0.5, 1.5], "iid-uniform")
    with pytest.raises(ValueError):
        PointSet([Fraction(0), Fraction(1, 2)], "vdc")
    PointSet([Fraction(0), Fraction(1, 2)], "extremal")  # endpoints ok here


def test_pointset_csv_roundtrip(tmp_path, sqrt2m1):
    ps = kronecker(sqrt2m1, 5)
    path = tmp_path / "pts.csv"
    write_pointset_csv(ps, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "index,value"
    assert len(lines) == 6
    # 40 significant digits survive the round trip well below point_error
    for i, line in enumerate(lines[1:], 1):
        idx, val = line.split(",")
        assert int(idx) == i
        assert abs(float(ps.points[i - 1]) - float(val)) < 1e-16
        assert len(val.replace(".", "").replace("-", "").lstrip("0")) >= 35
