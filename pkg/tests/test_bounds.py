"""Exact constants and their internal consistency."""

from fractions import Fraction as F

import pytest

from cubecolor.bounds import BoundsError, bound_table, g_constant


def test_reference_values_d2_m1():
    t = bound_table(2, 1)
    assert t.h_eq4 == 8
    assert t.f_eq5 == F(1, 8)
    assert t.f_remark == F(1, 16)


def test_reference_values_d3_m2():
    t = bound_table(3, 2)
    assert t.h_eq4 == 144
    assert t.f_eq5 == F(1, 144)


def test_g_values():
    assert g_constant(3, 1) == 6
    assert g_constant(2, 1) == 4
    assert g_constant(2, 2) == 8
    assert g_constant(3, 2) == 24
    assert g_constant(3, 3) == 32


@pytest.mark.parametrize("d", range(1, 7))
def test_factor_two_discrepancy_everywhere(d):
    # the two published coefficients differ by exactly 2 for every (d, m)
    for m in range(d):
        t = bound_table(d, m)
        assert t.f_remark == t.f_eq5 / 2
        assert t.discrepancy_factor_two
        assert t.f_eq5 == 1 / t.h_eq4
        assert t.f_eq5 > 0 and t.f_remark > 0


def test_prior_two_color_bound():
    assert bound_table(2, 1, 7).prior_2color == 3  # n - 4
    assert bound_table(2, 1, 4).prior_2color == 0
    assert bound_table(3, 1, 5).prior_2color == 25 - 9 * 5


def test_asymptotic_flag_always_set():
    assert bound_table(4, 2, 10).asymptotic


def test_fbar():
    assert bound_table(2, 1).fbar_approx == 9


def test_rejects_m_out_of_range():
    with pytest.raises(BoundsError):
        bound_table(2, 2)
    with pytest.raises(BoundsError):
        bound_table(3, -1)


def test_json_rationals_are_strings():
    doc = bound_table(2, 1, 8).to_json()
    assert doc["f_eq5"]["exact"] == "1/8"
    assert doc["f_eq5"]["approx"] == 0.125
    assert doc["g"]["1"]["exact"] == "4/1"
