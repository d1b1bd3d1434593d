import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burgers_asymptotics import (
    AdmissibilityError,
    Frame,
    FoldError,
    LeadingTail,
    branch_gap,
    find_zc,
    finite_t_maxima,
    h_infinity,
    ht_eval,
    p_correction,
    profile_p,
    root_shift_coefficient,
    single,
    two_term,
    y_star,
    y_star_prime,
)
from burgers_asymptotics.critical import p_log_derivative_check, y_star_prime_closed

UNIT = LeadingTail(1.0, 0.5)


def test_exact_roots_and_fold():
    assert y_star(0.0, "minus", UNIT) == pytest.approx(-1.0, abs=1e-15)
    assert UNIT.m_plus == pytest.approx(3 * 2 ** (-2 / 3), rel=1e-15)
    assert UNIT.fold_root == pytest.approx(2 ** (-2 / 3), rel=1e-15)


def test_plus_root_at_three():
    y = y_star(3.0, "plus", UNIT)
    assert y == pytest.approx(2.35, abs=0.01)
    assert abs(UNIT.implicit_residual(y, 3.0)) <= 1e-13


@settings(max_examples=80, deadline=None)
@given(st.floats(1.9, 50.0), st.sampled_from(["plus", "minus"]), st.floats(0.5, 2.0), st.floats(0.2, 0.8))
def test_roots_solve_the_implicit_equation(z, branch, kappa, alpha):
    lead = LeadingTail(kappa, alpha)
    if branch == "plus" and z <= lead.m_plus + 1e-9:
        with pytest.raises(FoldError):
            y_star(z, branch, lead)
        return
    y = y_star(z, branch, lead)
    assert abs(lead.implicit_residual(y, z)) <= 1e-13 * max(1.0, abs(z))
    assert (y < 0) == (branch == "minus")
    if branch == "plus":
        assert y > lead.fold_root


def test_fold_error():
    with pytest.raises(FoldError):
        y_star(1.5, "plus", UNIT)
    with pytest.raises(AdmissibilityError):
        y_star(1.5, "sideways", UNIT)


def test_critical_point_closed_form(unit_structure):
    cs = unit_structure
    # for kappa1 = 1, alpha = 1/2 the tie is at z_c = 3 sqrt(3) / 2
    assert cs.z_c == pytest.approx(1.5 * math.sqrt(3), rel=1e-14)
    assert cs.y_star_plus_at_zc == pytest.approx(1 + math.sqrt(3) / 2, rel=1e-14)
    assert cs.y_star_minus_at_zc == pytest.approx(-(1 - math.sqrt(3) / 2), rel=1e-13)
    assert cs.p_plus == pytest.approx(math.sqrt(3) - 1, rel=1e-13)
    assert cs.p_minus == pytest.approx(math.sqrt(3) + 1, rel=1e-13)
    assert cs.half_jump == pytest.approx(-1.0, rel=1e-12)


@pytest.mark.parametrize("kappa", [1.0, 2.0])
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_critical_point_against_dense_scan(kappa, alpha):
    lead = LeadingTail(kappa, alpha)
    cs = find_zc(lead)
    zs = np.linspace(lead.m_plus + 1e-6, lead.m_plus + 20, 100_000)
    phi = np.array([branch_gap(z, lead) for z in zs[::100]])
    assert np.count_nonzero(np.diff(np.sign(phi))) == 1
    k = np.flatnonzero(np.diff(np.sign(phi)))[0]
    lo, hi = zs[::100][k], zs[::100][k + 1]
    fine = np.linspace(lo, hi, 1001)
    vals = np.array([branch_gap(z, lead) for z in fine])
    j = np.flatnonzero(np.diff(np.sign(vals)))[0]
    scan = fine[j] - vals[j] * (fine[j + 1] - fine[j]) / (vals[j + 1] - vals[j])
    assert cs.z_c == pytest.approx(scan, abs=1e-8)
    assert branch_gap(cs.z_c - 1e-6, lead) < 0 < branch_gap(cs.z_c + 1e-6, lead)


def test_critical_point_depends_on_amplitude():
    assert find_zc(LeadingTail(2.0, 0.5)).z_c != pytest.approx(find_zc(LeadingTail(1.0, 0.5)).z_c)


def test_h_infinity_values():
    assert h_infinity(-1.0, 0.0, UNIT) == pytest.approx(0.75)
    assert h_infinity(2.0, 2.0, UNIT) == pytest.approx(-(2.0**0.5))
    with pytest.raises(AdmissibilityError):
        h_infinity(0.0, 1.0, UNIT)


def test_h_infinity_is_the_large_time_phase():
    d = single()
    fr = Frame(0.5, 1e10, 0.0)
    assert ht_eval(d, fr, -1.0) == pytest.approx(h_infinity(-1.0, 0.0, UNIT), abs=1e-3)
    errs = [abs(ht_eval(d, Frame(0.5, 10.0**k, 0.0), -1.0) - 0.75) for k in range(4, 11)]
    slope = np.polyfit(np.arange(4, 11) * math.log(10), np.log(errs), 1)[0]
    assert slope == pytest.approx(-1 / 3, abs=0.02)


def test_profile(unit_structure):
    assert profile_p(0.0, unit_structure) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(AdmissibilityError):
        profile_p(unit_structure.z_c, unit_structure)
    z = -1e6
    assert profile_p(z, unit_structure) * abs(y_star(z, "minus", UNIT)) ** 0.5 == pytest.approx(1.0)


def test_branch_slopes():
    assert y_star_prime(0.0, "minus", UNIT) == pytest.approx(2 / 3, rel=1e-8)
    # plus branch at z = 3: implicit differentiation of z = y + y^-1/2 gives a slope above 1
    s = y_star_prime(3.0, "plus", UNIT)
    assert s == pytest.approx(y_star_prime_closed(3.0, "plus", UNIT), rel=1e-8)
    assert s > 1.0
    with pytest.raises(FoldError):
        y_star_prime(UNIT.m_plus + 1e-4, "plus", UNIT)


def test_minus_slope_is_between_zero_and_one(unit_structure):
    s = y_star_prime(unit_structure.z_c, "minus", UNIT)
    assert 0 < s < 1
    assert s == pytest.approx(y_star_prime_closed(unit_structure.z_c, "minus", UNIT), rel=1e-8)


@pytest.mark.parametrize("form", ["closed", "two_minus_slope", "linearized"])
def test_jump_constants_log_derivative(unit_structure, form):
    for branch in ("plus", "minus"):
        fd, ident = p_log_derivative_check(0.6, branch, unit_structure, form=form)
        assert fd == pytest.approx(ident, rel=1e-6)
        assert p_correction(0.6, branch, unit_structure, 2.5, form) == pytest.approx(
            2.5 * p_correction(0.6, branch, unit_structure, 1.0, form)
        )


def test_jump_constant_forms(unit_structure):
    cs = unit_structure
    # the closed display and the 2 - slope form agree on the plus branch only
    assert p_correction(0.6, "plus", cs) == pytest.approx(p_correction(0.6, "plus", cs, form="two_minus_slope"), rel=1e-7)
    assert p_correction(0.6, "plus", cs, form="linearized") == pytest.approx(0.85561, abs=1e-4)
    assert p_correction(0.6, "minus", cs, form="linearized") == pytest.approx(0.29834, abs=1e-4)
    assert p_correction(0.6, "minus", cs) == pytest.approx(7.0438, abs=1e-3)
    with pytest.raises(AdmissibilityError):
        p_correction(0.9, "plus", cs)
    with pytest.raises(AdmissibilityError):
        p_correction(0.6, "plus", cs, form="guess")


def test_root_shift_coefficients(unit_structure):
    cs = unit_structure
    for b in ("plus",):
        assert root_shift_coefficient(0.6, b, cs) == pytest.approx(root_shift_coefficient(0.6, b, cs, form="linearized"))
    assert root_shift_coefficient(0.6, "minus", cs) == pytest.approx(0.3632, abs=1e-3)
    assert root_shift_coefficient(0.6, "minus", cs, form="linearized") == pytest.approx(-0.2983, abs=1e-3)


def test_finite_time_maxima_shift_like_the_linearization(unit_two_term, unit_structure):
    cs = unit_structure
    t = 1e9
    ym, yp = finite_t_maxima(unit_two_term, cs.z_c, t)
    gamma = (0.6 - 0.5) / 1.5
    for y, branch in ((ym, "minus"), (yp, "plus")):
        c = (y - cs.y_at_zc(branch)) * t**gamma
        assert c == pytest.approx(root_shift_coefficient(0.6, branch, cs, form="linearized"), rel=0.25)


def test_structure_serializes(unit_structure):
    d = unit_structure.to_dict()
    assert set(d) >= {"z_c", "y_star_plus", "y_star_minus", "m_plus", "half_jump"}
