"""Acceptance criteria, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL ...`` line with the
measured numbers, then asserts.  Tolerances are the contract values and are
not loosened to make a criterion pass.  Run directly
(``python3 tests/test_acceptance.py``) to get only the summary lines.
"""

from __future__ import annotations

import math
import sys
import time

import numpy as np
import pytest
from scipy.special import hyp2f1

from burgers_asymptotics import (
    AdmissibilityError,
    Frame,
    LeadingTail,
    OracleGrid,
    QuadratureOptions,
    compare,
    extrapolate,
    find_zc,
    finite_t_maxima,
    geometric_times,
    h_infinity,
    ht_eval,
    nested,
    nested_partial_sum,
    nested_residual,
    p_correction,
    profile_p,
    q_estimate,
    rate_fit,
    rescaled_solution,
    root_shift_coefficient,
    scan_landscape,
    single,
    two_term,
    y_star,
    zero_datum,
    zoom_exponent,
)
from burgers_asymptotics.initial_data import check_nested, geometric_alphas


def _report(number: int, ok: bool, detail: str) -> str:
    return f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}"


# ---------------------------------------------------------------- 1


def criterion_1():
    start = time.perf_counter()
    d = single(1.0, 0.5)
    xs = np.linspace(-20.0, 20.0, 161)
    grid = OracleGrid(120.0, 24001)
    diffs = {t: compare(d, t, xs, grid).max_abs_diff for t in (1.0, 50.0)}
    elapsed = time.perf_counter() - start
    ok = diffs[1.0] <= 1e-4 and diffs[50.0] <= 1e-3 and elapsed <= 120
    return ok, f"oracle vs Hopf-Cole max|diff| t=1: {diffs[1.0]:.2e} (<=1e-4), t=50: {diffs[50.0]:.2e} (<=1e-3), {elapsed:.1f}s (<=120s)"


# ---------------------------------------------------------------- 2


def criterion_2():
    start = time.perf_counter()
    failures = []
    for kappa in (1.0, 2.0):
        for alpha in (0.3, 0.5, 0.7):
            lead = LeadingTail(kappa, alpha)
            cs = find_zc(lead)
            zc, yp, ym = cs.z_c, cs.y_star_plus_at_zc, cs.y_star_minus_at_zc
            checks = {
                "y- < 0 < y+": ym < 0 < yp,
                "z_c - y+ < 0": zc - yp < 0,
                "z_c - y- > 0": zc - ym > 0,
                "H_inf equal": abs(h_infinity(yp, zc, lead) - h_infinity(ym, zc, lead)) <= 1e-10,
                "residuals": max(abs(lead.implicit_residual(yp, zc)), abs(lead.implicit_residual(ym, zc))) <= 1e-12,
                "z_c > m_plus": zc > cs.m_plus,
            }
            failures += [f"({kappa:g},{alpha:g}) {name} [z_c-y+={zc - yp:.3g}]" if "y+ <" in name else f"({kappa:g},{alpha:g}) {name}"
                         for name, good in checks.items() if not good]
    unit = LeadingTail(1.0, 0.5)
    exact = abs(y_star(0.0, "minus", unit) + 1.0) <= 1e-14 and abs(unit.m_plus - 3 * 2 ** (-2 / 3)) <= 1e-14
    if not exact:
        failures.append("exact values")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 10
    shown = "; ".join(failures[:3]) + (f" (+{len(failures) - 3} more)" if len(failures) > 3 else "")
    return ok, f"{6 - len({f.split(')')[0] for f in failures if f != 'exact values'})}/6 parameter pairs clean, exact checks {'ok' if exact else 'bad'}, {elapsed:.2f}s (<=10s); failed: {shown or 'none'}"


# ---------------------------------------------------------------- 3


def criterion_3():
    start = time.perf_counter()
    d = single(1.0, 0.5)
    cs = find_zc(LeadingTail(1.0, 0.5))
    bound = -(1 - 0.5) / (2 * (1 + 0.5)) + 0.05
    ts = geometric_times(4, 9)
    parts, ok = [], True
    for off in (-1.0, -0.5, 0.5, 1.0):
        z = cs.z_c + off
        p = profile_p(z, cs)
        errs = [abs(rescaled_solution(d, Frame(0.5, t, z)).value - p) for t in ts]
        fit = rate_fit(list(zip(ts, errs)))
        good = fit.slope <= bound and fit.r_squared >= 0.9 and errs[-1] < errs[0]
        ok &= good
        parts.append(f"z_c{off:+g}: slope {fit.slope:.3f} r2 {fit.r_squared:.3f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 600
    return ok, f"{'; '.join(parts)} (slope <= {bound:.4f}, r2 >= 0.9), {elapsed:.1f}s"


# ---------------------------------------------------------------- 4


def criterion_4():
    start = time.perf_counter()
    alpha, beta = 0.5, 0.6
    d = two_term(1.0, alpha, 1.0, beta)
    cs = find_zc(LeadingTail(1.0, alpha))
    gamma = zoom_exponent(beta, alpha)
    ts = geometric_times(4, 9)
    errs = [abs(finite_t_maxima(d, cs.z_c, t)[0] - cs.y_star_minus_at_zc) for t in ts]
    fit = rate_fit(list(zip(ts, errs)))
    t_end = 1e9
    prefactor = math.exp(fit.intercept + fit.slope * math.log(t_end)) * t_end**gamma
    coefficient = abs(root_shift_coefficient(beta, "minus", cs))
    slope_ok = abs(fit.slope + gamma) <= 0.2 * gamma and fit.r_squared >= 0.9
    pref_ok = abs(prefactor - coefficient) <= 0.1 * coefficient
    elapsed = time.perf_counter() - start
    ok = slope_ok and pref_ok and elapsed <= 300
    return ok, (
        f"slope {fit.slope:.4f} vs {-gamma:.4f} +-20% ({'ok' if slope_ok else 'bad'}), r2 {fit.r_squared:.3f}; "
        f"prefactor at t=1e9 {prefactor:.4f} vs coefficient {coefficient:.4f} +-10% ({'ok' if pref_ok else 'bad'}), {elapsed:.1f}s"
    )


# ---------------------------------------------------------------- 5


def criterion_5():
    start = time.perf_counter()
    alpha = 0.5
    cs = find_zc(LeadingTail(1.0, alpha))
    ts = geometric_times(5, 9)
    match_ok, side_ok, detected, parts = True, True, 0, []
    for beta in (0.55, 0.6, 0.7):
        d = two_term(1.0, alpha, 1.0, beta)
        ex = {x: extrapolate(ts, [q_estimate(d, cs, x, t) for t in ts]) for x in (1.0, -1.0, -2.0, -0.5)}
        pp, pm = p_correction(beta, "plus", cs), p_correction(beta, "minus", cs)
        rel_p = abs(ex[1.0].limit - pp) / abs(pp)
        rel_m = abs(ex[-1.0].limit - pm) / abs(pm)
        match_ok &= rel_p <= 0.02 and rel_m <= 0.02
        side_ok &= abs(ex[-2.0].limit - ex[-0.5].limit) <= ex[-2.0].error_bar + ex[-0.5].error_bar
        if abs(ex[1.0].limit - ex[-1.0].limit) > 3 * (ex[1.0].error_bar + ex[-1.0].error_bar):
            detected += 1
        parts.append(
            f"b={beta:g}: L+ {ex[1.0].limit:.3g} vs {pp:.3g}, L- {ex[-1.0].limit:.3g} vs {pm:.3g}"
        )
    elapsed = time.perf_counter() - start
    ok = match_ok and side_ok and detected >= 2 and elapsed <= 1800
    return ok, (
        f"{'; '.join(parts)}; limits within 2%: {'ok' if match_ok else 'bad'}, side constancy: "
        f"{'ok' if side_ok else 'bad'}, jump detected {detected}/3 (need 2), {elapsed:.1f}s"
    )


# ---------------------------------------------------------------- 6


def criterion_6():
    start = time.perf_counter()
    alpha, beta = 0.5, 0.6
    d = two_term(1.0, alpha, 1.0, beta)
    cs = find_zc(LeadingTail(1.0, alpha))
    gamma = zoom_exponent(beta, alpha)
    ts = geometric_times(4, 8)
    gaps, flips = [], True
    for t in ts:
        for x in (1.0, -1.0):
            rep = scan_landscape(d, Frame(alpha, t, cs.z_c + t**-gamma * x))
            flips &= (rep.global_max.y > 0) == (x > 0)
            if x > 0:
                gaps.append(rep.gap if rep.gap is not None else math.nan)
    finite = [(t, g) for t, g in zip(ts, gaps) if math.isfinite(g)]
    fit = rate_fit(finite)
    slope_ok = abs(fit.slope + gamma) <= 0.15 * gamma
    elapsed = time.perf_counter() - start
    ok = slope_ok and flips and elapsed <= 300
    return ok, (
        f"gap slope {fit.slope:.4f} vs {-gamma:.4f} +-15% ({'ok' if slope_ok else 'bad'}), "
        f"dominant branch follows sign(x): {'yes' if flips else 'no'}, {elapsed:.1f}s"
    )


# ---------------------------------------------------------------- 7


def criterion_7():
    start = time.perf_counter()
    alphas = geometric_alphas(0.5, 0.7, 0.08, 6)
    d = nested(alphas)
    cs = find_zc(LeadingTail(1.0, alphas[0]))
    ts = geometric_times(5, 9)
    decrease_ok, parts = True, []
    for n in (0, 1, 2):
        g = zoom_exponent(alphas[n], alphas[0])
        for x in (-1.0, 1.0):
            s = np.abs([t**g * nested_residual(d, cs, n, x, t) for t in ts])
            good = bool(np.all(np.diff(s) < 0)) and s[0] >= 2 * s[-1]
            decrease_ok &= good
            parts.append(f"N={n} x={x:+g}: {s[0]:.3g}->{s[-1]:.3g}")
    w = list(d.kappas)
    tele = 0.0
    for x in (-1.0, 1.0):
        y = abs(cs.y_at_zc("plus" if x > 0 else "minus"))
        for n in range(1, 5):
            for t in ts:
                step = nested_partial_sum(cs, alphas, w, n, x, t) - nested_partial_sum(cs, alphas, w, n - 1, x, t)
                term = w[n] * t ** -zoom_exponent(alphas[n], alphas[0]) * y ** -alphas[n]
                tele = max(tele, abs(step - term))
    tele_ok = tele <= 1e-13
    rejected = 0
    bad_ladders = ([0.5, 0.58, 0.7], [0.5, 0.62, 0.76], [0.5, 0.7, 0.65])
    for bad in bad_ladders:
        try:
            check_nested(bad)
        except AdmissibilityError:
            rejected += 1
    try:
        nested_residual(d, cs, 5, 1.0, 1e6)
    except AdmissibilityError:
        rejected += 1
    check_nested(alphas)
    adm_ok = rejected == len(bad_ladders) + 1
    elapsed = time.perf_counter() - start
    ok = decrease_ok and tele_ok and adm_ok and elapsed <= 2700
    return ok, (
        f"scaled residuals {'; '.join(parts)} (need monotone, >=2x: {'ok' if decrease_ok else 'bad'}); "
        f"telescoping {tele:.1e} (<=1e-13); admissibility {'ok' if adm_ok else 'bad'}; {elapsed:.1f}s"
    )


# ---------------------------------------------------------------- 8


def criterion_8():
    start = time.perf_counter()
    d = two_term()
    worst_dy = 0.0
    for t in (1.0, 1e4, 1e8):
        for z in (-2.0, 0.0, 2.6, 5.0):
            fr = Frame(0.5, t, z)
            for y in (-3.0, -0.4, 0.0, 0.2, 1.9, 4.0):
                h = 1e-3 * min(1 + abs(y), 1.0 / fr.space_scale + abs(y))
                hv = [ht_eval(d, fr, y + k * h) for k in (-2, -1, 1, 2)]
                fd = (hv[0] - 8 * hv[1] + 8 * hv[2] - hv[3]) / (12 * h)
                dy = ht_eval(d, fr, y, "dy")
                worst_dy = max(worst_dy, abs(dy - fd) / max(abs(dy), 1e-8))
    s = single(1.0, 0.5)
    xs = np.array([0.1, 1.0, 10.0, 500.0, 999.0, 1001.0, 1e4])
    exact = xs * hyp2f1(0.5, 0.25, 1.5, -xs * xs)
    f0_err = float(np.max(np.abs(s.antiderivative(xs) - exact) / exact))
    fr = Frame(0.5, 1e7, 2.0)
    vals = [rescaled_solution(s, fr, QuadratureOptions(rel_tol=r)).value for r in (1e-5, 1e-8, 1e-11)]
    refine_ok = abs(vals[0] - vals[2]) <= 1e-5 * abs(vals[2]) and abs(vals[1] - vals[2]) <= 1e-8 * abs(vals[2])
    z0 = zero_datum()
    zf = Frame(0.5, 3.0, 0.8)
    zero_ok = (
        rescaled_solution(z0, zf).value == 0.0
        and ht_eval(z0, zf, 0.3) == -0.25 * 0.5**2
        and scan_landscape(z0, zf).global_max.y == pytest.approx(0.8, abs=1e-12)
        and float(z0.antiderivative(5.0)) == 0.0
    )
    elapsed = time.perf_counter() - start
    ok = worst_dy <= 1e-6 and f0_err <= 1e-8 and refine_ok and zero_ok and elapsed <= 60
    return ok, (
        f"dy vs FD {worst_dy:.1e} (<=1e-6), F0 {f0_err:.1e} (<=1e-8), refinement {'ok' if refine_ok else 'bad'}, "
        f"zero datum {'exact' if zero_ok else 'bad'}, {elapsed:.1f}s"
    )


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 9)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number]()
    line = _report(number, ok, detail)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for n, fn in sorted(CRITERIA.items()):
        ok, detail = fn()
        print(_report(n, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
