"""Zoomed expansions around the discontinuity and empirical rate fitting.

A zoom frame looks at ``z = z_c + t**(-gamma) x``.  For the two-term datum with
``gamma = (beta - alpha)/(1 + alpha)`` the scaled deviation from the limit
profile tends to a constant on each side; for the nested datum the partial
sums ``sum_n 2**-n t**(-gamma_n) |y_star(z_c)|**(-alpha_n)`` are compared with
the exact solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import linregress

from .critical import CriticalStructure, profile_p
from .errors import AdmissibilityError
from .initial_data import TailFamily
from .landscape import Frame
from .solver import QuadratureOptions, rescaled_solution


def geometric_times(lo_exp: float, hi_exp: float, per_decade: int = 6) -> np.ndarray:
    """``10**lo_exp .. 10**hi_exp`` with ``per_decade`` points per decade."""
    n = int(round((hi_exp - lo_exp) * per_decade)) + 1
    return np.logspace(lo_exp, hi_exp, n)


def zoom_exponent(alpha_n: float, alpha0: float) -> float:
    return (alpha_n - alpha0) / (1.0 + alpha0)


@dataclass(frozen=True)
class ZoomFrame:
    cs: CriticalStructure
    gamma: float
    x: float
    t: float

    def __post_init__(self) -> None:
        a0 = self.cs.leading.alpha
        ceiling = (1.0 - a0) / (2.0 * (1.0 + a0))
        if not (0.0 <= self.gamma < ceiling):
            raise AdmissibilityError(
                f"zoom exponent {self.gamma:g} must lie in [0, (1-a0)/(2(1+a0))) = [0, {ceiling:g})",
                gamma=self.gamma,
                ceiling=ceiling,
            )
        if not (math.isfinite(self.t) and self.t > 0):
            raise AdmissibilityError("t must be finite and > 0", t=self.t)

    @property
    def scale(self) -> float:
        return self.t ** (-self.gamma)

    @property
    def z(self) -> float:
        return self.cs.z_c + self.scale * self.x

    @property
    def frame(self) -> Frame:
        return Frame(self.cs.leading.alpha, self.t, self.z)


def _second_tail(datum: TailFamily):
    if datum.family != "two_term":
        raise AdmissibilityError("operation requires the two_term family", family=datum.family)
    return datum.tails[1]


def zoom_sample(datum: TailFamily, cs: CriticalStructure, x: float, t: float, opts: QuadratureOptions | None = None) -> tuple[float, float]:
    """``(A f(T z, t), t**gamma (A f(T z, t) - p(z)))`` at ``z = z_c + t**-gamma x``."""
    if x == 0:
        raise AdmissibilityError("x = 0 sits on the discontinuity", x=x)
    beta = _second_tail(datum).alpha
    zf = ZoomFrame(cs, zoom_exponent(beta, cs.leading.alpha), x, t)
    z = zf.z
    if (z > cs.z_c) != (x > 0) or z == cs.z_c:
        raise AdmissibilityError("zoomed point collapsed onto z_c in floating point", x=x, t=t)
    value = rescaled_solution(datum, zf.frame, opts).value
    return value, (value - profile_p(z, cs)) / zf.scale


def q_estimate(datum: TailFamily, cs: CriticalStructure, x: float, t: float, opts: QuadratureOptions | None = None) -> float:
    """``t**gamma (A f(T z, t) - p(z))`` at ``z = z_c + t**-gamma x``."""
    return zoom_sample(datum, cs, x, t, opts)[1]


@dataclass(frozen=True)
class Extrapolation:
    """Fit of ``value(t) = limit + amplitude * t**(-theta)``."""

    limit: float
    amplitude: float
    theta: float
    error_bar: float


def extrapolate(ts: Sequence[float], values: Sequence[float], theta_bounds: tuple[float, float] = (1e-3, 2.0)) -> Extrapolation:
    """Least-squares limit estimate; ``error_bar = |limit - value(t_max)|``."""
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(values, dtype=float)
    if ts.size < 3:
        raise AdmissibilityError("need at least three points to extrapolate", n=int(ts.size))

    def solve(theta: float):
        basis = np.column_stack([np.ones_like(ts), ts ** (-theta)])
        coef, *_ = np.linalg.lstsq(basis, vs, rcond=None)
        return coef, float(np.sum((basis @ coef - vs) ** 2))

    # profile over log(theta) keeps the search well-scaled
    res = minimize_scalar(
        lambda s: solve(math.exp(s))[1],
        bounds=(math.log(theta_bounds[0]), math.log(theta_bounds[1])),
        method="bounded",
        options={"xatol": 1e-10},
    )
    theta = math.exp(res.x)
    (limit, amp), _ = solve(theta)
    return Extrapolation(float(limit), float(amp), theta, float(abs(limit - vs[np.argmax(ts)])))


def nested_partial_sum(
    cs: CriticalStructure,
    alphas: Sequence[float],
    weights: Sequence[float],
    N: int,
    x: float,
    t: float,
    n_max: int | None = None,
) -> float:
    """``sum_{n<=N} w_n t**(-gamma_n) |y_star_branch(z_c)|**(-alpha_n)``, branch = sign(x)."""
    if x == 0:
        raise AdmissibilityError("x = 0 sits on the discontinuity", x=x)
    limit = len(alphas) if n_max is None else n_max
    if not (0 <= N <= limit - 2):
        raise AdmissibilityError(f"N must be in [0, n_max - 2] = [0, {limit - 2}]", N=N, n_max=limit)
    y = abs(cs.y_at_zc("plus" if x > 0 else "minus"))
    a0 = alphas[0]
    return float(sum(weights[n] * t ** (-zoom_exponent(alphas[n], a0)) * y ** (-alphas[n]) for n in range(N + 1)))


def nested_residual(
    datum: TailFamily,
    cs: CriticalStructure,
    N: int,
    x: float,
    t: float,
    opts: QuadratureOptions | None = None,
    zoom_order: int | None = None,
) -> float:
    """Exact rescaled solution minus the order-``N`` partial sum.

    The solution is sampled at ``z_c + t**(-gamma_k) x`` with ``k = zoom_order``
    (default ``N``).
    """
    if datum.family != "nested":
        raise AdmissibilityError("operation requires the nested family", family=datum.family)
    alphas, weights = list(datum.alphas), list(datum.kappas)
    partial = nested_partial_sum(cs, alphas, weights, N, x, t)
    k = N if zoom_order is None else zoom_order
    zf = ZoomFrame(cs, zoom_exponent(alphas[k], alphas[0]), x, t)
    return rescaled_solution(datum, zf.frame, opts).value - partial


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    points: list[tuple[float, float]] = field(default_factory=list)

    @property
    def reliable(self) -> bool:
        return self.r_squared >= 0.9

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r_squared, "reliable": self.reliable}


def rate_fit(points: Sequence[tuple[float, float]]) -> RateFit:
    """Least squares of ``log|error|`` against ``log t``.

    Non-positive errors (machine zero) are dropped; at least four must remain.
    """
    kept = [(float(t), float(e)) for t, e in points if e > 0]
    if len(kept) < 4:
        raise AdmissibilityError("rate fit needs at least 4 positive errors", n=len(kept))
    ts = [t for t, _ in kept]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise AdmissibilityError("t must be strictly increasing")
    lt = np.log(ts)
    le = np.log([e for _, e in kept])
    fit = linregress(lt, le)
    return RateFit(float(fit.slope), float(fit.intercept), float(fit.rvalue**2), list(zip(lt.tolist(), le.tolist())))


def tail_offsets(datum: TailFamily, cs: CriticalStructure) -> list[float]:
    """Per-tail first-order height difference ``H_t(y_+) - H_t(y_-)`` at ``z_c``.

    Tail ``n >= 1`` contributes ``-t**(-gamma_n) c_n`` with
    ``c_n = kappa_n (|y_+|**(1-a_n) + |y_-|**(1-a_n)) / (2 (1 - a_n))``; the
    returned list holds ``c_n`` (index 0 is zero: the leading tail ties at z_c).
    """
    yp, ym = abs(cs.y_star_plus_at_zc), abs(cs.y_star_minus_at_zc)
    out = [0.0]
    for tl in datum.tails[1:]:
        a = tl.alpha
        out.append(tl.kappa * (yp ** (1.0 - a) + ym ** (1.0 - a)) / (2.0 * (1.0 - a)))
    return out


def predicted_branch_gap(datum: TailFamily, cs: CriticalStructure, z: float, t: float) -> float:
    """Leading-order ``H_t(y_+(z,t), z) - H_t(y_-(z,t), z)`` near ``z_c``.

    Positive means the plus branch carries the solution.  Includes the
    regularization constant ``C = lim (F0(x) - tails(x))``, which shifts the gap
    by ``-C / Lam``.
    """
    a0 = cs.leading.alpha
    lam = t ** ((1.0 - a0) / (1.0 + a0))
    gap = 0.5 * (z - cs.z_c) * (cs.y_star_plus_at_zc - cs.y_star_minus_at_zc) - datum.table.tail_constant / lam
    for tl, c in zip(datum.tails[1:], tail_offsets(datum, cs)[1:]):
        gap -= t ** (-zoom_exponent(tl.alpha, a0)) * c
    return gap


def tie_offset(datum: TailFamily, cs: CriticalStructure) -> float:
    """Zoomed coordinate ``x0`` where the branches tie for the two-term datum.

    The second tail lowers the plus branch relative to the minus branch at the
    same order as the zoom, so dominance switches at ``x0 > 0`` rather than 0.
    """
    _second_tail(datum)
    return 2.0 * tail_offsets(datum, cs)[1] / (cs.y_star_plus_at_zc - cs.y_star_minus_at_zc)
