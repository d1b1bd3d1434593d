"""Initial data with power-law tails.

Each tail term is realized as ``kappa * (eps**2 + x**2) ** (-alpha / 2)``: even,
smooth, positive, and ``|x|**alpha`` times the term tends to ``kappa``.  The
remainder against the pure power law is ``O(|x|**(-alpha - 2))``.

Three families are supported:

``single``    one tail ``kappa / |x|**alpha``
``two_term``  ``kappa1 / |x|**alpha + kappa2 / |x|**beta`` with
              ``alpha < beta < (1 + alpha) / 2``
``nested``    ``sum_n 2**-n / |x|**alpha_n`` truncated to ``n_max`` terms
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import AdmissibilityError

FAMILIES = ("single", "two_term", "nested")

_GL_NODES, _GL_WEIGHTS = leggauss(16)
# sinh-spaced table nodes: panel width ~ 0.25 * sqrt(eps**2 + x**2), far inside
# the analyticity strip of (eps**2 + x**2)**(-a/2).
_TABLE_DU = 0.25


@dataclass(frozen=True)
class PowerTail:
    """One term ``kappa / |x|**alpha`` of the far-field expansion."""

    kappa: float
    alpha: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise AdmissibilityError(f"tail amplitude must be > 0, got {self.kappa}", kappa=self.kappa)
        if not (0.0 < self.alpha < 1.0):
            raise AdmissibilityError(f"tail exponent must lie in (0, 1), got {self.alpha}", alpha=self.alpha)


@dataclass(frozen=True)
class DatumSpec:
    """User-facing description of an initial datum (what the config file holds)."""

    family: str = "single"
    kappa1: float = 1.0
    alpha: float = 0.5
    kappa2: float = 1.0
    beta: float | None = None
    alphas: tuple[float, ...] | None = None
    alpha_inf: float | None = None
    n_max: int | None = None
    eps: float = 1.0


@dataclass(frozen=True)
class AntiderivativeTable:
    """Cached ``F0(x) = int_0^x f0`` on ``[0, switch_radius]`` plus an analytic tail.

    Only the half line is stored; ``F0`` is odd.
    """

    switch_radius: float
    nodes: np.ndarray
    cumulative: np.ndarray
    tail_constant: float
    tail_coefficients: tuple[tuple[float, float, float, float], ...]

    def __call__(self, x: np.ndarray, integrand) -> np.ndarray:
        ax = np.abs(x)
        out = np.empty_like(ax)
        inner = ax <= self.switch_radius
        if np.any(inner):
            xi = ax[inner]
            k = np.clip(np.searchsorted(self.nodes, xi, side="right") - 1, 0, len(self.nodes) - 1)
            lo = self.nodes[k]
            half = 0.5 * (xi - lo)
            pts = (lo + half)[:, None] + half[:, None] * _GL_NODES[None, :]
            out[inner] = self.cumulative[k] + half * (integrand(pts) @ _GL_WEIGHTS)
        outer = ~inner
        if np.any(outer):
            out[outer] = self.tail_constant + _tail_sum(ax[outer], self.tail_coefficients)
        return np.sign(x) * out


def _tail_sum(ax: np.ndarray, coeffs) -> np.ndarray:
    # kappa * [x^(1-a)/(1-a) + (a/2) e^2 x^(-1-a)/(1+a) - a(a+2)/8 e^4 x^(-3-a)/(3+a)]
    total = np.zeros_like(ax)
    for kappa, a, c1, c2 in coeffs:
        xa = ax ** (-a)
        inv2 = ax ** (-2.0)
        total += kappa * xa * (ax / (1.0 - a) + c1 / ax + c2 * inv2 / ax)
    return total


@dataclass(frozen=True)
class TailFamily:
    """A concrete even, positive, smooth initial datum.

    Attributes:
        tails: Power tails with strictly increasing exponents.
        core_scale: Regularization length ``eps``.
        truncation_count: Number of tails summed.
        family: One of ``single``, ``two_term``, ``nested`` (or ``zero`` for the
            test-only vanishing datum).
    """

    tails: tuple[PowerTail, ...]
    core_scale: float
    truncation_count: int
    family: str
    table: AntiderivativeTable = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.core_scale) and self.core_scale > 0):
            raise AdmissibilityError(f"core scale eps must be > 0, got {self.core_scale}", eps=self.core_scale)
        alphas = [tl.alpha for tl in self.tails]
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise AdmissibilityError("tail exponents must be strictly increasing", alphas=alphas)
        object.__setattr__(self, "table", _build_table(self))

    @property
    def kappas(self) -> np.ndarray:
        return np.array([tl.kappa for tl in self.tails])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([tl.alpha for tl in self.tails])

    @property
    def leading(self) -> PowerTail:
        return self.tails[0]

    def value(self, x):
        x = np.asarray(x, dtype=float)
        r2 = self.core_scale**2 + x * x
        out = np.zeros_like(x)
        for tl in self.tails:
            out = out + tl.kappa * r2 ** (-0.5 * tl.alpha)
        return out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        r2 = self.core_scale**2 + x * x
        out = np.zeros_like(x)
        for tl in self.tails:
            out = out - tl.alpha * tl.kappa * x * r2 ** (-0.5 * tl.alpha - 1.0)
        return out

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        if not self.tails:
            return np.zeros_like(x)
        flat = np.atleast_1d(x).ravel()
        return self.table(flat, self.value).reshape(x.shape)


def _build_table(datum: TailFamily, switch_radius: float = 1.0e3) -> AntiderivativeTable:
    eps = datum.core_scale
    u_max = math.asinh(switch_radius / eps)
    n = int(math.ceil(u_max / _TABLE_DU))
    nodes = eps * np.sinh(np.linspace(0.0, u_max, n + 1))
    nodes[-1] = switch_radius
    lo, hi = nodes[:-1], nodes[1:]
    half = 0.5 * (hi - lo)
    pts = (lo + half)[:, None] + half[:, None] * _GL_NODES[None, :]
    pieces = half * (datum.value(pts) @ _GL_WEIGHTS)
    cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
    coeffs = tuple(
        (
            tl.kappa,
            tl.alpha,
            0.5 * tl.alpha * eps**2 / (1.0 + tl.alpha),
            -tl.alpha * (tl.alpha + 2.0) / 8.0 * eps**4 / (3.0 + tl.alpha),
        )
        for tl in datum.tails
    )
    tail_at_switch = float(_tail_sum(np.array([switch_radius]), coeffs)[0]) if coeffs else 0.0
    return AntiderivativeTable(
        switch_radius=switch_radius,
        nodes=nodes,
        cumulative=cumulative,
        tail_constant=float(cumulative[-1]) - tail_at_switch,
        tail_coefficients=coeffs,
    )


def check_two_term(alpha: float, beta: float) -> None:
    """Raise unless ``alpha < beta < (1 + alpha) / 2``."""
    upper = 0.5 * (1.0 + alpha)
    if not (alpha < beta < upper):
        raise AdmissibilityError(
            f"beta must lie in the open interval (alpha, (1+alpha)/2) = ({alpha:g}, {upper:g}), got {beta:g}",
            alpha=alpha,
            beta=beta,
            admissible=[alpha, upper],
        )


def check_nested(alphas: Sequence[float], alpha_inf: float | None = None) -> None:
    """Raise unless the exponent ladder is admissible for the nested expansion.

    Requires strictly increasing exponents in (0, 1), ``alpha_1 > (alpha_inf +
    alpha_0) / 2`` and every ``alpha_n < (1 + alpha_0) / 2``.  ``alpha_inf``
    defaults to the largest listed exponent.
    """
    a = list(alphas)
    if len(a) < 2:
        raise AdmissibilityError("nested family needs at least two exponents", alphas=a)
    if any(not (0.0 < v < 1.0) for v in a):
        raise AdmissibilityError("nested exponents must lie in (0, 1)", alphas=a)
    if any(q <= p for p, q in zip(a, a[1:])):
        raise AdmissibilityError("nested exponents must be strictly increasing", alphas=a)
    a_inf = max(a) if alpha_inf is None else alpha_inf
    if a_inf < max(a) or a_inf >= 1.0:
        raise AdmissibilityError("alpha_inf must bound the sequence and stay below 1", alpha_inf=a_inf)
    if not a[1] > 0.5 * (a_inf + a[0]):
        raise AdmissibilityError(
            f"need alpha_1 > (alpha_inf + alpha_0)/2 = {0.5 * (a_inf + a[0]):g}, got {a[1]:g}",
            alphas=a,
            alpha_inf=a_inf,
        )
    ceiling = 0.5 * (1.0 + a[0])
    if a_inf >= ceiling:
        raise AdmissibilityError(
            f"need every alpha_n < (1 + alpha_0)/2 = {ceiling:g}", alphas=a, alpha_inf=a_inf
        )


def geometric_alphas(alpha0: float = 0.5, alpha_inf: float = 0.7, first_gap: float = 0.08, n_max: int = 6) -> list[float]:
    """``[alpha0, alpha_inf - first_gap * 2**-(n-1) for n = 1 .. n_max-1]``."""
    return [alpha0] + [alpha_inf - first_gap * 2.0 ** (-(n - 1)) for n in range(1, n_max)]


def construct_datum(spec: DatumSpec) -> TailFamily:
    """Validate ``spec`` and build the corresponding :class:`TailFamily`."""
    if spec.family not in FAMILIES:
        raise AdmissibilityError(f"unknown family {spec.family!r}; expected one of {FAMILIES}", family=spec.family)
    if not (math.isfinite(spec.eps) and spec.eps > 0):
        raise AdmissibilityError(f"core scale eps must be > 0, got {spec.eps}", eps=spec.eps)
    if spec.family == "single":
        tails = (PowerTail(spec.kappa1, spec.alpha),)
    elif spec.family == "two_term":
        if spec.beta is None:
            raise AdmissibilityError("two_term family requires beta")
        PowerTail(spec.kappa1, spec.alpha)
        check_two_term(spec.alpha, spec.beta)
        tails = (PowerTail(spec.kappa1, spec.alpha), PowerTail(spec.kappa2, spec.beta))
    else:
        if spec.alphas is None:
            raise AdmissibilityError("nested family requires an explicit alphas list")
        alphas = list(spec.alphas)
        check_nested(alphas, spec.alpha_inf)
        n_max = len(alphas) if spec.n_max is None else spec.n_max
        if not (1 <= n_max <= len(alphas)):
            raise AdmissibilityError(f"n_max must be in [1, {len(alphas)}], got {n_max}", n_max=n_max)
        tails = tuple(PowerTail(2.0 ** (-n), a) for n, a in enumerate(alphas[:n_max]))
    return TailFamily(tails=tails, core_scale=spec.eps, truncation_count=len(tails), family=spec.family)


def single(kappa: float = 1.0, alpha: float = 0.5, eps: float = 1.0) -> TailFamily:
    return construct_datum(DatumSpec("single", kappa1=kappa, alpha=alpha, eps=eps))


def two_term(kappa1: float = 1.0, alpha: float = 0.5, kappa2: float = 1.0, beta: float = 0.6, eps: float = 1.0) -> TailFamily:
    return construct_datum(DatumSpec("two_term", kappa1=kappa1, alpha=alpha, kappa2=kappa2, beta=beta, eps=eps))


def nested(alphas: Sequence[float], n_max: int | None = None, alpha_inf: float | None = None, eps: float = 1.0) -> TailFamily:
    return construct_datum(
        DatumSpec("nested", alphas=tuple(alphas), n_max=n_max, alpha_inf=alpha_inf, eps=eps)
    )


def zero_datum(eps: float = 1.0) -> TailFamily:
    """The vanishing datum ``f0 = 0``; only useful for testing trivial cases."""
    return TailFamily(tails=(), core_scale=eps, truncation_count=0, family="zero")


def evaluate(datum: TailFamily, x: float, channel: str = "value") -> float:
    """Evaluate ``f0``, ``f0'`` or ``F0`` at a single finite point."""
    if not math.isfinite(x):
        raise AdmissibilityError(f"x must be finite, got {x}", x=x)
    if channel == "value":
        return float(datum.value(x))
    if channel == "derivative":
        return float(datum.derivative(x))
    if channel == "antiderivative":
        return float(datum.antiderivative(x))
    raise AdmissibilityError(f"unknown channel {channel!r}", channel=channel)


def tail_residual(datum: TailFamily, x: float) -> float:
    """``f0(x) - sum_n kappa_n |x|**-alpha_n`` computed without cancellation."""
    if not math.isfinite(x) or abs(x) < 1.0:
        raise AdmissibilityError("tail residual is only defined for finite |x| >= 1", x=x)
    ax = abs(x)
    u = (datum.core_scale / ax) ** 2
    return float(sum(tl.kappa * ax ** (-tl.alpha) * math.expm1(-0.5 * tl.alpha * math.log1p(u)) for tl in datum.tails))
