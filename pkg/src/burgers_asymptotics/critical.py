"""Long-time limit objects of the leading tail ``kappa1 / |x|**alpha``.

The finite-t maxima of ``H_t`` converge to the branch roots of::

    z = y + kappa1 / |y|**alpha

(``y_star``), with limiting phase::

    H_inf(y, z) = -(z - y)**2 / 4 - kappa1 sign(y) |y|**(1 - alpha) / (2 (1 - alpha))

The two branches exchange dominance at ``z_c``, where the limit profile
``p(z) = kappa1 / |y_star(z)|**alpha`` jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import AdmissibilityError, BranchMissingError, FoldError, StructuralError
from .initial_data import PowerTail, TailFamily, check_two_term
from .landscape import Frame, scan_landscape

BRANCHES = ("plus", "minus")
_XTOL = 1e-300
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class LeadingTail:
    kappa1: float
    alpha: float

    def __post_init__(self) -> None:
        PowerTail(self.kappa1, self.alpha)

    @classmethod
    def of(cls, datum: TailFamily) -> "LeadingTail":
        return cls(datum.leading.kappa, datum.leading.alpha)

    @property
    def fold_root(self) -> float:
        """``(alpha kappa1)**(1/(1+alpha))``, where ``y + kappa1 y**-alpha`` is minimal."""
        return (self.alpha * self.kappa1) ** (1.0 / (1.0 + self.alpha))

    @property
    def m_plus(self) -> float:
        y = self.fold_root
        return y + self.kappa1 * y ** (-self.alpha)

    def implicit_residual(self, y: float, z: float) -> float:
        return z - y - self.kappa1 * abs(y) ** (-self.alpha)


def _check_branch(branch: str) -> None:
    if branch not in BRANCHES:
        raise AdmissibilityError(f"branch must be 'plus' or 'minus', got {branch!r}", branch=branch)


def y_star(z: float, branch: str, leading: LeadingTail) -> float:
    """Branch root of ``z = y + kappa1 / |y|**alpha``.

    ``minus`` is the unique negative root (exists for every z).  ``plus`` is the
    largest positive root, the one where ``H_inf(., z)`` is concave; it exists
    only above the fold ``m_plus``.
    """
    _check_branch(branch)
    k, a = leading.kappa1, leading.alpha

    if branch == "minus":
        def g(y: float) -> float:
            return y + k * (-y) ** (-a) - z

        hi = -min(1.0, (k / (abs(z) + 2.0)) ** (1.0 / a))
        lo = -1.0
        while g(lo) >= 0.0:
            lo *= 2.0
        return brentq(g, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=500)

    m = leading.m_plus
    if not z > m:
        raise FoldError(f"plus branch does not exist for z={z:g} <= m_plus={m:g}", z=z, m_plus=m)

    def gp(y: float) -> float:
        return y + k * y ** (-a) - z

    lo = leading.fold_root
    hi = max(z, lo * 2.0)
    return brentq(gp, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=500)


def h_infinity(y: float, z: float, leading: LeadingTail) -> float:
    if y == 0:
        raise AdmissibilityError("H_inf is singular at y = 0", y=y)
    k, a = leading.kappa1, leading.alpha
    return -0.25 * (z - y) ** 2 - k * math.copysign(abs(y) ** (1.0 - a), y) / (2.0 * (1.0 - a))


def branch_gap(z: float, leading: LeadingTail) -> float:
    """``H_inf(y_star_plus(z), z) - H_inf(y_star_minus(z), z)``."""
    return h_infinity(y_star(z, "plus", leading), z, leading) - h_infinity(y_star(z, "minus", leading), z, leading)


@dataclass(frozen=True)
class CriticalStructure:
    leading: LeadingTail
    z_c: float
    y_star_plus_at_zc: float
    y_star_minus_at_zc: float
    h_inf_at_zc: float
    m_plus: float

    def y_at_zc(self, branch: str) -> float:
        _check_branch(branch)
        return self.y_star_plus_at_zc if branch == "plus" else self.y_star_minus_at_zc

    @property
    def p_plus(self) -> float:
        return self.leading.kappa1 * abs(self.y_star_plus_at_zc) ** (-self.leading.alpha)

    @property
    def p_minus(self) -> float:
        return self.leading.kappa1 * abs(self.y_star_minus_at_zc) ** (-self.leading.alpha)

    @property
    def half_jump(self) -> float:
        """``(p(z_c+) - p(z_c-)) / 2``."""
        return 0.5 * (self.p_plus - self.p_minus)

    def to_dict(self) -> dict:
        return {
            "kappa1": self.leading.kappa1,
            "alpha": self.leading.alpha,
            "z_c": self.z_c,
            "y_star_plus": self.y_star_plus_at_zc,
            "y_star_minus": self.y_star_minus_at_zc,
            "h_inf": self.h_inf_at_zc,
            "m_plus": self.m_plus,
            "p_plus": self.p_plus,
            "p_minus": self.p_minus,
            "half_jump": self.half_jump,
        }


def find_zc(leading: LeadingTail) -> CriticalStructure:
    """Locate the dominance exchange point and check the structural invariants.

    Raises:
        StructuralError: no sign change of the branch gap on the bracket, or an
            invariant (branch signs, equal limit heights, residuals) fails.
    """
    m = leading.m_plus
    lo, hi = m + 1e-6, m + 1e3
    phi_lo, phi_hi = branch_gap(lo, leading), branch_gap(hi, leading)
    if not (phi_lo < 0.0 < phi_hi):
        raise StructuralError("branch gap has no sign change on the bracket", bracket=[lo, hi], values=[phi_lo, phi_hi])
    zc = brentq(lambda z: branch_gap(z, leading), lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=500)
    yp, ym = y_star(zc, "plus", leading), y_star(zc, "minus", leading)
    hp, hm = h_infinity(yp, zc, leading), h_infinity(ym, zc, leading)
    cs = CriticalStructure(leading, zc, yp, ym, 0.5 * (hp + hm), m)

    checks = {
        "branch signs": ym < 0.0 < yp,
        # z - y = kappa1 |y|^-alpha > 0 on both branches; only the ordering is informative
        "branch offsets ordered": 0.0 < zc - yp < zc - ym,
        "equal limit heights": abs(hp - hm) <= 1e-10,
        "plus residual": abs(leading.implicit_residual(yp, zc)) <= 1e-12,
        "minus residual": abs(leading.implicit_residual(ym, zc)) <= 1e-12,
        "z_c above fold": zc > m,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise StructuralError("critical structure invariants failed", failed=failed, structure=cs.to_dict())
    return cs


def profile_p(z: float, cs: CriticalStructure) -> float:
    """Limit profile, discontinuous at ``z_c``."""
    if z == cs.z_c:
        raise AdmissibilityError("profile is undefined at the discontinuity z_c", z=z)
    branch = "plus" if z > cs.z_c else "minus"
    return cs.leading.kappa1 * abs(y_star(z, branch, cs.leading)) ** (-cs.leading.alpha)


def y_star_prime(z: float, branch: str, leading: LeadingTail) -> float:
    """Central finite difference of :func:`y_star` (step ``1e-6 (1 + |z|)``)."""
    _check_branch(branch)
    if branch == "plus" and abs(z - leading.m_plus) < 1e-3:
        raise FoldError("too close to the fold for a derivative", z=z, m_plus=leading.m_plus)
    h = 1e-6 * (1.0 + abs(z))
    return (y_star(z + h, branch, leading) - y_star(z - h, branch, leading)) / (2.0 * h)


def y_star_prime_closed(z: float, branch: str, leading: LeadingTail) -> float:
    """Implicit differentiation: ``1 / (1 - alpha kappa1 sign(y) |y|**(-1-alpha))``."""
    y = y_star(z, branch, leading)
    k, a = leading.kappa1, leading.alpha
    return 1.0 / (1.0 - a * k * math.copysign(abs(y) ** (-1.0 - a), y))


P_FORMS = ("closed", "two_minus_slope", "linearized")


def p_correction(beta: float, branch: str, cs: CriticalStructure, kappa2: float = 1.0, form: str = "closed") -> float:
    """Second-order jump constants of the two-term family.

    Forms, with ``y = y_star_branch(z_c)``:

    ``closed``           ``kappa2 |y|**-beta (1 + a k1 / (a k1 - |y|**(1+a)))``
    ``two_minus_slope``  ``kappa2 |y|**-beta (2 - y_star'(z_c))``
    ``linearized``       ``kappa2 |y|**-beta y_star'(z_c)``, i.e. minus the
                         first-order shift of the finite-t maximum; this is what
                         the rescaled solution actually converges to.

    Linear in ``kappa2``.
    """
    if form not in P_FORMS:
        raise AdmissibilityError(f"unknown form {form!r}; expected one of {P_FORMS}", form=form)
    k, a = cs.leading.kappa1, cs.leading.alpha
    check_two_term(a, beta)
    y = abs(cs.y_at_zc(branch))
    unit = y ** (-beta)
    if form == "closed":
        denom = a * k - y ** (1.0 + a)
        if abs(denom) < 1e-10:
            raise StructuralError("singular denominator a*k1 - |y|^(1+a)", y=y, denom=denom)
        return kappa2 * unit * (1.0 + a * k / denom)
    slope = y_star_prime(cs.z_c, branch, cs.leading)
    if form == "two_minus_slope":
        return kappa2 * unit * (2.0 - slope)
    return kappa2 * unit * slope


def p_log_derivative_check(beta: float, branch: str, cs: CriticalStructure, kappa2: float = 1.0, form: str = "closed", h: float = 1e-6) -> tuple[float, float]:
    """``(finite difference in beta, -ln|y| * P)``; the two should agree."""
    fd = (p_correction(beta + h, branch, cs, kappa2, form) - p_correction(beta - h, branch, cs, kappa2, form)) / (2 * h)
    identity = -math.log(abs(cs.y_at_zc(branch))) * p_correction(beta, branch, cs, kappa2, form)
    return fd, identity


def root_shift_coefficient(beta: float, branch: str, cs: CriticalStructure, kappa2: float = 1.0, form: str = "closed") -> float:
    """Coefficient ``c`` in ``y_t - y_star ~ c t**(-(beta-alpha)/(1+alpha))`` at ``z_c``.

    ``closed`` is ``kappa2 / (|y|**beta (a k1 / |y|**(1+a) - 1))`` on both
    branches; ``linearized`` is ``-kappa2 |y|**-beta / g'(y)`` with
    ``g(y) = y + k1 |y|**-a``.  They agree on the plus branch only.
    """
    k, a = cs.leading.kappa1, cs.leading.alpha
    y = cs.y_at_zc(branch)
    ay = abs(y)
    if form == "closed":
        return kappa2 / (ay**beta * (a * k / ay ** (1.0 + a) - 1.0))
    if form == "linearized":
        gprime = 1.0 - a * k * math.copysign(ay ** (-1.0 - a), y)
        return -kappa2 * ay ** (-beta) / gprime
    raise AdmissibilityError(f"unknown form {form!r}", form=form)


def finite_t_maxima(datum: TailFamily, z: float, t: float, window: tuple[float, float] | None = None) -> tuple[float, float]:
    """The two local maxima ``(y_minus(z, t), y_plus(z, t))`` of ``H_t(., z)``.

    Raises:
        BranchMissingError: fewer or more than one maximum on either side of 0.
    """
    report = scan_landscape(datum, Frame(datum.leading.alpha, t, z), window)
    neg = [p.y for p in report.maxima if p.y < 0]
    pos = [p.y for p in report.maxima if p.y > 0]
    if len(neg) != 1 or len(pos) != 1:
        raise BranchMissingError(
            "landscape lacks the two-maxima structure", z=z, t=t, maxima=[p.y for p in report.maxima]
        )
    return neg[0], pos[0]
