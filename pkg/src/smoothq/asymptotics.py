"""Population calculus for the smoothed quantile family.

The population minimiser ``q(z, h)`` solves ``F(q) + h q / 2 = (1 - z + h m) / 2``.
Its CLT variance is ``B(z, h) / (2 f(q) + h)**2`` with

    B = 4 F(q)(1 - F(q)) + 2 h [E|Y - q| - (m - q)(1 - 2 F(q))] + h**2 Var(Y).

Holding the target quantile ``F^{-1}(tau)`` fixed ties ``z`` to ``h`` along the
line ``z(tau, h) = 1 - 2 tau + h (m - F^{-1}(tau))``; along that line the
variance is the rational function ``v = (a + b h + c h**2) / (d + h)**2`` whose
sign pattern decides whether smoothing helps and by how much.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .estimator import SmoothingParams, TINY_H

INFINITE = "infinite"
ZERO = "zero"

# relative tolerance for sign decisions on normalised coefficient combinations
SIGN_TOL = 1e-9

_ROOT_TOL = 1e-12
_MAX_ITER = 200


def _check_tau(tau):
    if not 0.0 < tau < 1.0:
        raise DomainError(f"tau must lie in (0, 1), got {tau!r}")


def _as_params(p):
    return p if isinstance(p, SmoothingParams) else SmoothingParams(*p)


def population_minimizer(d, p):
    """Population smoothed quantile ``q(z, h)``.

    Solved in the offset ``delta = q - m`` as ``F(m + delta) + h delta / 2 = (1 - z) / 2``,
    which keeps the residual on the probability scale even for very large
    ``h``.  A bracket ``m +/- 20 sd`` is widened geometrically until it
    straddles the root, then Newton steps that leave the bracket fall back
    to bisection.  ``h = 0`` is the exact quantile of order ``(1 - z) / 2``.
    """
    p = _as_params(p)
    if p.h < TINY_H:
        return d.quantile(p.level)
    m, h = d.mean(), p.h
    goal = (1.0 - p.z) / 2.0

    def g(delta):
        return d.cdf(m + delta) + 0.5 * h * delta - goal

    width = 20.0 * d.sd()
    lo, hi = -width, width
    while g(lo) > 0:
        lo *= 2.0
    while g(hi) < 0:
        hi *= 2.0
    x = 0.5 * (lo + hi)
    for _ in range(_MAX_ITER):
        r = g(x)
        if abs(r) <= _ROOT_TOL:
            break
        if r > 0:
            hi = x
        else:
            lo = x
        step = x - r / (d.pdf(m + x) + 0.5 * h)
        x = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * max(1.0, abs(x)):
            break
    return m + x


def z_of_tau(d, tau, h):
    """Location parameter placing the population minimiser at ``F^{-1}(tau)``."""
    _check_tau(tau)
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h!r}")
    return 1.0 - 2.0 * tau + h * (d.mean() - d.quantile(tau))


def sigma2(d, p):
    """Asymptotic variance of ``sqrt(n) (q_hat(z, h) - q(z, h))``."""
    p = _as_params(p)
    q = population_minimizer(d, p)
    F = d.cdf(q)
    h = p.h
    B = (4.0 * F * (1.0 - F)
         + 2.0 * h * (d.mean_abs_dev(q) - (d.mean() - q) * (1.0 - 2.0 * F))
         + h * h * d.variance())
    return B / (2.0 * d.pdf(q) + h) ** 2


@dataclass(frozen=True)
class VarianceCoefficients:
    """Coefficients of ``v(tau, h) = (a + b h + c h**2) / (d + h)**2``."""

    a: float
    b: float
    c: float
    d: float
    tau: float

    @property
    def slope_at_zero(self):
        """``b d - 2 a``: sign of dv/dh at ``h = 0``."""
        return self.b * self.d - 2.0 * self.a

    @property
    def slope_trend(self):
        """``2 c d - b``: coefficient of ``h`` in the numerator of dv/dh."""
        return 2.0 * self.c * self.d - self.b

    def v(self, h):
        return (self.a + self.b * h + self.c * h * h) / (self.d + h) ** 2

    def dv_dh(self, h):
        return (self.slope_trend * h + self.slope_at_zero) / (self.d + h) ** 3


def coefficients(d, tau):
    _check_tau(tau)
    q = d.quantile(tau)
    return VarianceCoefficients(
        a=4.0 * tau * (1.0 - tau),
        b=2.0 * (d.mean_abs_dev(q) - (d.mean() - q) * (1.0 - 2.0 * tau)),
        c=d.variance(),
        d=2.0 * d.pdf(q),
        tau=tau,
    )


def v(d, tau, h):
    """Asymptotic variance along the constant-``tau`` line."""
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h!r}")
    return coefficients(d, tau).v(h)


def dv_dh(d, tau, h):
    if h < 0:
        raise DomainError(f"h must be >= 0, got {h!r}")
    return coefficients(d, tau).dv_dh(h)


class EfficiencyCase(Enum):
    INCREASING_FROM_ZERO = "IncreasingFromZero"
    MONOTONE_DECREASING = "MonotoneDecreasing"
    FINITE_OPTIMUM = "FiniteOptimum"
    BOUNDARY_FLAT = "BoundaryFlat"

    def __str__(self):
        return self.value


def _signs(coeffs):
    s0 = coeffs.slope_at_zero / (coeffs.a + 1.0)
    s1 = coeffs.slope_trend / (abs(coeffs.b) + 1.0)
    sign = lambda x: 0 if abs(x) <= SIGN_TOL else (1 if x > 0 else -1)
    return sign(s0), sign(s1)


def classify(coeffs):
    """Shape of ``h -> v(tau, h)`` from the signs of ``bd - 2a`` and ``2cd - b``.

    ``bd - 2a`` and ``2cd - b`` both nonpositive (not both zero) means
    dv/dh < 0 on all of ``(0, inf)``, so that pattern is reported as
    monotone decreasing as well.
    """
    s0, s1 = _signs(coeffs)
    if s0 * s1 < 0:
        return EfficiencyCase.FINITE_OPTIMUM
    if s0 > 0:
        return EfficiencyCase.INCREASING_FROM_ZERO
    if s0 == 0 and s1 >= 0:
        return EfficiencyCase.BOUNDARY_FLAT
    return EfficiencyCase.MONOTONE_DECREASING


def h_star(coeffs):
    """Global minimiser of ``v`` over ``[0, inf]``.

    Returns a positive float for an attained interior minimum, :data:`ZERO`
    when ``h = 0`` is optimal and :data:`INFINITE` when the infimum is only
    the limit ``c = Var(Y)``.  Candidates ``0``, the stationary point (when
    it is positive and finite) and the limit are compared directly, which
    also settles the interior-maximum pattern ``bd - 2a > 0 > 2cd - b``.
    """
    s0, s1 = _signs(coeffs)
    best, best_v = ZERO, coeffs.v(0.0)
    if s0 * s1 < 0:
        stationary = -coeffs.slope_at_zero / coeffs.slope_trend
        if coeffs.v(stationary) < best_v:
            best, best_v = stationary, coeffs.v(stationary)
    if coeffs.c < best_v:
        best = INFINITE
    return best


@dataclass(frozen=True)
class EfficiencyReport:
    tau: float
    q_tau: float
    h_star: object
    v_at_zero: float
    v_at_opt: float
    ratio: float
    case: EfficiencyCase
    limit: bool
    coefficients: VarianceCoefficients


def efficiency_report(d, tau):
    """Optimal smoothing at level ``tau`` and the efficiency ratio it buys.

    When the optimum is :data:`INFINITE`, ``v_at_opt`` is the limiting value
    ``Var(Y)`` and ``limit`` is set: the bound is approached, never attained,
    and the limiting estimator targets the mean rather than ``F^{-1}(tau)``.
    """
    coeffs = coefficients(d, tau)
    hs = h_star(coeffs)
    v0 = coeffs.v(0.0)
    if hs == INFINITE:
        v_opt = coeffs.c
    elif hs == ZERO:
        v_opt = v0
    else:
        v_opt = coeffs.v(hs)
    return EfficiencyReport(
        tau=tau,
        q_tau=d.quantile(tau),
        h_star=hs,
        v_at_zero=v0,
        v_at_opt=v_opt,
        ratio=v_opt / v0,
        case=classify(coeffs),
        limit=hs == INFINITE,
        coefficients=coeffs,
    )


@dataclass(frozen=True)
class EfficiencyCondition:
    tau: float
    left: float
    right: float
    holds: bool


def efficiency_condition(d):
    """Compare the median-type quantile at the mean against the sample mean.

    With ``tau = F(m)`` the empirical quantile of order ``tau`` estimates ``m``
    with asymptotic variance ``tau (1 - tau) / f(m)**2``; ``holds`` is true when
    this beats ``Var(Y)``.
    """
    m = d.mean()
    tau = d.cdf(m)
    left = tau * (1.0 - tau) / d.pdf(m) ** 2
    right = d.variance()
    return EfficiencyCondition(tau=tau, left=left, right=right, holds=left < right)
