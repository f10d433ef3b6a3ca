"""Self-contained special-function kernels.

Everything the distribution families need lives here: the regularized
incomplete beta function and its inverse, chi-square CDF/quantile for even
degrees of freedom, the standard normal CDF/quantile, and binomial/Poisson
mass and distribution functions evaluated in log space.

All functions are pure and reentrant.  Iterative solvers honour a
:class:`Tolerance` and raise :class:`ConvergenceError` instead of returning
an unconverged value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Tolerance",
    "ConvergenceError",
    "CDF_TOL",
    "QUANTILE_TOL",
    "reg_inc_beta",
    "inv_reg_inc_beta",
    "chisq_cdf",
    "chisq_quantile",
    "normal_cdf",
    "normal_pdf",
    "normal_quantile",
    "binom_log_pmf",
    "binom_pmf",
    "binom_cdf",
    "pois_log_pmf",
    "pois_pmf",
    "pois_cdf",
]

_EPS = 1e-15
_FPMIN = 1e-300


class ConvergenceError(ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute error bound and iteration budget for iterative solvers."""

    abs_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


CDF_TOL = Tolerance(abs_tol=1e-12, max_iter=500)
QUANTILE_TOL = Tolerance(abs_tol=1e-10, max_iter=200)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        de = d * c
        h *= de
        if abs(de - 1.0) < _EPS:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction failed for a={a}, b={b}, x={x}"
    )


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I(x; a, b).

    The cumulative distribution function of a Beta(a, b) variable at x.
    Degenerate shape parameters follow the limits of the beta family:
    I(x; 0, b) = 1 for x > 0 and I(x; a, 0) = 0 for x < 1.

    Parameters
    ----------
    x : float in [0, 1]
    a, b : float >= 0, not both zero
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if a < 0 or b < 0:
        raise ValueError("shape parameters must be nonnegative")
    if a == 0.0 and b == 0.0:
        raise ValueError("shape parameters must not both be zero")
    if a == 0.0:
        return 1.0 if x > 0.0 else 0.0
    if b == 0.0:
        return 1.0 if x >= 1.0 else 0.0
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # Symmetry switch keeps the continued fraction in its fast-convergence
    # region on both sides of the mode.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _beta_pdf(x: float, a: float, b: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    ln = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + (a - 1.0) * math.log(x)
        + (b - 1.0) * math.log1p(-x)
    )
    return math.exp(ln) if ln > -745.0 else 0.0


def inv_reg_inc_beta(
    p: float, a: float, b: float, tol: Tolerance = QUANTILE_TOL
) -> float:
    """Inverse of :func:`reg_inc_beta` in its first argument.

    Returns x with ``|reg_inc_beta(x, a, b) - p| <= tol.abs_tol``, found by
    bracketing bisection refined with Newton steps (falling back to bisection
    whenever a Newton step leaves the bracket).  Degenerate shapes follow the
    conventions ``inv(p, 0, b) = 0`` and ``inv(p, a, 0) = 1`` for p in (0, 1).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if a < 0 or b < 0:
        raise ValueError("shape parameters must be nonnegative")
    if a == 0.0 and b == 0.0:
        raise ValueError("shape parameters must not both be zero")
    if a == 0.0:
        return 0.0
    if b == 0.0:
        return 1.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0

    lo, hi = 0.0, 1.0
    x = a / (a + b)  # mean as the starting point
    step = math.inf
    for _ in range(tol.max_iter):
        f = reg_inc_beta(x, a, b) - p
        # The residual alone is meaningless deep in a tail where the CDF is
        # nearly flat, so also require the iteration to have stalled in x.
        if abs(f) <= tol.abs_tol and step <= 1e-12 * max(1.0, abs(x)):
            return x
        if f < 0.0:
            lo = x
        else:
            hi = x
        dfdx = _beta_pdf(x, a, b)
        newton_ok = dfdx > 0.0
        if newton_ok:
            x_new = x - f / dfdx
            newton_ok = lo < x_new < hi
        if not newton_ok:
            x_new = 0.5 * (lo + hi)
        step = abs(x_new - x)
        if hi - lo < 4.0 * _EPS * max(1.0, abs(x_new)):
            # Bracket exhausted at machine precision; accept the midpoint.
            return 0.5 * (lo + hi)
        x = x_new
    raise ConvergenceError(
        f"inverse incomplete beta failed for p={p}, a={a}, b={b}"
    )


def _reg_lower_gamma(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x), series/continued fraction."""
    if x < 0 or s <= 0:
        raise ValueError("requires x >= 0 and s > 0")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        # Power series around zero.
        ap = s
        summed = 1.0 / s
        term = summed
        for _ in range(500):
            ap += 1.0
            term *= x / ap
            summed += term
            if abs(term) < abs(summed) * _EPS:
                ln = -x + s * math.log(x) - math.lgamma(s)
                return summed * math.exp(ln)
        raise ConvergenceError(f"incomplete gamma series failed for s={s}, x={x}")
    # Continued fraction for the upper tail (modified Lentz).
    b_ = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b_
    h = d
    for i in range(1, 500):
        an = -i * (i - s)
        b_ += 2.0
        d = an * d + b_
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b_ + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        de = d * c
        h *= de
        if abs(de - 1.0) < _EPS:
            ln = -x + s * math.log(x) - math.lgamma(s)
            return 1.0 - h * math.exp(ln)
    raise ConvergenceError(
        f"incomplete gamma continued fraction failed for s={s}, x={x}"
    )


def chisq_cdf(x: float, k: int) -> float:
    """Chi-square CDF with k degrees of freedom (k a positive even integer)."""
    if k < 2 or k % 2 != 0:
        raise ValueError(f"degrees of freedom must be a positive even integer, got {k}")
    if x <= 0.0:
        return 0.0
    return _reg_lower_gamma(k / 2.0, x / 2.0)


def chisq_quantile(p: float, k: int, tol: Tolerance = QUANTILE_TOL) -> float:
    """Chi-square quantile: x with chisq_cdf(x, k) = p, for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if k < 2 or k % 2 != 0:
        raise ValueError(f"degrees of freedom must be a positive even integer, got {k}")
    # Bracket: the mean is k; expand the upper end until the CDF crosses p.
    lo, hi = 0.0, float(k)
    while chisq_cdf(hi, k) < p:
        hi *= 2.0
        if hi > 1e12:
            raise ConvergenceError(f"chi-square quantile bracket failed for p={p}, k={k}")
    x = float(k)
    s = k / 2.0
    step = math.inf
    for _ in range(tol.max_iter):
        f = chisq_cdf(x, k) - p
        if abs(f) <= tol.abs_tol and step <= 1e-12 * max(1.0, abs(x)):
            return x
        if f < 0.0:
            lo = x
        else:
            hi = x
        ln_pdf = -x / 2.0 + (s - 1.0) * math.log(x) - s * math.log(2.0) - math.lgamma(s)
        dfdx = math.exp(ln_pdf) if ln_pdf > -745.0 else 0.0
        newton_ok = dfdx > 0.0
        if newton_ok:
            x_new = x - f / dfdx
            newton_ok = lo < x_new < hi
        if not newton_ok:
            x_new = 0.5 * (lo + hi)
        step = abs(x_new - x)
        if hi - lo < 4.0 * _EPS * max(1.0, abs(x_new)):
            return 0.5 * (lo + hi)
        x = x_new
    raise ConvergenceError(f"chi-square quantile failed for p={p}, k={k}")


_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def normal_cdf(z: float) -> float:
    """Standard normal CDF, accurate in both tails via erfc."""
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_pdf(z: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def normal_quantile(p: float, tol: Tolerance = QUANTILE_TOL) -> float:
    """Standard normal quantile: z with normal_cdf(z) = p, for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    lo, hi = -40.0, 40.0
    z = 0.0
    step = math.inf
    for _ in range(tol.max_iter):
        f = normal_cdf(z) - p
        if abs(f) <= tol.abs_tol and step <= 1e-12 * max(1.0, abs(z)):
            return z
        if f < 0.0:
            lo = z
        else:
            hi = z
        dfdz = normal_pdf(z)
        newton_ok = dfdz > 0.0
        if newton_ok:
            z_new = z - f / dfdz
            newton_ok = lo < z_new < hi
        if not newton_ok:
            z_new = 0.5 * (lo + hi)
        step = abs(z_new - z)
        if hi - lo < 4.0 * _EPS * max(1.0, abs(z_new)):
            return 0.5 * (lo + hi)
        z = z_new
    raise ConvergenceError(f"normal quantile failed for p={p}")


def binom_log_pmf(omega: int, n: int, tau: float) -> float:
    """Log of the binomial mass function at omega for n trials, success tau."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0 <= omega <= n:
        raise ValueError(f"omega must lie in [0, {n}], got {omega}")
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    ln_choose = (
        math.lgamma(n + 1) - math.lgamma(omega + 1) - math.lgamma(n - omega + 1)
    )
    return ln_choose + omega * math.log(tau) + (n - omega) * math.log1p(-tau)


def binom_pmf(omega: int, n: int, tau: float) -> float:
    return math.exp(binom_log_pmf(omega, n, tau))


def binom_cdf(omega: int, n: int, tau: float) -> float:
    """Binomial CDF P[X <= omega] by direct summation of the smaller tail."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    if omega < 0:
        return 0.0
    if omega >= n:
        return 1.0
    if omega <= n // 2:
        return math.fsum(binom_pmf(i, n, tau) for i in range(0, omega + 1))
    return 1.0 - math.fsum(binom_pmf(i, n, tau) for i in range(omega + 1, n + 1))


def pois_log_pmf(omega: int, tau: float) -> float:
    """Log of the Poisson mass function at omega with mean tau."""
    if omega < 0:
        raise ValueError(f"omega must be a nonnegative integer, got {omega}")
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    return -tau + omega * math.log(tau) - math.lgamma(omega + 1)


def pois_pmf(omega: int, tau: float) -> float:
    return math.exp(pois_log_pmf(omega, tau))


def pois_cdf(omega: int, tau: float) -> float:
    """Poisson CDF P[X <= omega] by ascending term recurrence."""
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    if omega < 0:
        return 0.0
    if tau > 700.0:
        # exp(-tau) underflows; sum the terms in log space instead.
        return min(1.0, math.fsum(pois_pmf(i, tau) for i in range(omega + 1)))
    term = math.exp(-tau)
    total = term
    for i in range(1, omega + 1):
        term *= tau / i
        total += term
    return min(1.0, total)
