"""Special functions used by the transforms, densities and risk measures.

``hyp2f1`` works on plain floats (dispatching its inner loop to the compiled
kernel when available) and on ``mpmath.mpf`` values for the extended
precision inversion path.
"""
from __future__ import annotations

import math
from statistics import NormalDist

from scipy import optimize, special as _sp

from ._backend import kernels


class ConvergenceError(ArithmeticError):
    pass


_STD_NORMAL = NormalDist()
_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

HYP_TOL = 1e-16
HYP_MAX_TERMS = 100_000


def _mp_eps():
    import mpmath
    return mpmath.mp.eps


def _is_nonpos_int(v):
    return v <= 0 and v == int(v)


def _series(a, b, c, x, tol, max_terms):
    # generic Python loop, also used for mpmath numbers
    term = s = x * 0 + 1
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        term *= ratio
        s += term
        if term == 0:
            return s
        r = abs(ratio)
        if r < 1 and abs(term) <= tol * abs(s) * (1 - r):
            return s
    raise ConvergenceError("series not convergent")


def _gauss_series(a, b, c, x, tol):
    if all(type(v) is float for v in (a, b, c, x)):
        s, n = kernels.hyp2f1_series(a, b, c, x, max(tol, HYP_TOL), HYP_MAX_TERMS)
        if n < 0:
            raise ConvergenceError("series not convergent")
        return s
    return _series(a, b, c, x, tol, HYP_MAX_TERMS)


def hyp2f1(a, b, c, z, tol=None):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.

    Terminating series are summed directly.  For z < 0 the Pfaff
    transformation maps the argument to z/(z-1) in (0, 1); of its two forms
    the one with positive upper parameters is used, so the model's
    arguments (z = -w^2 in [-1, 0]) are summed without cancellation.

    `tol` defaults to 1e-16 for floats and to the working epsilon for
    mpmath numbers.

    Raises
    ------
    ConvergenceError
        If the series cannot converge (z >= 1) or `c` is a pole.
    """
    if all(isinstance(v, (int, float)) for v in (a, b, c, z)):
        a, b, c, z = float(a), float(b), float(c), float(z)
    if tol is None:
        tol = HYP_TOL if type(z) is float else _mp_eps()
    if _is_nonpos_int(c):
        raise ConvergenceError("series not convergent: c is a non-positive integer")
    if a == 0 or b == 0 or z == 0:
        return z * 0 + 1
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return _gauss_series(a, b, c, z, tol)
    if z >= 1:
        raise ConvergenceError("series not convergent: z >= 1")
    if z >= 0:
        return _gauss_series(a, b, c, z, tol)
    x = z / (z - 1)
    if a > 0 and c - b > 0 or not (c - a > 0 and b > 0):
        return (1 - z) ** (-a) * _gauss_series(a, c - b, c, x, tol)
    return (1 - z) ** (-b) * _gauss_series(c - a, b, c, x, tol)


def log_gamma_real(x):
    """log Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError("log_gamma_real requires x > 0")
    return math.lgamma(x)


def gamma_abs_complex(re, im):
    """|Gamma(re + i im)|."""
    if im == 0 and _is_nonpos_int(re):
        raise ValueError("Gamma has a pole at non-positive integers")
    return math.exp(_sp.loggamma(complex(re, im)).real)


def gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den) via log-gamma, with sign."""
    sign = 1.0
    acc = 0.0
    for v, s in [(v, 1.0) for v in num] + [(v, -1.0) for v in den]:
        if _is_nonpos_int(v):
            raise ValueError("Gamma has a pole at non-positive integers")
        acc += s * math.lgamma(v)
        if v < 0 and math.floor(v) % 2 == 1:
            sign = -sign
    return sign * math.exp(acc)


def normal_pdf(x):
    return math.exp(-0.5 * x * x - _LOG_SQRT_2PI)


def normal_cdf(x):
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_sf(x):
    return 0.5 * math.erfc(x / _SQRT2)


def log_normal_sf(x):
    """log P(Z > x), finite for all x (asymptotic series past x = 30)."""
    if x < 30.0:
        return math.log(normal_sf(x))
    inv = 1.0 / (x * x)
    acc, term = 1.0, 1.0
    for n in range(1, 9):
        term *= -(2 * n - 1) * inv
        acc += term
    return -0.5 * x * x - math.log(x) - _LOG_SQRT_2PI + math.log(acc)


def normal_quantile(u):
    if not 0.0 < u < 1.0:
        raise ValueError("probability must lie in (0, 1)")
    return _STD_NORMAL.inv_cdf(u)


def student_sf(x, nu):
    """P(T > x) for a standard Student-t with `nu` degrees of freedom."""
    if x < 0:
        return 1.0 - student_sf(-x, nu)
    return 0.5 * float(_sp.betainc(0.5 * nu, 0.5, nu / (nu + x * x)))


def student_cdf(x, nu):
    return student_sf(-x, nu)


def student4_sf(x):
    """Elementary survival function for nu = 4, stable in the far tail."""
    if x < 0:
        return 1.0 - student4_sf(-x)
    r = math.sqrt(x * x + 4.0)
    alpha = x / r
    one_minus = 4.0 / (r * (r + x))
    return 0.25 * one_minus * one_minus * (2.0 + alpha)


def student_quantile(u, nu):
    """Quantile of the standard Student-t.

    Closed forms for nu in {1, 2, 4}; otherwise the survival function is
    root-found with brentq.
    """
    if not 0.0 < u < 1.0:
        raise ValueError("probability must lie in (0, 1)")
    if nu <= 0:
        raise ValueError("nu must be positive")
    if u == 0.5:
        return 0.0
    if nu == 1:
        return math.tan(math.pi * (u - 0.5))
    if nu == 2:
        return (2.0 * u - 1.0) / math.sqrt(2.0 * u * (1.0 - u))
    if nu == 4:
        a = 4.0 * u * (1.0 - u)
        q = math.cos(math.acos(math.sqrt(a)) / 3.0) / math.sqrt(a)
        return math.copysign(2.0 * math.sqrt(q - 1.0), u - 0.5)
    if u < 0.5:
        return -student_quantile(1.0 - u, nu)
    target = 1.0 - u
    hi = max(1.0, 2.0 * normal_quantile(u))
    while student_sf(hi, nu) > target:
        hi *= 2.0
    return optimize.brentq(lambda x: student_sf(x, nu) - target, 0.0, hi,
                           xtol=1e-15, rtol=1e-15, maxiter=500)


def assoc_legendre(L, M, q):
    """Ferrers associated Legendre function P_L^M(q) on (-1, 1).

    Uses ((1+q)/(1-q))^(M/2) / Gamma(1-M) * 2F1(-L, L+1; 1-M; (1-q)/2).
    """
    if not -1.0 < q < 1.0:
        raise ValueError("assoc_legendre requires -1 < q < 1")
    c = 1.0 - M
    if _is_nonpos_int(c):
        raise ValueError("1 - M is a non-positive integer (integer-order "
                         "limit not implemented)")
    pref = ((1.0 + q) / (1.0 - q)) ** (0.5 * M) / gamma_ratio([c], [])
    return pref * hyp2f1(-L, L + 1.0, c, 0.5 * (1.0 - q))
