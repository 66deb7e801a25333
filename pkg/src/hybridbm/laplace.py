"""Laplace-in-time transform of the symmetric (mu1 = rho = 0) density and
its numerical inversion.

With s = 2p/sigma2^2, gamma = sqrt(s + nu^2/4) - nu/2 and
w = exp(-asinh(sigma2 |x| / sigma1)), the transform is

    f~(x, p) = sigma1^nu 2^(gamma-1) w^gamma G(gamma/2) G((gamma+nu+1)/2)
               2F1(gamma, -nu/2; gamma+nu/2+1; -w^2)
               / (sqrt(pi) sigma2 G(gamma+nu/2+1) (sigma1^2 + sigma2^2 x^2)^((nu+1)/2)).

Three independent evaluations are offered (hypergeometric, Legendre and
raw power series) plus a form adapted to nu < 0 and elementary closed
forms for nu in {0, 2, 4, -2, -4, -6}.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from types import SimpleNamespace

import mpmath

from .model import ModelParams, ParameterError
from .special import ConvergenceError, assoc_legendre, hyp2f1

_LN2 = math.log(2.0)

_FLOAT = SimpleNamespace(convert=float, exp=math.exp, log=math.log, log1p=math.log1p,
                         sqrt=math.sqrt, asinh=math.asinh, lgamma=math.lgamma,
                         log_pi=math.log(math.pi), log2=_LN2)


def _mp_ctx():
    return SimpleNamespace(convert=mpmath.mpf, exp=mpmath.exp, log=mpmath.log,
                           log1p=mpmath.log1p, sqrt=mpmath.sqrt, asinh=mpmath.asinh,
                           lgamma=mpmath.loggamma, log_pi=mpmath.log(mpmath.pi),
                           log2=mpmath.log(2))


class InversionMethod(enum.Enum):
    GaverStehfest = "gaver-stehfest"
    TalbotFixed = "talbot"


CLOSED_NU = (0.0, 2.0, 4.0, -2.0, -4.0, -6.0)
_NU_TOL = 1e-12


def _closed_nu(nu):
    """The member of CLOSED_NU within rounding of `nu`, else None."""
    for c in CLOSED_NU:
        if abs(nu - c) <= _NU_TOL:
            return c
    return None


@dataclass(frozen=True)
class TransformPoint:
    """Laplace-domain coordinates of (x, p)."""

    p: float
    s: float
    gamma: float
    w: float
    u: float
    legendre_L: float
    legendre_M2: float


def _check(params: ModelParams, p):
    if params.mu1 != 0.0 or params.rho != 0.0:
        raise ParameterError("transform available only for mu1 = 0 = rho")
    if params.sigma2 <= 0.0:
        raise ParameterError("transform needs sigma2 > 0")
    if not p > 0:
        raise ParameterError("Laplace variable p must be positive")


def indicial_root(nu, s, ctx=_FLOAT):
    """Root gamma = sqrt(s + nu^2/4) - nu/2 of gamma^2 + nu gamma - s = 0,
    formed without cancellation for nu > 0."""
    r = ctx.sqrt(s + nu * nu / 4)
    if nu > 0:
        return s / (r + nu / 2)
    return r - nu / 2


def transform_point(x, p, params: ModelParams) -> TransformPoint:
    _check(params, p)
    nu = params.nu
    s = 2.0 * p / params.sigma2 ** 2
    u = math.asinh(params.sigma2 * abs(x) / params.sigma1)
    return TransformPoint(p=p, s=s, gamma=indicial_root(nu, s), w=math.exp(-u), u=u,
                          legendre_L=nu / 2.0, legendre_M2=s + nu * nu / 4.0)


def _log_cosh(u, ctx):
    return u + ctx.log1p(ctx.exp(-2 * u)) - ctx.log2


def _coords(x, p, params, ctx):
    c = ctx.convert
    s1, s2, nu = c(params.sigma1), c(params.sigma2), c(params.nu)
    s = 2 * c(p) / (s2 * s2)
    u = ctx.asinh(s2 * abs(c(x)) / s1)
    return s1, s2, nu, s, indicial_root(nu, s, ctx), u


def _hyp_form(x, p, params, ctx):
    s1, s2, nu, s, g, u = _coords(x, p, params, ctx)
    if nu == 0:
        # w^gamma / (gamma sigma2 sqrt(sigma1^2 + sigma2^2 x^2))
        return ctx.exp(-g * u - ctx.log(g * s2) - ctx.log(s1) - _log_cosh(u, ctx))
    c = g + nu / 2 + 1
    log_pref = (nu * ctx.log(s1) + (g - 1) * ctx.log2 - g * u
                + ctx.lgamma(g / 2) + ctx.lgamma((g + nu + 1) / 2)
                - ctx.log_pi / 2 - ctx.log(s2) - ctx.lgamma(c)
                - (nu + 1) * (ctx.log(s1) + _log_cosh(u, ctx)))
    w2 = ctx.exp(-2 * u)
    return ctx.exp(log_pref) * hyp2f1(g, -nu / 2, c, -w2)


def _negative_form(x, p, params, ctx):
    s1, s2, nu, s, g, u = _coords(x, p, params, ctx)
    c = g + nu / 2 + 1
    log_pref = ((g + nu) * ctx.log2 - (g + nu + 1) * u
                + ctx.lgamma(g / 2) + ctx.lgamma((g + nu + 1) / 2)
                - ctx.log_pi / 2 - ctx.log(s1) - ctx.log(s2) - ctx.lgamma(c))
    w2 = ctx.exp(-2 * u)
    return ctx.exp(log_pref) * hyp2f1(nu / 2 + 1, g + nu + 1, c, -w2)


def transform_density(x, p, params: ModelParams, extended=False):
    """Laplace transform f~(x, p) of the density (even in x).

    Negative nu is routed through ``transform_density_negative_nu``.  With
    `extended` the evaluation runs in the current mpmath precision and
    returns an ``mpf``.
    """
    _check(params, p)
    ctx = _mp_ctx() if extended else _FLOAT
    if params.nu < 0:
        return _negative_form(x, p, params, ctx)
    return _hyp_form(x, p, params, ctx)


def transform_density_negative_nu(x, p, params: ModelParams, extended=False):
    """Transform in the representation adapted to nu < 0:

    2^(gamma+nu) w^(gamma+nu+1) G(gamma/2) G((gamma+nu+1)/2)
    / (sqrt(pi) sigma1 sigma2 G(gamma+nu/2+1))
    * 2F1(nu/2+1, gamma+nu+1; gamma+nu/2+1; -w^2).

    Valid for any nu; it agrees with the hypergeometric form through the
    Euler transformation.
    """
    _check(params, p)
    return _negative_form(x, p, params, _mp_ctx() if extended else _FLOAT)


def transform_density_legendre(x, p, params: ModelParams):
    """Transform through the Ferrers function P_{nu/2}^{-nu/2-gamma}:

    2^(gamma-1+nu/2) / (sqrt(pi) sigma1 sigma2) G(gamma/2) G((gamma+nu+1)/2)
    (cosh u)^(-(nu/2+1)) P_{nu/2}^{-nu/2-gamma}(|tanh u|).
    """
    _check(params, p)
    tp = transform_point(x, p, params)
    nu, g, u = params.nu, tp.gamma, tp.u
    log_pref = ((g - 1 + nu / 2) * _LN2 + math.lgamma(g / 2)
                + math.lgamma((g + nu + 1) / 2) - 0.5 * math.log(math.pi)
                - math.log(params.sigma1 * params.sigma2)
                - (nu / 2 + 1) * _log_cosh(u, _FLOAT))
    return math.exp(log_pref) * assoc_legendre(nu / 2, -nu / 2 - g, math.tanh(u))


def series_recurrence_coeffs(nu, gamma, k_max):
    """Coefficients a_0..a_{k_max} of the power series in w, from

    a_{k+2} (k+2)(k+2+2 gamma+nu) = -a_k (k-nu)(k+2 gamma),  a_0=1, a_1=0.

    For even integer nu >= 0 the series terminates after a_nu.
    """
    if not 0 <= k_max <= 200:
        raise ParameterError("k_max must lie in 0..200")
    a = [0.0] * (k_max + 1)
    a[0] = 1.0
    for k in range(0, k_max - 1):
        den = (k + 2) * (k + 2 + 2 * gamma + nu)
        if den == 0:
            raise ParameterError("degenerate recurrence: vanishing denominator")
        a[k + 2] = -a[k] * (k - nu) * (k + 2 * gamma) / den
    return a


def transform_density_series(x, p, params: ModelParams, k_max=200):
    """Transform with the hypergeometric factor replaced by the raw power
    series sum_k a_k w^k (w < 1 needed unless the series terminates)."""
    _check(params, p)
    tp = transform_point(x, p, params)
    nu, g, u = params.nu, tp.gamma, tp.u
    s1, s2 = params.sigma1, params.sigma2
    acc = 0.0
    wk = 1.0
    for a in series_recurrence_coeffs(nu, g, k_max):
        acc += a * wk
        wk *= tp.w
    log_pref = (nu * math.log(s1) + (g - 1) * _LN2 - g * u
                + math.lgamma(g / 2) + math.lgamma((g + nu + 1) / 2)
                - 0.5 * math.log(math.pi) - math.log(s2) - math.lgamma(g + nu / 2 + 1)
                - (nu + 1) * (math.log(s1) + _log_cosh(u, _FLOAT)))
    return math.exp(log_pref) * acc


def omega_normalizer(nu, gamma):
    """Omega(nu, gamma) = 2^(1-gamma) sqrt(pi) G(gamma+nu/2+1)
    / (G(gamma/2) G((gamma+nu+1)/2)), the w-derivative at w=1 of
    w^gamma 2F1(gamma, -nu/2; gamma+nu/2+1; -w^2)."""
    if not gamma > 0:
        raise ParameterError("gamma must be positive")
    args = (gamma + nu / 2 + 1, gamma / 2, (gamma + nu + 1) / 2)
    for v in args:
        if v <= 0 and v == int(v):
            raise ParameterError("Gamma pole in Omega")
    sgn = 1.0
    for v in args:
        if v < 0 and math.floor(v) % 2 == 1:
            sgn = -sgn
    return sgn * math.exp((1 - gamma) * _LN2 + 0.5 * math.log(math.pi)
                          + math.lgamma(args[0]) - math.lgamma(args[1])
                          - math.lgamma(args[2]))


def closed_transform(x, p, params: ModelParams):
    """Elementary transform for nu in {0, 2, 4, -2, -4, -6}.

    Accepts complex p (used by the Talbot inversion).
    """
    if params.mu1 != 0.0 or params.rho != 0.0 or params.sigma2 <= 0.0:
        raise ParameterError("transform available only for mu1 = 0 = rho, sigma2 > 0")
    nu = _closed_nu(params.nu)
    s1, s2 = params.sigma1, params.sigma2
    s = 2.0 * p / s2 ** 2
    u = math.asinh(s2 * abs(x) / s1)
    D = s1 * s1 + s2 * s2 * x * x

    def wp(e):
        return cmath.exp(-e * u)

    if nu == 0:
        g = cmath.sqrt(s)
        return wp(g) / (g * s2 * math.sqrt(D))
    if nu == 2:
        g = cmath.sqrt(s + 1) - 1
        return s1 ** 2 / (2 * s2 * D ** 1.5) * (wp(g) / g + wp(g + 2) / (g + 2))
    if nu == 4:
        g = cmath.sqrt(s + 4) - 2
        return s1 ** 4 / (4 * s2 * D ** 2.5) * (
            (3 + g) * wp(g) / (g * (2 + g)) + 2 * wp(g + 2) / (g + 2)
            + (g + 1) * wp(g + 4) / ((g + 2) * (g + 4)))
    if nu == -2:
        r = cmath.sqrt(s + 1)
        return wp(r) / (s1 * s2 * r)
    if nu == -4:
        g = cmath.sqrt(s + 4) + 2
        return (wp(g - 1) / (g - 1) + wp(g - 3) / (g - 3)) / (2 * s1 * s2)
    if nu == -6:
        g = cmath.sqrt(s + 9) + 3
        return ((g - 2) * wp(g - 5) / ((g - 5) * (g - 3)) + 2 * wp(g - 3) / (g - 3)
                + (g - 4) * wp(g - 1) / ((g - 3) * (g - 1))) / (4 * s1 * s2)
    raise ParameterError(f"no closed transform for nu={params.nu}")


def stehfest_weights(order):
    """Exact Gaver-Stehfest weights V_1..V_order (order even) as Fractions."""
    if order < 2 or order % 2:
        raise ParameterError("Gaver-Stehfest order must be even and >= 2")
    half = order // 2
    f = math.factorial
    out = []
    for k in range(1, order + 1):
        acc = 0
        for j in range((k + 1) // 2, min(k, half) + 1):
            acc += Fraction(j ** half * f(2 * j),
                            f(half - j) * f(j) * f(j - 1) * f(k - j) * f(2 * j - k))
        out.append((-1) ** (k + half) * acc)
    return out


def _gs_digits(order):
    # enough digits to absorb the cancellation of the alternating weights
    return max(30, int(1.1 * order) + 20)


def gaver_stehfest(F, t, order=32):
    """Invert a transform F (called with mpmath numbers) at time t."""
    if not t > 0:
        raise ParameterError("t must be positive")
    weights = stehfest_weights(order)
    with mpmath.workdps(_gs_digits(order)):
        a = mpmath.log(2) / mpmath.mpf(t)
        acc = mpmath.mpf(0)
        for k, v in enumerate(weights, start=1):
            acc += mpmath.mpf(v.numerator) / v.denominator * F(k * a)
        return float(a * acc)


def talbot(F, t, n=24):
    """Fixed Talbot inversion of a transform F accepting complex p."""
    if not t > 0:
        raise ParameterError("t must be positive")
    r = 2.0 * n / (5.0 * t)
    acc = 0.5 * (F(r) * cmath.exp(r * t)).real
    for k in range(1, n):
        th = k * math.pi / n
        cot = math.cos(th) / math.sin(th)
        p = r * th * complex(cot, 1.0)
        sig = th + (th * cot - 1.0) * cot
        acc += (cmath.exp(p * t) * F(p) * complex(1.0, sig)).real
    return r / n * acc


def invert_transform(x, t, params: ModelParams,
                     method=InversionMethod.GaverStehfest, order=32, check=True):
    """Time-domain density f(x, t) by numerical Laplace inversion.

    Gaver-Stehfest evaluates the hypergeometric transform at real nodes in
    extended precision; when `check` is set the result is compared with
    order-2 and a ConvergenceError raised if they disagree by more than
    1e-3 relative (and 1e-9 absolute).  TalbotFixed is available for the
    closed-form cases only.  Values down to -1e-8 are clipped to 0.
    """
    method = InversionMethod(method)
    _check(params, 1.0)
    if method is InversionMethod.TalbotFixed:
        if _closed_nu(params.nu) is None:
            raise ParameterError("Talbot inversion needs nu in {0, +-2, +-4, -6}")
        val = talbot(lambda p: closed_transform(x, p, params), t, order)
    else:
        def F(p):
            return transform_density(x, p, params, extended=True)
        val = gaver_stehfest(F, t, order)
        if check:
            alt = gaver_stehfest(F, t, order - 2)
            if abs(val - alt) > max(1e-3 * abs(val), 1e-9):
                raise ConvergenceError(
                    f"Gaver-Stehfest not converged at x={x}, t={t}: "
                    f"order {order} gives {val:.6g}, order {order - 2} gives {alt:.6g}")
    if val < -1e-8:
        raise ConvergenceError(f"inverted density negative ({val:.3g}) at x={x}, t={t}")
    return max(val, 0.0)
