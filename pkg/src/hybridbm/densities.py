"""Time-dependent and equilibrium densities of the hybrid model.

Closed forms exist for the Gaussian (sigma2 = 0), nu = 0, nu = 2
("chameleon") and nu = -2 (bimodal) cases; the equilibrium laws are the
scaled Student-t (symmetric case) and Pearson type IV (general case).
Other nu use ``laplace.invert_transform``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import special as sp
from scipy.integrate import trapezoid

from . import laplace
from .model import ModelParams, ParameterError
from .special import gamma_abs_complex, student_cdf

_NU_TOL = 1e-12


class Family(enum.Enum):
    Gaussian = "gaussian"
    Nu0 = "nu0"
    Chameleon = "chameleon"
    BimodalNuMinus2 = "bimodal"
    Student = "student"
    PearsonIV = "pearson4"
    TransformInverted = "transform"


@dataclass
class DensityCurve:
    x_grid: np.ndarray
    f_values: np.ndarray
    t: Union[float, str]
    family: Family
    scale: Optional[float] = None
    nu: Optional[float] = None

    def mass(self):
        return float(trapezoid(self.f_values, self.x_grid))


def _symmetric(params, nu, name):
    if params.mu1 != 0.0 or params.rho != 0.0:
        raise ParameterError(f"{name} requires mu1 = 0 = rho")
    if params.sigma2 <= 0.0 or abs(params.nu - nu) > _NU_TOL:
        raise ParameterError(f"{name} requires nu = {nu:g}")


def _positive_t(t):
    if not t > 0:
        raise ParameterError("t must be positive")


def gaussian_density(x, t, params: ModelParams):
    """Arithmetic Brownian motion density N(mu1 t, sigma1^2 t).

    Only mu1 and sigma1 are used (the sigma2 = 0, mu2 = 0 submodel).
    """
    _positive_t(t)
    x = np.asarray(x, dtype=float)
    var = params.sigma1 ** 2 * t
    return np.exp(-(x - params.mu1 * t) ** 2 / (2.0 * var)) / np.sqrt(2.0 * math.pi * var)


def _u(x, params):
    return np.arcsinh(params.sigma2 * np.asarray(x, dtype=float) / params.sigma1)


def nu0_density(x, t, params: ModelParams):
    """exp(-u^2 / (2 sigma2^2 t)) / sqrt(2 pi t (sigma1^2 + sigma2^2 x^2))."""
    _symmetric(params, 0.0, "nu0_density")
    _positive_t(t)
    x = np.asarray(x, dtype=float)
    u = _u(x, params)
    d = params.sigma1 ** 2 + params.sigma2 ** 2 * x * x
    return np.exp(-u * u / (2.0 * params.sigma2 ** 2 * t)) / np.sqrt(2.0 * math.pi * t * d)


def _phi_band(a, b):
    """Phi(a) - Phi(b) for a >= b, using survival functions in the tail."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    upper = 0.5 * sp.erfc(b / math.sqrt(2.0)) - 0.5 * sp.erfc(a / math.sqrt(2.0))
    lower = 0.5 * sp.erfc(-a / math.sqrt(2.0)) - 0.5 * sp.erfc(-b / math.sqrt(2.0))
    return np.where(b > 0, upper, lower)


def chameleon_density(x, t, params: ModelParams):
    """nu = 2 density: a decaying Gaussian-like core plus a Student-2 part.

    sigma1 exp(-u^2/(2 tau) - tau/2) / (sqrt(2 pi t) D)
    + sigma2 sigma1^2 / (2 D^(3/2)) [Phi((|u|+tau)/sqrt(tau)) - Phi((|u|-tau)/sqrt(tau))]

    with tau = sigma2^2 t and D = sigma1^2 + sigma2^2 x^2.
    """
    _symmetric(params, 2.0, "chameleon_density")
    _positive_t(t)
    x = np.asarray(x, dtype=float)
    s1, s2 = params.sigma1, params.sigma2
    tau = s2 * s2 * t
    au = np.abs(_u(x, params))
    d = s1 * s1 + s2 * s2 * x * x
    core = s1 * np.exp(-au * au / (2.0 * tau) - 0.5 * tau) / (math.sqrt(2.0 * math.pi * t) * d)
    rt = math.sqrt(tau)
    band = _phi_band((au + tau) / rt, (au - tau) / rt)
    return core + s2 * s1 * s1 / (2.0 * d ** 1.5) * band


def chameleon_limit(x, params: ModelParams):
    """Large-t limit sigma2 sigma1^2 / (2 (sigma1^2 + sigma2^2 x^2)^(3/2))."""
    x = np.asarray(x, dtype=float)
    s1, s2 = params.sigma1, params.sigma2
    return s2 * s1 * s1 / (2.0 * (s1 * s1 + s2 * s2 * x * x) ** 1.5)


def bimodal_density_u(u, tau):
    """Density of u at nu = -2: (1/2)[N(u; tau, tau) + N(u; -tau, tau)]."""
    _positive_t(tau)
    u = np.asarray(u, dtype=float)
    n = math.sqrt(2.0 * math.pi * tau)
    return 0.5 * (np.exp(-(u - tau) ** 2 / (2 * tau)) + np.exp(-(u + tau) ** 2 / (2 * tau))) / n


def bimodal_density_numinus2(x, t, params: ModelParams):
    """x-space density at nu = -2: exp(-tau/2 - u^2/(2 tau)) / (sigma1 sqrt(2 pi t))."""
    _symmetric(params, -2.0, "bimodal_density_numinus2")
    _positive_t(t)
    tau = params.sigma2 ** 2 * t
    u = _u(x, params)
    return np.exp(-0.5 * tau - u * u / (2.0 * tau)) / (params.sigma1 * math.sqrt(2.0 * math.pi * t))


def student_scale(params: ModelParams):
    """Equilibrium Student scale sigma1 / sqrt(sigma2^2 + 2 mu2)."""
    return params.sigma1 / math.sqrt(params.sigma2 ** 2 + 2.0 * params.mu2)


def _require_student(params):
    if params.mu1 != 0.0 or params.rho != 0.0:
        raise ParameterError("Student equilibrium requires mu1 = 0 = rho")
    if params.mu2 <= 0.0:
        raise ParameterError("no normalizable Student equilibrium")


def student_equilibrium_density(x, params: ModelParams):
    """Scaled Student-t with nu degrees of freedom and scale
    sigma1 / sqrt(sigma2^2 + 2 mu2)."""
    _require_student(params)
    nu = params.nu
    c = student_scale(params)
    y = np.asarray(x, dtype=float) / c
    log_k = math.lgamma((nu + 1) / 2) - math.lgamma(nu / 2) - 0.5 * math.log(nu * math.pi)
    return np.exp(log_k - (nu + 1) / 2 * np.log1p(y * y / nu)) / c


def student_equilibrium(params: ModelParams, x_grid=None) -> DensityCurve:
    """Equilibrium Student curve with its scale and degrees of freedom."""
    _require_student(params)
    c = student_scale(params)
    if x_grid is None:
        x_grid = np.linspace(-10 * c, 10 * c, 2001)
    x_grid = np.asarray(x_grid, dtype=float)
    return DensityCurve(x_grid, student_equilibrium_density(x_grid, params),
                        "equilibrium", Family.Student, scale=c, nu=params.nu)


@dataclass(frozen=True)
class PearsonIVParams:
    a: float
    lam: float
    m: float
    nu: float
    nu2: float
    k: float


@dataclass(frozen=True)
class PearsonIVMoments:
    """Moments; None where the moment does not exist."""

    mean: Optional[float]
    variance: Optional[float]
    skewness: Optional[float]
    excess_kurtosis: Optional[float]


def pearson4_from_shape(a, lam, nu, nu2) -> PearsonIVParams:
    """Pearson IV parameters with the normalization k filled in:

    k = G((nu+1)/2) / (a sqrt(pi) G(nu/2)) |G((nu+1+i nu2)/2) / G((nu+1)/2)|^2.
    """
    if not a > 0:
        raise ParameterError("Pearson IV scale must be positive")
    if not nu > 0:
        raise ParameterError("Pearson IV needs nu > 0 for normalizability")
    h = (nu + 1) / 2
    log_ratio = math.log(gamma_abs_complex(h, nu2 / 2)) - math.lgamma(h)
    k = math.exp(math.lgamma(h) - math.lgamma(nu / 2) + 2 * log_ratio) / (a * math.sqrt(math.pi))
    return PearsonIVParams(a=a, lam=lam, m=h, nu=nu, nu2=nu2, k=k)


def pearson4_params(params: ModelParams) -> PearsonIVParams:
    """Equilibrium Pearson IV law of the SDE.

    a = (sigma1/sigma2) sqrt(1-rho^2), lambda = -rho sigma1/sigma2,
    nu = 1 + 2 mu2/sigma2^2 and
    nu2 = -2 (mu1 sigma2 + rho sigma1 mu2) / (sigma1 sigma2^2 sqrt(1-rho^2)),
    the sign making the density the stationary law (mean mu1/mu2).
    """
    if abs(params.rho) >= 1.0:
        raise ParameterError("|rho| = 1 gives a degenerate Pearson IV scale")
    s1, s2, r = params.sigma1, params._require_sigma2(), params.rho
    root = math.sqrt(1.0 - r * r)
    nu2 = -2.0 * (params.mu1 * s2 + r * s1 * params.mu2) / (s1 * s2 * s2 * root)
    return pearson4_from_shape(s1 / s2 * root, -r * s1 / s2, params.nu, nu2)


def pearson4_density(x, p4: PearsonIVParams):
    """k [1 + ((x-lambda)/a)^2]^(-(nu+1)/2) exp(-nu2 atan((x-lambda)/a))."""
    y = (np.asarray(x, dtype=float) - p4.lam) / p4.a
    return p4.k * np.exp(-(p4.nu + 1) / 2 * np.log1p(y * y) - p4.nu2 * np.arctan(y))


def pearson4_moments(p4: PearsonIVParams) -> PearsonIVMoments:
    nu, n2, a = p4.nu, p4.nu2, p4.a
    q = (nu - 1) ** 2 + n2 * n2
    mean = p4.lam - a * n2 / (nu - 1) if nu > 1 else None
    var = a * a * q / ((nu - 1) ** 2 * (nu - 2)) if nu > 2 else None
    skew = -4 * n2 / (nu - 3) * math.sqrt((nu - 2) / q) if nu > 3 else None
    kurt = None
    if nu > 4:
        kurt = (6 * (nu - 3) * (nu - 1) ** 2 + 6 * (5 * nu - 11) * n2 * n2) / (
            (nu - 4) * (nu - 3) * q)
    return PearsonIVMoments(mean, var, skew, kurt)


# ---- CDFs -------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def cumulative_integral(g, z, h_max):
    """int_0^{z_i} g for each z_i >= 0, by 10-point Gauss-Legendre on a
    mesh containing the sorted z values and spaced at most `h_max`."""
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        return z.copy()
    zmax = float(z.max())
    mesh = np.union1d(np.linspace(0.0, zmax, max(2, int(math.ceil(zmax / h_max)) + 1)), z)
    lo, hi = mesh[:-1], mesh[1:]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_X[None, :]
    pieces = (g(nodes) * _GL_W[None, :]).sum(axis=1) * half
    cum = np.concatenate([[0.0], np.cumsum(pieces)])
    return cum[np.searchsorted(mesh, z)]


def _chameleon_u_density(u, tau):
    au = np.abs(u)
    rt = math.sqrt(tau)
    core = np.exp(-au * au / (2 * tau) - 0.5 * tau) / (math.sqrt(2 * math.pi * tau) * np.cosh(au))
    return core + _phi_band((au + tau) / rt, (au - tau) / rt) / (2.0 * np.cosh(au) ** 2)


def _symmetric_cdf(u, half_mass):
    return np.where(u >= 0, 0.5 + half_mass, 0.5 - half_mass)


def density_cdf(family, x, t=None, params: ModelParams = None, curve: DensityCurve = None):
    """CDF of a density family at `x` (scalar or array).

    Closed forms for the Gaussian, nu = 0, bimodal and Student families;
    composite Gauss-Legendre quadrature in u = asinh(sigma2 x / sigma1)
    for the chameleon and in atan space for Pearson IV.  For
    ``TransformInverted`` pass the evaluated `curve` (cumulative trapezoid).
    """
    family = Family(family)
    xa = np.asarray(x, dtype=float)
    if family is Family.Gaussian:
        _positive_t(t)
        z = (xa - params.mu1 * t) / (params.sigma1 * math.sqrt(t))
        out = 0.5 * sp.erfc(-z / math.sqrt(2.0))
    elif family is Family.Nu0:
        _symmetric(params, 0.0, "nu0 CDF")
        _positive_t(t)
        z = _u(xa, params) / (params.sigma2 * math.sqrt(t))
        out = 0.5 * sp.erfc(-z / math.sqrt(2.0))
    elif family is Family.BimodalNuMinus2:
        _symmetric(params, -2.0, "bimodal CDF")
        _positive_t(t)
        tau = params.sigma2 ** 2 * t
        u = _u(xa, params)
        rt = math.sqrt(2.0 * tau)
        out = 0.25 * (sp.erfc(-(u - tau) / rt) + sp.erfc(-(u + tau) / rt))
    elif family is Family.Chameleon:
        _symmetric(params, 2.0, "chameleon CDF")
        _positive_t(t)
        tau = params.sigma2 ** 2 * t
        u = _u(xa, params).ravel()
        half = cumulative_integral(lambda v: _chameleon_u_density(v, tau), np.abs(u),
                                   0.1 * min(1.0, math.sqrt(tau)))
        out = _symmetric_cdf(u, half).reshape(xa.shape)
    elif family is Family.Student:
        _require_student(params)
        c = student_scale(params)
        out = np.vectorize(lambda v: student_cdf(v / c, params.nu))(xa)
    elif family is Family.PearsonIV:
        p4 = pearson4_params(params)
        th = np.arctan((xa.ravel() - p4.lam) / p4.a) + 0.5 * math.pi

        def g(v):
            th_ = v - 0.5 * math.pi
            return p4.k * p4.a * np.cos(th_) ** (p4.nu - 1) * np.exp(-p4.nu2 * th_)

        out = cumulative_integral(g, th, 0.02).reshape(xa.shape)
    else:
        if curve is None:
            raise ParameterError("transform-inverted CDF needs an evaluated curve")
        f = np.asarray(curve.f_values)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(curve.x_grid))])
        out = np.interp(xa, curve.x_grid, cum / cum[-1])
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def family_for(params: ModelParams) -> Family:
    """Closed-form family matching `params` (transform inversion otherwise)."""
    if params.sigma2 == 0.0:
        return Family.Gaussian
    if params.mu1 != 0.0 or params.rho != 0.0:
        raise ParameterError("time-dependent densities need mu1 = 0 = rho")
    nu = params.nu
    for fam, v in ((Family.Nu0, 0.0), (Family.Chameleon, 2.0), (Family.BimodalNuMinus2, -2.0)):
        if abs(nu - v) <= _NU_TOL:
            return fam
    return Family.TransformInverted


def evaluate_density(family, x, t, params: ModelParams, **inversion):
    """Evaluate a family on `x` (array) at time `t` (or equilibrium)."""
    family = Family(family)
    x = np.asarray(x, dtype=float)
    if family is Family.Gaussian:
        return gaussian_density(x, t, params)
    if family is Family.Nu0:
        return nu0_density(x, t, params)
    if family is Family.Chameleon:
        return chameleon_density(x, t, params)
    if family is Family.BimodalNuMinus2:
        return bimodal_density_numinus2(x, t, params)
    if family is Family.Student:
        return student_equilibrium_density(x, params)
    if family is Family.PearsonIV:
        return pearson4_density(x, pearson4_params(params))
    return np.array([laplace.invert_transform(v, t, params, **inversion) for v in x.ravel()]
                    ).reshape(x.shape)


def density_curve(family, x_grid, t, params: ModelParams, **inversion) -> DensityCurve:
    family = Family(family)
    x_grid = np.asarray(x_grid, dtype=float)
    f = evaluate_density(family, x_grid, t, params, **inversion)
    t_val = "equilibrium" if family in (Family.Student, Family.PearsonIV) else t
    return DensityCurve(x_grid, f, t_val, family)
