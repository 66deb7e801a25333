"""Value-at-risk and tail-event diagnostics."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import optimize

from . import moments
from .model import ModelParams, ParameterError
from .special import log_normal_sf, normal_cdf, normal_quantile, student4_sf, student_sf


class VarModel(enum.Enum):
    GaussianVar = "gaussian"
    HyperbolicVar = "hyperbolic"
    BimodalExperimental = "bimodal-experimental"


class TailFamily(enum.Enum):
    Gaussian = "gaussian"
    StudentNu = "student"


@dataclass(frozen=True)
class VarRequest:
    u0: float
    t: float
    params: ModelParams
    model: VarModel = VarModel.GaussianVar

    def __post_init__(self):
        if not 0.0 < self.u0 < 1.0:
            raise ParameterError("u0 must lie in (0, 1)")
        if not self.t > 0:
            raise ParameterError("t must be positive")


@dataclass(frozen=True)
class VarResult:
    signed: float

    @property
    def var(self):
        return abs(self.signed)


def gaussian_var(req: VarRequest) -> float:
    """Signed VaR sigma1 sqrt(t) Q(u0) of the arithmetic model."""
    return req.params.sigma1 * math.sqrt(req.t) * normal_quantile(req.u0)


def hyperbolic_var(req: VarRequest) -> float:
    """Signed VaR (sigma1/sigma2) sinh(sigma2 sqrt(t) Q(u0)).

    Exact for the nu = 0 market; tends to ``gaussian_var`` as sigma2 -> 0.
    """
    s2 = req.params.sigma2
    if s2 <= 0.0:
        raise ParameterError("hyperbolic VaR needs sigma2 > 0; use gaussian_var")
    return req.params.sigma1 / s2 * math.sinh(s2 * math.sqrt(req.t) * normal_quantile(req.u0))


def bimodal_var_experimental(req: VarRequest) -> float:
    """Experimental: u0-quantile of the nu = -2 law, where
    u = asinh(sigma2 x / sigma1) is an equal mixture of N(+-tau, tau).

    This is one interpretation of a drift-corrected hyperbolic VaR for
    momentum markets, not an established method.
    """
    p = req.params
    if p.sigma2 <= 0.0 or p.mu1 != 0.0 or p.rho != 0.0 or abs(p.nu + 2.0) > 1e-12:
        raise ParameterError("bimodal VaR needs the symmetric nu = -2 market")
    tau = p.sigma2 ** 2 * req.t
    rt = math.sqrt(tau)

    def cdf(u):
        return 0.5 * (normal_cdf((u - tau) / rt) + normal_cdf((u + tau) / rt)) - req.u0

    span = tau + rt * (abs(normal_quantile(req.u0)) + 1.0)
    u = optimize.brentq(cdf, -span, span, xtol=1e-14, rtol=1e-15)
    return p.sigma1 / p.sigma2 * math.sinh(u)


def value_at_risk(req: VarRequest) -> VarResult:
    model = VarModel(req.model)
    fn = {VarModel.GaussianVar: gaussian_var, VarModel.HyperbolicVar: hyperbolic_var,
          VarModel.BimodalExperimental: bimodal_var_experimental}[model]
    return VarResult(fn(req))


def log_tail_probability(k_sigma, family=TailFamily.Gaussian, nu=None, two_sided=False,
                         standardized=True):
    """Natural log of P(X > k) for a standardized variable.

    The Gaussian tail is evaluated in log space and stays finite far past
    the float underflow of the probability itself.  For the Student family
    with nu > 2 and `standardized` set, X is scaled to unit variance, so
    the threshold in Student units is k sqrt(nu/(nu-2)).  `two_sided`
    gives P(|X| > k).
    """
    family = TailFamily(family)
    if k_sigma < 0:
        raise ParameterError("k_sigma must be non-negative")
    if family is TailFamily.Gaussian:
        lp = log_normal_sf(k_sigma)
    else:
        if nu is None or not nu > 0:
            raise ParameterError("Student tail needs nu > 0")
        x = k_sigma * math.sqrt(nu / (nu - 2.0)) if standardized and nu > 2 else k_sigma
        lp = math.log(student4_sf(x) if nu == 4 else student_sf(x, nu))
    return lp + math.log(2.0) if two_sided else lp


def tail_probability(k_sigma, family=TailFamily.Gaussian, nu=None, two_sided=False,
                     standardized=True):
    """P(X > k) (or P(|X| > k)); see ``log_tail_probability``."""
    return math.exp(log_tail_probability(k_sigma, family, nu, two_sided, standardized))


@dataclass(frozen=True)
class ExplosionRow:
    t: float
    variance: float
    explosion_factor: float
    k_equivalent: float


def explosion_report(params: ModelParams, t_grid, k_sigma=25.0):
    """Variance, explosion factor and the true size of a `k_sigma` move
    at each t (t = 0 rows report V = 0 and V_E = 1)."""
    rows = []
    for t in t_grid:
        v = moments.variance_closed_form(params, t) if t > 0 else 0.0
        ve = moments.variance_explosion_factor(params, t)
        rows.append(ExplosionRow(float(t), v, ve, moments.sigma_event_equivalent(k_sigma, ve=ve)))
    return rows
