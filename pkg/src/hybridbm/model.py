"""Model parameters, derived quantities and coordinate maps.

The hybrid SDE is

    dX = (mu1 - mu2 X) dt + sigma1 dW1 + sigma2 X dW2,   corr(W1, W2) = rho

with X0 = 0.  Its single-noise form has diffusion
sqrt(sigma1^2 + sigma2^2 X^2 + 2 rho sigma1 sigma2 X).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised when parameters fall outside an operation's domain."""


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the hybrid arithmetic-geometric SDE.

    Parameters
    ----------
    mu1 : float
        Fundamental drift (per unit time).
    mu2 : float
        Technical mean-reversion rate (per unit time). Negative values
        describe momentum-dominated markets.
    sigma1 : float
        Fundamental (additive) volatility, > 0.
    sigma2 : float
        Technical (multiplicative) volatility, >= 0.  Zero gives the
        arithmetic OU / Gaussian submodel.
    rho : float
        Correlation between the two Brownian motions.
    """

    mu1: float = 0.0
    mu2: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        for name in ("mu1", "mu2", "sigma1", "sigma2", "rho"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.sigma1 <= 0:
            raise ParameterError("sigma1 must be positive")
        if self.sigma2 < 0:
            raise ParameterError("sigma2 must be non-negative")
        if not -1.0 <= self.rho <= 1.0:
            raise ParameterError("rho must lie in [-1, 1]")

    @classmethod
    def from_nu(cls, nu, sigma1=1.0, sigma2=1.0, mu1=0.0, rho=0.0):
        """Build parameters with mu2 chosen so that derive_nu gives `nu`."""
        if sigma2 <= 0:
            raise ParameterError("nu undefined; pure arithmetic case")
        return cls(mu1=mu1, mu2=0.5 * (nu - 1.0) * sigma2 ** 2,
                   sigma1=sigma1, sigma2=sigma2, rho=rho)

    @property
    def nu(self) -> float:
        return derive_nu(self)

    @property
    def m(self) -> float:
        """Pearson exponent m = (nu + 1) / 2."""
        return 1.0 + self.mu2 / self._require_sigma2() ** 2

    @property
    def symmetric(self) -> bool:
        return self.mu1 == 0.0 and self.rho == 0.0

    def _require_sigma2(self):
        if self.sigma2 == 0.0:
            raise ParameterError("nu undefined; pure arithmetic case")
        return self.sigma2

    def diffusion(self, x):
        """Squared single-noise diffusion coefficient at `x`."""
        s1, s2 = self.sigma1, self.sigma2
        return s1 * s1 + s2 * s2 * x * x + 2.0 * self.rho * s1 * s2 * x

    def drift(self, x):
        return self.mu1 - self.mu2 * x


def derive_nu(params: ModelParams) -> float:
    """Degrees of freedom nu = 1 + 2 mu2 / sigma2^2."""
    s2 = params._require_sigma2()
    return 1.0 + 2.0 * params.mu2 / (s2 * s2)


class Regime(enum.Enum):
    VarianceExplosive = "VarianceExplosive"
    GaussianVarianceBoundary = "GaussianVarianceBoundary"
    VarianceStable = "VarianceStable"


@dataclass(frozen=True)
class MarketState:
    nu: float
    regime: Regime
    momentum_dominated: bool
    timescale: float
    price_scale: float

    def to_dict(self):
        return {
            "nu": self.nu,
            "regime": self.regime.value,
            "momentum_dominated": self.momentum_dominated,
            "timescale": self.timescale,
            "price_scale": self.price_scale,
        }


def classify_market(params: ModelParams) -> MarketState:
    """Classify the market by nu, with sigma2 as time scale and
    sigma2/sigma1 as price scale.

    The nu = 2 boundary uses exact equality on the computed double.
    """
    nu = derive_nu(params)
    if nu < 2.0:
        regime = Regime.VarianceExplosive
    elif nu == 2.0:
        regime = Regime.GaussianVarianceBoundary
    else:
        regime = Regime.VarianceStable
    return MarketState(
        nu=nu,
        regime=regime,
        momentum_dominated=nu < 0.0,
        timescale=params.sigma2,
        price_scale=params.sigma2 / params.sigma1,
    )


@dataclass(frozen=True)
class HyperbolicCoords:
    z: float
    u: float
    tau: float = 0.0


def to_hyperbolic(x, params: ModelParams, t=0.0) -> HyperbolicCoords:
    """Map a return `x` to the hyperbolic OU coordinates.

    u = asinh(sigma2 x / sigma1), z = u / sigma2, tau = sigma2^2 t.
    """
    s2 = params._require_sigma2()
    u = math.asinh(s2 * x / params.sigma1)
    return HyperbolicCoords(z=u / s2, u=u, tau=s2 * s2 * t)


def from_hyperbolic(z, params: ModelParams) -> float:
    s2 = params._require_sigma2()
    return params.sigma1 / s2 * math.sinh(s2 * z)
