"""Hybrid arithmetic-geometric Brownian motion model of asset returns.

dX = (mu1 - mu2 X) dt + sigma1 dW1 + sigma2 X dW2 with corr(W1, W2) = rho.
"""
__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .model import (  # noqa: E402
    HyperbolicCoords,
    MarketState,
    ModelParams,
    ParameterError,
    Regime,
    classify_market,
    derive_nu,
    from_hyperbolic,
    to_hyperbolic,
)
from .special import ConvergenceError  # noqa: E402

__all__ = [
    "BACKEND", "ConvergenceError", "HyperbolicCoords", "MarketState", "ModelParams",
    "ParameterError", "Regime", "classify_market", "derive_nu", "from_hyperbolic",
    "to_hyperbolic",
]
