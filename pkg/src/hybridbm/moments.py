"""Moment dynamics e_n(t) = E[X_t^n] of the hybrid SDE.

The moments obey a lower-triangular linear system

    de_n/dt = -(mu2 n - n(n-1) sigma2^2 / 2) e_n
              + (mu1 n + n(n-1) rho sigma1 sigma2) e_{n-1}
              + n(n-1) sigma1^2 / 2 e_{n-2},

with e_0 = 1.  A moment of order n diverges exponentially once
nu < n - 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .model import ModelParams, ParameterError

MAX_ORDER = 12


@dataclass(frozen=True)
class MomentVector:
    order: int
    values: tuple
    t: float
    params: ModelParams

    @property
    def mean(self):
        return self.values[1]

    @property
    def variance(self):
        return self.values[2] - self.values[1] ** 2


def moment_generator(params: ModelParams, order):
    """Matrix A with de/dt = A e for e = (e_0, ..., e_order)."""
    p = params
    A = np.zeros((order + 1, order + 1))
    for n in range(1, order + 1):
        A[n, n] = -(p.mu2 * n - 0.5 * n * (n - 1) * p.sigma2 ** 2)
        A[n, n - 1] = p.mu1 * n + n * (n - 1) * p.rho * p.sigma1 * p.sigma2
        if n >= 2:
            A[n, n - 2] = 0.5 * n * (n - 1) * p.sigma1 ** 2
    return A


def moment_odes_solve(params: ModelParams, order, t_grid, x0=0.0):
    """Solve the moment system on `t_grid` (starting at 0).

    The system is linear with constant coefficients, so the solution is
    e(t) = expm(A t) e(0) evaluated independently at each grid time.
    """
    if not 1 <= order <= MAX_ORDER:
        raise ParameterError(f"order must lie in 1..{MAX_ORDER}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or t_grid[0] != 0.0 or np.any(np.diff(t_grid) < 0):
        raise ParameterError("t_grid must be sorted and start at 0")
    A = moment_generator(params, order)
    e0 = np.array([x0 ** n for n in range(order + 1)], dtype=float)
    out = []
    for t in t_grid:
        e = expm(A * t) @ e0 if t > 0 else e0.copy()
        e[0] = 1.0
        out.append(MomentVector(order, tuple(float(v) for v in e), float(t), params))
    return out


def mean_closed_form(params: ModelParams, t, x0=0.0):
    """e_1(t) = x0 e^{-mu2 t} + (mu1/mu2)(1 - e^{-mu2 t})."""
    m2 = params.mu2
    if m2 == 0.0:
        return x0 + params.mu1 * t
    return x0 * math.exp(-m2 * t) - params.mu1 * math.expm1(-m2 * t) / m2


def _require_symmetric(params):
    if params.rho != 0.0 or params.mu1 != 0.0:
        raise ParameterError("closed form valid only for rho=0=mu1")
    if params.sigma2 <= 0.0:
        raise ParameterError("closed form needs sigma2 > 0")


def _kappa(params):
    # sigma2^2 (nu - 2)
    return 2.0 * params.mu2 - params.sigma2 ** 2


def variance_closed_form(params: ModelParams, t):
    """V(X_t) = sigma1^2 / kappa (1 - e^{-kappa t}), kappa = sigma2^2 (nu - 2).

    Near the nu = 2 boundary (|kappa t| < 1e-8) the second-order Taylor
    form sigma1^2 t (1 - kappa t / 2) is used.
    """
    _require_symmetric(params)
    kt = _kappa(params) * t
    s1sq = params.sigma1 ** 2
    if abs(kt) < 1e-8:
        return s1sq * t * (1.0 - 0.5 * kt)
    return -s1sq * t * math.expm1(-kt) / kt


def explosion_factor_from_alpha_t(alpha_t):
    """V_E = (e^{alpha t} - 1) / (alpha t), equal to 1 at alpha t = 0."""
    if alpha_t == 0.0:
        return 1.0
    return math.expm1(alpha_t) / alpha_t


def variance_explosion_factor(params: ModelParams, t):
    """V(X_t) / (sigma1^2 t); the limit 1 at t = 0.

    Uses the closed form when rho = 0 = mu1 and sigma2 > 0, otherwise the
    moment system.
    """
    if t == 0:
        return 1.0
    if params.rho == 0.0 and params.mu1 == 0.0 and params.sigma2 > 0.0:
        return explosion_factor_from_alpha_t(-_kappa(params) * t)
    mv = moment_odes_solve(params, 2, [0.0, t])[-1]
    return mv.variance / (params.sigma1 ** 2 * t)


def sigma_event_equivalent(k, params: ModelParams = None, t=None, *, ve=None):
    """Size in true standard deviations of a `k`-sigma move measured
    against the naive variance sigma1^2 t: k / sqrt(V_E)."""
    if ve is None:
        ve = variance_explosion_factor(params, t)
    if not ve > 0:
        raise ParameterError("explosion factor must be positive")
    return k / math.sqrt(ve)
