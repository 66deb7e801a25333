"""Pure-Python/numpy kernels; same signatures and arithmetic order as the
compiled versions in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np


def hyp2f1_series(a, b, c, x, tol, max_terms):
    """Sum the Gauss series; returns (sum, terms) with terms = -1 when the
    tolerance was not reached."""
    term = 1.0
    s = 1.0
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        term *= ratio
        s += term
        if term == 0.0:
            return s, k + 1
        r = abs(ratio)
        if r < 1.0 and abs(term) <= tol * abs(s) * (1.0 - r):
            return s, k + 1
    return s, -1


def euler_block(x, z1, z2, mu1, mu2, s1, s2, rho, dt, threshold,
                exploded, step0):
    """Advance Euler-Maruyama paths over the rows of `z1`/`z2`.

    `x` (n_paths,) is updated in place.  Paths whose magnitude exceeds
    `threshold` (or turns non-finite) are frozen and their step index is
    written to `exploded` (which holds -1 for live paths).
    """
    sdt = math.sqrt(dt)
    rc = math.sqrt(1.0 - rho * rho)
    alive = exploded < 0
    for r in range(z1.shape[0]):
        dw1 = sdt * z1[r]
        dw2 = sdt * (rho * z1[r] + rc * z2[r])
        xn = x + (mu1 - mu2 * x) * dt + s1 * dw1 + s2 * x * dw2
        bad = alive & ~(np.abs(xn) <= threshold)
        if bad.any():
            exploded[bad] = step0 + r + 1
            keep = bad & np.isfinite(xn)
            x[keep] = xn[keep]
            alive &= ~bad
        x[alive] = xn[alive]


def hyperbolic_block(u, z, half_nu, dtau):
    """Euler steps of du = -half_nu tanh(u) dtau + dW_tau, in place."""
    sd = math.sqrt(dtau)
    for r in range(z.shape[0]):
        u += -half_nu * np.tanh(u) * dtau + sd * z[r]


def integrating_factor_block(y, z1, z2, drift, s1, s2, rho, k, ds):
    """Exponential-factor recursion y <- exp(s2 dW2 - k ds)(y + drift ds + s1 dW1)."""
    sds = math.sqrt(ds)
    rc = math.sqrt(1.0 - rho * rho)
    for r in range(z1.shape[0]):
        dw1 = sds * z1[r]
        dw2 = sds * (rho * z1[r] + rc * z2[r])
        y[:] = np.exp(s2 * dw2 - k * ds) * (y + drift * ds + s1 * dw1)


def asian_block(w, e_prev, a_sum, b_sum, z, s2, c, du, step0):
    """Trapezoid accumulation of int E du and int E^2 du, E = exp(s2 W - c u)."""
    sd = math.sqrt(du)
    for r in range(z.shape[0]):
        w += sd * z[r]
        e = np.exp(s2 * w - c * ((step0 + r + 1) * du))
        a_sum += 0.5 * (e_prev + e) * du
        b_sum += 0.5 * (e_prev * e_prev + e * e) * du
        e_prev[:] = e
