"""Monte Carlo simulation of the hybrid SDE.

Four samplers are provided:

* ``simulate_euler``: Euler-Maruyama in x with correlated noises;
* ``simulate_hyperbolic``: Euler on the hyperbolic OU coordinate
  u = asinh(sigma2 x / sigma1) in time tau = sigma2^2 t (symmetric case);
* ``simulate_integrating_factor``: terminal samples from the exact
  integrating-factor recursion;
* ``simulate_conditional_gaussian``: terminal samples drawn as
  N(m, v) given the path of W2 (zero correlation).

Random numbers come from one ``SeedSequence`` child per block of
``BLOCK`` paths, so results depend only on (seed, n_paths) and not on how
work is split.  The hyperbolic scheme is the recommended default for
nu >= 0 because its drift is globally Lipschitz.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .model import ModelParams, ParameterError

BLOCK = 4096
ROWS = 256
EXPLOSION_THRESHOLD = 1e12


class Scheme(enum.Enum):
    Euler = "euler"
    HyperbolicEuler = "hyperbolic"
    IntegratingFactor = "integrating-factor"
    ConditionalGaussian = "conditional-gaussian"


@dataclass
class PathEnsemble:
    """Sampled paths on a time grid.

    ``paths[i, k]`` is path i at ``times[k]``; ``times[0] == 0`` and every
    path starts at 0.  Exploded paths keep their last finite value and
    ``explosion_time[i]`` records when |X| first exceeded the threshold
    (NaN for paths that stayed finite).
    """

    times: np.ndarray
    paths: np.ndarray
    scheme: Scheme
    seed: int
    params: ModelParams
    dt: float
    explosion_time: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.explosion_time is None:
            self.explosion_time = np.full(self.paths.shape[0], np.nan)

    @property
    def exploded(self):
        return ~np.isnan(self.explosion_time)

    @property
    def n_paths(self):
        return self.paths.shape[0]

    def at(self, t):
        """Samples at grid time `t`."""
        k = int(np.searchsorted(self.times, t))
        if k >= len(self.times) or not math.isclose(self.times[k], t, abs_tol=1e-12):
            raise ParameterError(f"t={t} is not on the ensemble grid")
        return self.paths[:, k]


@dataclass(frozen=True)
class ConditionalGaussianState:
    """Per-path conditional mean and variance given W2."""

    m: np.ndarray
    v: np.ndarray


def default_dt(params: ModelParams) -> float:
    return 1e-3 * min(1.0, 1.0 / params.sigma2 ** 2) if params.sigma2 > 0 else 1e-3


def resolve_seed(seed):
    """Return an integer seed, generating one when `seed` is None."""
    if seed is None:
        return int(np.random.SeedSequence().entropy % (2 ** 63))
    return int(seed)


def _blocks(seed, n_paths):
    if n_paths < 1:
        raise ParameterError("n_paths must be >= 1")
    n_blocks = -(-n_paths // BLOCK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    for b, ss in enumerate(children):
        lo = b * BLOCK
        yield lo, min(lo + BLOCK, n_paths), np.random.default_rng(ss)


def _time_grid(times):
    times = np.asarray(times, dtype=float).ravel()
    if times.size == 0 or np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise ParameterError("times must be non-negative and strictly increasing")
    if times[0] != 0.0:
        times = np.concatenate([[0.0], times])
    return times


def _substeps(times, dt):
    if not dt > 0:
        raise ParameterError("dt must be positive")
    gaps = np.diff(times)
    if dt > gaps.min() * (1 + 1e-12):
        raise ParameterError("dt must not exceed the grid spacing")
    return [max(1, int(math.ceil(g / dt - 1e-9))) for g in gaps]


def _chunks(n):
    for r0 in range(0, n, ROWS):
        yield r0, min(n, r0 + ROWS)


def simulate_euler(params: ModelParams, times, n_paths, dt=None, seed=None):
    """Euler-Maruyama on dX = (mu1 - mu2 X)dt + sigma1 dW1 + sigma2 X dW2.

    W2 = rho W1 + sqrt(1 - rho^2) W_perp.  Paths with |X| > 1e12 are
    flagged as exploded with the time of explosion and then frozen.
    """
    p = params
    seed = resolve_seed(seed)
    times = _time_grid(times)
    dt = default_dt(p) if dt is None else dt
    nsub = _substeps(times, dt)
    paths = np.zeros((n_paths, times.size))
    t_exp = np.full(n_paths, np.nan)
    for lo, hi, rng in _blocks(seed, n_paths):
        m = hi - lo
        x = np.zeros(m)
        exploded = np.full(m, -1, dtype=np.int64)
        step = 0
        for k, ns in enumerate(nsub):
            h = (times[k + 1] - times[k]) / ns
            for r0, r1 in _chunks(ns):
                z1 = rng.standard_normal((r1 - r0, m))
                z2 = rng.standard_normal((r1 - r0, m))
                kernels.euler_block(x, z1, z2, p.mu1, p.mu2, p.sigma1, p.sigma2,
                                    p.rho, h, EXPLOSION_THRESHOLD, exploded, step)
                step += r1 - r0
            paths[lo:hi, k + 1] = x
            new = (exploded >= 0) & np.isnan(t_exp[lo:hi])
            if new.any():
                # step index -> time inside the current interval
                first = step - ns
                t_exp[lo:hi][new] = times[k] + (exploded[new] - first) * h
    return PathEnsemble(times, paths, Scheme.Euler, seed, p, dt, t_exp)


def _require_symmetric(params):
    if params.mu1 != 0.0 or params.rho != 0.0:
        raise ParameterError("hyperbolic reduction valid only for symmetric case")
    if params.sigma2 <= 0.0:
        raise ParameterError("hyperbolic reduction needs sigma2 > 0")


def simulate_hyperbolic_u(params: ModelParams, times, n_paths, dt=None, seed=None):
    """Paths of u = asinh(sigma2 X / sigma1), which solves
    du = -(nu/2) tanh(u) dtau + dW_tau with tau = sigma2^2 t."""
    p = params
    _require_symmetric(p)
    seed = resolve_seed(seed)
    times = _time_grid(times)
    dt = default_dt(p) if dt is None else dt
    nsub = _substeps(times, dt)
    half_nu = 0.5 * p.nu
    s2sq = p.sigma2 ** 2
    paths = np.zeros((n_paths, times.size))
    for lo, hi, rng in _blocks(seed, n_paths):
        u = np.zeros(hi - lo)
        for k, ns in enumerate(nsub):
            dtau = s2sq * (times[k + 1] - times[k]) / ns
            for r0, r1 in _chunks(ns):
                z = rng.standard_normal((r1 - r0, hi - lo))
                kernels.hyperbolic_block(u, z, half_nu, dtau)
            paths[lo:hi, k + 1] = u
    return PathEnsemble(times, paths, Scheme.HyperbolicEuler, seed, p, dt)


def simulate_hyperbolic(params: ModelParams, times, n_paths, dt=None, seed=None):
    """Hyperbolic OU scheme mapped back through X = (sigma1/sigma2) sinh(u)."""
    ens = simulate_hyperbolic_u(params, times, n_paths, dt, seed)
    ens.paths = params.sigma1 / params.sigma2 * np.sinh(ens.paths)
    return ens


def simulate_integrating_factor(params: ModelParams, t, n_paths, n_steps=1000, seed=None):
    """Terminal samples X_t from the integrating-factor representation.

    With I_s = exp(-sigma2 W2_s + (mu2 + sigma2^2/2) s), Y = I X solves
    dY = I((mu1 - rho sigma1 sigma2) ds + sigma1 dW1).  Stepping it with
    the left-point rule gives

        X_{n+1} = exp(sigma2 dW2 - (mu2 + sigma2^2/2) ds)
                  (X_n + (mu1 - rho sigma1 sigma2) ds + sigma1 dW1).
    """
    p = params
    if n_steps < 10:
        raise ParameterError("n_steps must be >= 10")
    if not t > 0:
        raise ParameterError("t must be positive")
    seed = resolve_seed(seed)
    ds = t / n_steps
    drift = p.mu1 - p.rho * p.sigma1 * p.sigma2
    k = p.mu2 + 0.5 * p.sigma2 ** 2
    out = np.empty(n_paths)
    for lo, hi, rng in _blocks(seed, n_paths):
        y = np.zeros(hi - lo)
        for r0, r1 in _chunks(n_steps):
            z1 = rng.standard_normal((r1 - r0, hi - lo))
            z2 = rng.standard_normal((r1 - r0, hi - lo))
            kernels.integrating_factor_block(y, z1, z2, drift, p.sigma1,
                                             p.sigma2, p.rho, k, ds)
        out[lo:hi] = y
    return out


def simulate_conditional_gaussian(params: ModelParams, t, n_paths, n_steps=1000,
                                  seed=None, return_state=False):
    """Terminal samples X_t ~ N(m, v) conditional on a path of W2.

    m = mu1 int_0^t E_u du and v = sigma1^2 int_0^t E_u^2 du with
    E_u = exp(sigma2 W2_u - (nu/2) sigma2^2 u), both by the trapezoid rule.
    """
    p = params
    if p.rho != 0.0:
        raise ParameterError("conditional representation requires zero correlation")
    if n_steps < 1 or not t > 0:
        raise ParameterError("need n_steps >= 1 and t > 0")
    seed = resolve_seed(seed)
    du = t / n_steps
    c = p.mu2 + 0.5 * p.sigma2 ** 2
    out = np.empty(n_paths)
    ms = np.empty(n_paths)
    vs = np.empty(n_paths)
    for lo, hi, rng in _blocks(seed, n_paths):
        n = hi - lo
        w = np.zeros(n)
        e_prev = np.ones(n)
        a = np.zeros(n)
        b = np.zeros(n)
        for r0, r1 in _chunks(n_steps):
            z = rng.standard_normal((r1 - r0, n))
            kernels.asian_block(w, e_prev, a, b, z, p.sigma2, c, du, r0)
        ms[lo:hi] = p.mu1 * a
        vs[lo:hi] = p.sigma1 ** 2 * b
        out[lo:hi] = ms[lo:hi] + np.sqrt(vs[lo:hi]) * rng.standard_normal(n)
    if return_state:
        return out, ConditionalGaussianState(ms, vs)
    return out


def terminal_samples(params: ModelParams, scheme: Scheme, t, n_paths, dt=None, seed=None):
    """Samples of X_t from any scheme (helper for comparisons and the CLI)."""
    scheme = Scheme(scheme)
    dt = default_dt(params) if dt is None else dt
    if scheme is Scheme.Euler:
        return simulate_euler(params, [t], n_paths, dt, seed).paths[:, -1]
    if scheme is Scheme.HyperbolicEuler:
        return simulate_hyperbolic(params, [t], n_paths, dt, seed).paths[:, -1]
    n_steps = max(10, int(round(t / dt)))
    if scheme is Scheme.IntegratingFactor:
        return simulate_integrating_factor(params, t, n_paths, n_steps, seed)
    return simulate_conditional_gaussian(params, t, n_paths, n_steps, seed)
