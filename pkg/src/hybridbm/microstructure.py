"""Discrete trade-arrival model: fundamental and technical traders with
compound Poisson order flow, and its map to the continuum SDE.

Within a step of length dt, fundamental buy and sell orders arrive as
Poisson streams with rates lambda_buy, lambda_sell.  Technical orders arrive
as one Poisson stream with rate |mu x| and all trade in direction
-sign(mu x).  Each order is N lots of L shares with N drawn from an
order-size family, and the return moves by dx = omega (M_F + M_T).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, ParameterError


class OrderSizeKind(enum.Enum):
    Deterministic = "deterministic"
    Geometric = "geometric"
    PoissonShifted = "poisson-shifted"


@dataclass(frozen=True)
class OrderSize:
    """Distribution of lots per order, parameterized by its mean.

    Deterministic(n) takes the integer value n; Geometric(m) lives on
    {1, 2, ...} with success probability 1/m; PoissonShifted(m) is
    1 + Poisson(m - 1).
    """

    kind: OrderSizeKind = OrderSizeKind.Deterministic
    mean: float = 1.0

    def __post_init__(self):
        if self.kind is OrderSizeKind.Deterministic:
            if self.mean < 1 or self.mean != int(self.mean):
                raise ParameterError("deterministic order size must be a positive integer")
        elif not self.mean >= 1.0:
            raise ParameterError("mean order size must be >= 1")

    @property
    def nbar(self) -> float:
        return float(self.mean)

    @property
    def n2(self) -> float:
        m = float(self.mean)
        if self.kind is OrderSizeKind.Deterministic:
            return m * m
        if self.kind is OrderSizeKind.Geometric:
            return 2.0 * m * m - m
        return m * m + m - 1.0

    def sample_totals(self, rng: np.random.Generator, counts):
        """Total lots of `counts` i.i.d. orders (elementwise)."""
        counts = np.asarray(counts, dtype=np.int64)
        m = self.mean
        if self.kind is OrderSizeKind.Deterministic:
            return counts * int(m)
        if m == 1.0:
            return counts.copy()
        if self.kind is OrderSizeKind.Geometric:
            # sum of Y geometric variables on {1,..} = Y + NegBin(Y, 1/m)
            extra = np.zeros_like(counts)
            pos = counts > 0
            if pos.any():
                extra[pos] = rng.negative_binomial(counts[pos], 1.0 / m)
            return counts + extra
        return counts + rng.poisson(counts * (m - 1.0))


@dataclass(frozen=True)
class MicrostructureParams:
    """Trade-arrival parameters.

    Parameters
    ----------
    lambda_buy, lambda_sell : float
        Fundamental buy/sell order rates per unit time.
    mu_slope : float
        Technical linearization slope; net technical order rate is -mu x.
    lot_size : int
        Shares per lot, L.
    omega : float
        Return impact per share.
    order_size : OrderSize
        Distribution of lots per order.
    """

    lambda_buy: float = 0.0
    lambda_sell: float = 0.0
    mu_slope: float = 0.0
    lot_size: int = 1
    omega: float = 1.0
    order_size: OrderSize = field(default_factory=OrderSize)

    def __post_init__(self):
        if self.lambda_buy < 0 or self.lambda_sell < 0:
            raise ParameterError("arrival rates must be non-negative")
        if self.lot_size < 1 or self.lot_size != int(self.lot_size):
            raise ParameterError("lot_size must be a positive integer")
        if not self.omega > 0:
            raise ParameterError("omega must be positive")

    @property
    def nbar(self) -> float:
        return self.order_size.nbar

    @property
    def n2(self) -> float:
        return self.order_size.n2

    @property
    def alpha(self) -> float:
        return self.lot_size * self.omega


@dataclass(frozen=True)
class TradeFlowSample:
    m_fundamental: int
    m_technical: int
    dt: float
    x_before: float


def flow_moments_fundamental(params: MicrostructureParams, dt):
    """Mean and variance of the net fundamental share flow over `dt`."""
    if not dt > 0:
        raise ParameterError("dt must be positive")
    L = params.lot_size
    mean = L * (params.lambda_buy - params.lambda_sell) * dt * params.nbar
    var = L * L * (params.lambda_buy + params.lambda_sell) * dt * params.n2
    return mean, var


def flow_moments_technical(params: MicrostructureParams, x, dt):
    """Mean and variance of the net technical share flow at return `x`.

    The variance uses the magnitude of the net rate |mu x|.
    """
    if not dt > 0:
        raise ParameterError("dt must be positive")
    L = params.lot_size
    rate = params.mu_slope * x
    return -L * rate * dt * params.nbar, L * L * abs(rate) * dt * params.n2


def _draw_flows(params, x, dt, rng):
    """Vectorized draw of (M_F, M_T) at returns `x` (array)."""
    x = np.asarray(x, dtype=float)
    os_ = params.order_size
    L = params.lot_size
    buys = os_.sample_totals(rng, rng.poisson(params.lambda_buy * dt, size=x.shape))
    sells = os_.sample_totals(rng, rng.poisson(params.lambda_sell * dt, size=x.shape))
    rate = params.mu_slope * x
    tech = os_.sample_totals(rng, rng.poisson(np.abs(rate) * dt))
    m_f = L * (buys - sells)
    m_t = -np.sign(rate).astype(np.int64) * L * tech
    return m_f, m_t


def sample_increment(params: MicrostructureParams, x, dt, rng_seed=None):
    """Draw one return increment dx = omega (M_F + M_T) starting from `x`.

    Returns
    -------
    (dx, TradeFlowSample)
    """
    if not dt > 0:
        raise ParameterError("dt must be positive")
    rng = np.random.default_rng(rng_seed)
    m_f, m_t = _draw_flows(params, np.array([x]), dt, rng)
    mf, mt = int(m_f[0]), int(m_t[0])
    return params.omega * (mf + mt), TradeFlowSample(mf, mt, dt, float(x))


def _grid(horizon, dt):
    if not 0 < dt < horizon:
        raise ParameterError("need 0 < dt < horizon")
    n = int(math.ceil(horizon / dt - 1e-9))
    return n, np.minimum(np.arange(n + 1) * dt, horizon)


def simulate_discrete_path(params: MicrostructureParams, horizon, dt, seed=None):
    """Iterate the discrete evolution equation from x = 0.

    Returns
    -------
    times, x : ndarray
    """
    n, times = _grid(horizon, dt)
    path = simulate_discrete_ensemble(params, horizon, dt, 1, seed, keep_path=True)
    return times, path[0]


def simulate_discrete_ensemble(params: MicrostructureParams, horizon, dt,
                               n_paths, seed=None, keep_path=False):
    """Simulate `n_paths` independent discrete paths with one shared stream.

    Returns the terminal returns (n_paths,), or the full (n_paths, n+1)
    array when `keep_path` is set.
    """
    n, times = _grid(horizon, dt)
    rng = np.random.default_rng(seed)
    x = np.zeros(n_paths)
    out = np.zeros((n_paths, n + 1)) if keep_path else None
    for k in range(n):
        h = times[k + 1] - times[k]
        m_f, m_t = _draw_flows(params, x, h, rng)
        x = x + params.omega * (m_f + m_t)
        if keep_path:
            out[:, k + 1] = x
    return out if keep_path else x


def map_to_sde(params: MicrostructureParams) -> ModelParams:
    """Continuum SDE parameters implied by the trade-arrival model."""
    if params.mu_slope < 0:
        raise ParameterError(
            "sigma2 imaginary under the trade-arrival mapping; specify sigma2 "
            "directly for momentum-dominated runs")
    a = params.alpha
    return ModelParams(
        mu1=a * params.nbar * (params.lambda_buy - params.lambda_sell),
        mu2=a * params.mu_slope * params.nbar,
        sigma1=a * math.sqrt((params.lambda_buy + params.lambda_sell) * params.n2),
        sigma2=a * math.sqrt(params.mu_slope * params.n2),
        rho=0.0,
    )


def scale_rates(params: MicrostructureParams, c) -> MicrostructureParams:
    """Multiply all arrival rates by `c` and divide the impact by `c`,
    keeping alpha * nbar * rate fixed."""
    return MicrostructureParams(
        lambda_buy=params.lambda_buy * c, lambda_sell=params.lambda_sell * c,
        mu_slope=params.mu_slope * c, lot_size=params.lot_size,
        omega=params.omega / c, order_size=params.order_size)
