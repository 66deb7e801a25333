"""Monte-Carlo-versus-analytic validation harness and figure data."""
from __future__ import annotations

import math
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import densities, laplace, moments, risk, simulation
from .io import write_csv
from .model import ModelParams


@dataclass(frozen=True)
class Check:
    name: str
    statistic: float
    threshold: float
    passed: bool


@dataclass
class ValidationReport:
    checks: list
    seed: int
    suite: str = "core"
    wall_time: float = field(default=0.0, compare=False)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        """Deterministic content (wall time is reported separately)."""
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}


def _below(name, stat, threshold):
    return Check(name, float(stat), float(threshold), bool(stat < threshold))


def _rel(a, b):
    return abs(a / b - 1.0)


def _check_tails():
    lp = risk.log_tail_probability(25.0, two_sided=True) / math.log(10.0)
    return _below("tails_gaussian_25", abs(lp - math.log10(6e-138)), 0.3)


def _check_explosion():
    ve = moments.explosion_factor_from_alpha_t(6.4746)
    return _below("explosion_threshold", abs(ve - 100.0), 0.1)


def _check_variance_ode():
    worst = 0.0
    for nu in (-2.0, 0.0, 1.0, 2.0, 3.0, 4.0):
        p = ModelParams.from_nu(nu)
        sol = moments.moment_odes_solve(p, 2, [0.0, 0.1, 1.0, 5.0])
        for mv in sol[1:]:
            worst = max(worst, _rel(mv.values[2], moments.variance_closed_form(p, mv.t)))
    return _below("variance_ode_vs_closed_form", worst, 1e-8)


def _check_representations():
    worst = 0.0
    for nu in (0.0, 1.0, 2.0):
        p = ModelParams.from_nu(nu)
        for x in (0.1, 1.0, 5.0):
            for s in (0.5, 2.0):
                a = laplace.transform_density(x, s, p)
                for b in (laplace.transform_density_legendre(x, s, p),
                          laplace.transform_density_series(x, s, p)):
                    worst = max(worst, _rel(b, a))
    return _below("transform_representations", worst, 1e-9)


def _check_inversion():
    p = ModelParams.from_nu(0.0)
    worst = 0.0
    for x in (0.0, 0.5, 2.0):
        for t in (0.5, 1.0, 5.0):
            worst = max(worst, _rel(laplace.invert_transform(x, t, p),
                                    float(densities.nu0_density(x, t, p))))
    return _below("inversion_nu0", worst, 1e-4)


def _check_var_limit():
    p = ModelParams(sigma1=0.2, sigma2=1e-4)
    req = risk.VarRequest(0.01, 1.0, p)
    return _below("var_small_sigma2_limit", _rel(risk.hyperbolic_var(req), risk.gaussian_var(req)), 1e-6)


def _check_ks(name, family, nu, n_paths, seed, threshold):
    p = ModelParams.from_nu(nu)
    x = simulation.simulate_euler(p, [1.0], n_paths, 1e-3, seed).paths[:, -1]
    d = stats.kstest(x, lambda v: densities.density_cdf(family, v, 1.0, p)).statistic
    return _below(name, d, threshold)


def _check_mc_mean(seed, n_paths):
    p = ModelParams(mu1=1.0, mu2=1.0, sigma1=0.2, sigma2=0.5)
    xs = simulation.simulate_euler(p, [1.0], n_paths, 1e-3, seed).paths[:, -1]
    z = abs(xs.mean() - moments.mean_closed_form(p, 1.0)) / (xs.std(ddof=1) / math.sqrt(n_paths))
    return _below("euler_mean_z_score", z, 4.0)


def run_validation(suite="core", seed=42):
    """Run the named suite; checks are reported in name order."""
    if suite not in ("core", "full"):
        raise ValueError("suite must be 'core' or 'full'")
    start = time.perf_counter()
    checks = [_check_tails(), _check_explosion(), _check_variance_ode(),
              _check_representations(), _check_inversion(), _check_var_limit()]
    ss = np.random.SeedSequence(seed).generate_state(8)
    if suite == "core":
        checks.append(_check_mc_mean(int(ss[0]), 20_000))
        checks.append(_check_ks("ks_nu0_euler", "nu0", 0.0, 20_000, int(ss[1]), 0.02))
    else:
        checks.append(_check_mc_mean(int(ss[0]), 100_000))
        checks.append(_check_ks("ks_nu0_euler", "nu0", 0.0, 100_000, int(ss[1]), 0.01))
        checks.append(_check_ks("ks_chameleon_euler", "chameleon", 2.0, 100_000, int(ss[2]), 0.01))
        checks.append(_check_ks("ks_bimodal_euler", "bimodal", -2.0, 100_000, int(ss[3]), 0.01))
    checks.sort(key=lambda c: c.name)
    return ValidationReport(checks, int(seed), suite, time.perf_counter() - start)


def emit_figure_data(out_dir, family="nu0", params=None, t_list=(0.1, 1.0, 5.0),
                     grid=None):
    """Write one CSV per t with columns x, f_hybrid, f_gaussian.

    The Gaussian column has the same sigma1 (the sigma2 = 0 model).
    Returns the list of written paths.
    """
    params = params or ModelParams.from_nu(0.0)
    grid = np.linspace(-5.0, 5.0, 1001) if grid is None else np.asarray(grid, dtype=float)
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for t in t_list:
        f_h = densities.evaluate_density(family, grid, t, params)
        f_g = densities.gaussian_density(grid, t, params)
        path = os.path.join(out_dir, f"figure_{densities.Family(family).value}_t{t:g}.csv")
        write_csv(path, ["x", "f_hybrid", "f_gaussian"], np.column_stack([grid, f_h, f_g]))
        paths.append(path)
    return paths
