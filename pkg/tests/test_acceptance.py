"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
repeated in the "acceptance criteria" section at the end of the run.
"""
import math

import numpy as np
import pytest
from scipy import integrate, stats

from acceptance_log import report
from hybridbm import ModelParams
from hybridbm import densities, laplace, microstructure, moments, risk, simulation
from hybridbm.io import read_csv
from hybridbm.validate import emit_figure_data


def test_01_headline_tails():
    g2 = risk.log_tail_probability(25.0, "gaussian", two_sided=True) / math.log(10.0)
    g1 = risk.log_tail_probability(25.0, "gaussian") / math.log(10.0)
    s2 = risk.tail_probability(25.0, "student", nu=4, two_sided=True)
    s1 = risk.tail_probability(25.0, "student", nu=4)
    ok_g = abs(g2 - math.log10(6e-138)) <= 0.3
    ok_s = 0.5 <= s2 / 4e-6 <= 2.0
    detail = (f"gaussian two-sided 10^{g2:.3f} (one-sided 10^{g1:.3f}); "
              f"student4 two-sided {s2:.3e} (one-sided {s1:.3e})")
    assert report(1, "25-sigma tail probabilities", ok_g and ok_s, detail)


def test_02_explosion_threshold():
    ve = moments.explosion_factor_from_alpha_t(6.4746)
    k = moments.sigma_event_equivalent(25.0, ve=ve)
    ok = abs(ve - 100.0) <= 0.1 and abs(k - 2.5) <= 0.002
    assert report(2, "variance explosion threshold", ok, f"V_E={ve:.6f}, k={k:.6f}")


def test_03_variance_closed_form_vs_odes():
    worst = 0.0
    for nu in (-2.0, 0.0, 1.0, 2.0, 3.0, 4.0):
        p = ModelParams.from_nu(nu)
        sol = moments.moment_odes_solve(p, 2, [0.0, 0.1, 1.0, 5.0])
        for mv in sol[1:]:
            v = moments.variance_closed_form(p, mv.t)
            worst = max(worst, abs(mv.variance / v - 1.0))
    assert report(3, "variance closed form vs moment ODEs", worst < 1e-8,
                  f"max rel diff {worst:.2e}")


@pytest.mark.slow
def test_04_monte_carlo_vs_densities():
    dists = {}
    for i, (family, nu) in enumerate((("nu0", 0.0), ("chameleon", 2.0), ("bimodal", -2.0))):
        p = ModelParams.from_nu(nu)
        x = simulation.simulate_euler(p, [1.0], 100_000, 1e-3, seed=1000 + i).paths[:, -1]
        cdf = lambda v, f=family, q=p: densities.density_cdf(f, v, 1.0, q)
        dists[family] = stats.kstest(x, cdf).statistic
    ok = all(d < 0.01 for d in dists.values())
    detail = ", ".join(f"{k} D={v:.4f}" for k, v in dists.items())
    assert report(4, "Euler samples vs closed-form CDFs (KS)", ok, detail)


def test_05_transform_inversion_oracle():
    worst = 0.0
    for nu, exact in ((0.0, densities.nu0_density), (2.0, densities.chameleon_density)):
        p = ModelParams.from_nu(nu)
        for x in (0.0, 0.5, 2.0):
            for t in (0.5, 1.0, 5.0):
                f = float(exact(x, t, p))
                if f > 1e-6:
                    worst = max(worst, abs(laplace.invert_transform(x, t, p) / f - 1.0))
    assert report(5, "Gaver-Stehfest inversion vs closed forms", worst < 1e-4,
                  f"max rel err {worst:.2e}")


def test_06_representation_equivalence():
    worst = 0.0
    for nu in (0.0, 1.0, 2.0):
        p = ModelParams.from_nu(nu)
        for x in (0.1, 1.0, 5.0):
            for s in (0.5, 1.0, 2.0):
                vals = (laplace.transform_density(x, s, p),
                        laplace.transform_density_legendre(x, s, p),
                        laplace.transform_density_series(x, s, p))
                for i in range(3):
                    for j in range(i + 1, 3):
                        worst = max(worst, abs(vals[i] / vals[j] - 1.0))
    rng = np.random.default_rng(2024)
    resid = 0.0
    for nu, s in zip(rng.uniform(-6.0, 10.0, 1000), rng.uniform(1e-3, 50.0, 1000)):
        g = laplace.indicial_root(nu, s)
        resid = max(resid, abs(g * g + nu * g - s) / max(1.0, s))
    ok = worst < 1e-9 and resid < 1e-10
    assert report(6, "transform representations and indicial identity", ok,
                  f"max pairwise rel diff {worst:.2e}, indicial residual {resid:.2e}")


def test_07_chameleon_signature():
    worst_var = 0.0
    for s2 in (0.5, 1.0, 2.0):
        p = ModelParams.from_nu(2.0, sigma2=s2)
        for t in (0.5, 1.0, 5.0):
            # x = (s1/s2) sinh(u) keeps the integrand smooth and light-tailed in u
            def g(u):
                x = p.sigma1 / s2 * math.sinh(u)
                return x * x * float(densities.chameleon_density(x, t, p)) * p.sigma1 / s2 * math.cosh(u)
            tau = s2 * s2 * t
            u_max = tau + 40.0 * math.sqrt(tau) + 10.0
            var = 2.0 * integrate.quad(g, 0.0, u_max, epsabs=0, epsrel=1e-12, limit=400)[0]
            worst_var = max(worst_var, abs(var / (p.sigma1 ** 2 * t) - 1.0))
    p = ModelParams.from_nu(2.0)
    small = abs(float(densities.chameleon_density(0.0, 1e-4, p))
                / float(densities.gaussian_density(0.0, 1e-4, p)) - 1.0)
    xs = np.array([0.0, 1.0, 3.0])
    large = np.max(np.abs(densities.chameleon_density(xs, 1e3, p)
                          / densities.chameleon_limit(xs, p) - 1.0))
    ok = worst_var < 1e-6 and small < 1e-3 and large < 1e-3
    assert report(7, "chameleon variance and limits", ok,
                  f"var rel err {worst_var:.2e}, t=1e-4 {small:.2e}, t=1e3 {large:.2e}")


def _pearson_theta_moment(p4, n):
    """E[(x - lambda)^n] using x = lambda + a tan(theta)."""
    def g(th):
        return (p4.a * math.tan(th)) ** n * p4.k * p4.a * math.cos(th) ** (p4.nu - 1) \
            * math.exp(-p4.nu2 * th)
    return integrate.quad(g, -0.5 * math.pi, 0.5 * math.pi, epsabs=1e-14, epsrel=1e-12, limit=200)[0]


def test_08_pearson_iv():
    worst_mass = worst_mom = 0.0
    for nu in (3.0, 5.0):
        for nu2 in (-1.0, 0.0, 2.0):
            p4 = densities.pearson4_from_shape(1.0, 0.0, nu, nu2)
            mom = densities.pearson4_moments(p4)
            raw = [_pearson_theta_moment(p4, n) for n in range(5) if n < nu]
            worst_mass = max(worst_mass, abs(raw[0] - 1.0))
            mean = p4.lam + raw[1]
            c2 = raw[2] - raw[1] ** 2
            quad_moms = {"mean": mean, "variance": c2}
            if mom.skewness is not None:
                c3 = raw[3] - 3 * raw[1] * raw[2] + 2 * raw[1] ** 3
                quad_moms["skewness"] = c3 / c2 ** 1.5
            if mom.excess_kurtosis is not None:
                c4 = raw[4] - 4 * raw[1] * raw[3] + 6 * raw[1] ** 2 * raw[2] - 3 * raw[1] ** 4
                quad_moms["excess_kurtosis"] = c4 / c2 ** 2 - 3.0
            for name, q in quad_moms.items():
                c = getattr(mom, name)
                err = abs(c - q) if abs(q) < 1e-12 else abs(c / q - 1.0)
                worst_mom = max(worst_mom, err)
    k5 = densities.pearson4_moments(densities.pearson4_from_shape(1.0, 0.0, 5.0, 0.0)).excess_kurtosis
    ok = worst_mass < 1e-8 and worst_mom < 1e-6 and abs(k5 - 6.0) < 1e-10
    assert report(8, "Pearson IV mass and moments", ok,
                  f"mass err {worst_mass:.2e}, moment err {worst_mom:.2e}, kurtosis(nu=5) {k5!r}")


# 8th-order central-difference weights
_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def _stationary_residual(p, x, h):
    offs = np.arange(-4, 5) * h
    xs = x[:, None] + offs[None, :]
    f = densities.student_equilibrium_density(xs, p)
    drift = (p.mu1 - p.mu2 * xs) * f
    diff = (p.sigma1 ** 2 + 2 * p.rho * p.sigma1 * p.sigma2 * xs + p.sigma2 ** 2 * xs ** 2) * f
    return -(drift @ _D1) / h + 0.5 * (diff @ _D2) / h ** 2


def test_09_student_stationarity():
    x = np.linspace(-10.0, 10.0, 2001)
    worst = {}
    for nu in (3.0, 4.0, 6.0):
        worst[nu] = float(np.max(np.abs(_stationary_residual(ModelParams.from_nu(nu), x, 0.02))))
    ok = all(r < 1e-8 for r in worst.values())
    assert report(9, "Student equilibrium solves the stationary Fokker-Planck equation", ok,
                  ", ".join(f"nu={k:g}: {v:.2e}" for k, v in worst.items()))


@pytest.mark.slow
def test_10_microstructure_bridge():
    base = microstructure.MicrostructureParams(lambda_buy=1.0, lambda_sell=1.0, mu_slope=1.0,
                                               lot_size=1, omega=1.0)
    n = 10_000
    rows = []
    for i, c in enumerate((1, 4, 16)):
        mp = microstructure.scale_rates(base, c)
        sde = microstructure.map_to_sde(mp)
        x = microstructure.simulate_discrete_ensemble(mp, 1.0, 1e-3, n, seed=77 + i)
        e1 = moments.mean_closed_form(sde, 1.0)
        v = moments.variance_closed_form(sde, 1.0)
        xc = x - x.mean()
        z_mean = (x.mean() - e1) / (x.std(ddof=1) / math.sqrt(n))
        z_var = (x.var(ddof=1) - v) / math.sqrt((np.mean(xc ** 4) - x.var() ** 2) / n)
        rows.append((c, sde.nu, z_mean, z_var, abs(x.var(ddof=1) / v - 1.0)))
    within = all(abs(r[2]) <= 4 and abs(r[3]) <= 4 for r in rows)
    gaps = [r[4] for r in rows]
    monotone = gaps[0] > gaps[1] > gaps[2]
    detail = "; ".join(f"c={c} nu={nu:g} z(e1)={zm:+.2f} z(V)={zv:+.2f} |dV/V|={g:.3f}"
                       for c, nu, zm, zv, g in rows)
    assert report(10, "discrete trade model vs mapped SDE moments", within and monotone, detail)


@pytest.mark.slow
def test_11_value_at_risk():
    p = ModelParams.from_nu(0.0)
    n = 1_000_000
    x = simulation.simulate_conditional_gaussian(p, 1.0, n, n_steps=500, seed=4242)
    bands = []
    ok = True
    for u0 in (0.01, 0.05, 0.25):
        q = risk.hyperbolic_var(risk.VarRequest(u0, 1.0, p))
        count = int(np.count_nonzero(x <= q))
        half = 2.576 * math.sqrt(n * u0 * (1.0 - u0))
        ok &= abs(count - n * u0) <= half
        bands.append(f"u0={u0}: count {count} vs {n * u0:.0f}+-{half:.0f}")
    lim = ModelParams(sigma1=1.0, sigma2=1e-4)
    req = risk.VarRequest(0.01, 1.0, lim)
    rel = abs(risk.hyperbolic_var(req) / risk.gaussian_var(req) - 1.0)
    ok &= rel < 1e-6
    assert report(11, "hyperbolic VaR vs Monte Carlo quantiles", ok,
                  "; ".join(bands) + f"; sigma2->0 rel diff {rel:.1e}")


def test_12_figure_data(tmp_path):
    p = ModelParams.from_nu(0.0)
    t_list = (0.1, 0.5, 1.0, 2.0, 5.0)
    paths = emit_figure_data(tmp_path, "nu0", p, t_list)
    data = {}
    for t, path in zip(t_list, paths):
        header, arr = read_csv(path)
        assert header == ["x", "f_hybrid", "f_gaussian"]
        data[t] = arr
    a = data[0.1]
    inner = np.abs(a[:, 0]) <= 3.0
    dev = float(np.max(np.abs(a[inner, 1] - a[inner, 2])))
    b = data[5.0]
    i4 = int(np.argmin(np.abs(b[:, 0] - 4.0)))
    ratio = b[i4, 1] / b[i4, 2]
    peak = max(abs(arr[np.argmin(np.abs(arr[:, 0])), 1] / arr[np.argmin(np.abs(arr[:, 0])), 2] - 1.0)
               for arr in data.values())
    ok = dev < 0.02 and ratio > 10.0 and peak < 1e-12
    assert report(12, "figure overlays (nu=0)", ok,
                  f"t=0.1 max dev {dev:.2e}, t=5 tail ratio at x=4 {ratio:.1f}, peak mismatch {peak:.1e}")
