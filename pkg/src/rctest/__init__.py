"""Rescaled covariance test for power-law cross-correlations."""

__version__ = "0.1.0"

from .series import BivariatePair, CcfEstimate, Series, ccf, cross_covariance, demean, partial_sum
from .simulate import (
    Ar1PairSpec,
    ArfimaPairSpec,
    Coupling,
    NoiseSpec,
    arfima_ma_coefficients,
    derive_seed,
    gaussian_pair,
    simulate,
    simulate_ar1_pair,
    simulate_arfima_pair,
)
from .estimators import (
    DegenerateStatisticError,
    HacEstimate,
    HurstConfig,
    HurstEstimate,
    RctStatistic,
    estimate_hurst,
    hac_cross_covariance,
    rct_statistic,
)
from .bootstrap import (
    BootstrapInstabilityError,
    HurstMode,
    MbbConfig,
    RctResult,
    mbb_resample,
    rct_test,
    rct_test_many,
)
