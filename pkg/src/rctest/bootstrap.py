"""Moving-block bootstrap inference for the rescaled covariance statistic."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .estimators import (
    DegenerateStatisticError,
    HurstConfig,
    RctStatistic,
    _check_q,
    hurst_rows,
    row_parts,
)
from .series import BivariatePair
from .simulate import _rng, derive_seed

MAX_FAILED_FRACTION = 0.05


class BootstrapInstabilityError(RuntimeError):
    pass


class HurstMode(str, Enum):
    REESTIMATE = "reestimate"  # DFA on every resample
    FIXED = "fixed"  # resamples reuse the H values of the observed statistic


def icbrt(n: int) -> int:
    k = int(round(n ** (1.0 / 3.0)))
    while k ** 3 > n:
        k -= 1
    while (k + 1) ** 3 <= n:
        k += 1
    return k


def default_block_size(T: int, q: int = 0) -> int:
    """``floor(T^(1/3))``, widened to ``q+1`` so a Bartlett window fits inside one block."""
    return min(T, max(icbrt(T), q + 1, 1))


@dataclass(frozen=True)
class MbbConfig:
    """Bootstrap settings.

    ``hurst`` supplies (Hx, Hy) for the observed statistic instead of
    estimating them; ``hurst_mode`` decides what the resamples use.
    """

    block_size: Optional[int] = None
    replicates: int = 1000
    alpha: float = 0.05
    hurst_mode: HurstMode = HurstMode.REESTIMATE
    hurst: Optional[tuple] = None
    seed: int = 0
    hurst_config: HurstConfig = field(default_factory=HurstConfig)

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.block_size is not None and self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        object.__setattr__(self, "hurst_mode", HurstMode(self.hurst_mode))
        if self.hurst is not None:
            object.__setattr__(self, "hurst", tuple(float(h) for h in self.hurst))

    def block_for(self, T: int, q: int) -> int:
        zeta = self.block_size if self.block_size is not None else default_block_size(T, q)
        if zeta > T:
            raise ValueError(f"block size {zeta} exceeds series length {T}")
        return zeta


def block_indices(T: int, zeta: int, n: int, seed) -> np.ndarray:
    """``(n, T)`` index array of concatenated overlapping blocks, truncated to T."""
    if not 1 <= zeta <= T:
        raise ValueError(f"block size must lie in [1, T={T}], got {zeta}")
    n_blocks = -(-T // zeta)
    starts = _rng(seed).integers(0, T - zeta + 1, size=(n, n_blocks))
    return (starts[:, :, None] + np.arange(zeta)).reshape(n, -1)[:, :T]


def mbb_resample(p: BivariatePair, zeta: int, seed) -> BivariatePair:
    x, y = p.arrays()
    idx = block_indices(len(x), zeta, 1, seed)[0]
    return BivariatePair.from_arrays(x[idx], y[idx])


def nearest_rank(sorted_values: np.ndarray, prob: float) -> float:
    n = len(sorted_values)
    k = max(1, math.ceil(prob * n - 1e-9))
    return float(sorted_values[min(k, n) - 1])


def two_sided_p(observed: float, boot: np.ndarray) -> float:
    B = len(boot)
    upper = (1 + np.count_nonzero(boot >= observed)) / (B + 1)
    lower = (1 + np.count_nonzero(boot <= observed)) / (B + 1)
    return min(1.0, 2.0 * min(upper, lower))


@dataclass(frozen=True)
class RctResult:
    observed: RctStatistic
    boot_stats: np.ndarray  # sorted, failed resamples removed
    ci_low: float
    ci_high: float
    p_value: float
    reject: bool
    alpha: float
    block_size: int
    hurst_mode: str
    n_failed: int = 0

    def interval(self, alpha: float) -> tuple[float, float]:
        return (nearest_rank(self.boot_stats, alpha / 2.0),
                nearest_rank(self.boot_stats, 1.0 - alpha / 2.0))

    def reject_at(self, alpha: float) -> bool:
        lo, hi = self.interval(alpha)
        return bool(self.observed.M < lo or self.observed.M > hi)


def _observed_hurst(x: np.ndarray, y: np.ndarray, cfg: MbbConfig) -> tuple[float, float]:
    if cfg.hurst is not None:
        return cfg.hurst
    hc = cfg.hurst_config
    return float(hurst_rows(x, hc)[0]), float(hurst_rows(y, hc)[0])


def _result(observed: RctStatistic, boot: np.ndarray, cfg: MbbConfig, zeta: int) -> RctResult:
    B = len(boot)
    ok = boot[np.isfinite(boot)]
    n_failed = B - len(ok)
    if n_failed > MAX_FAILED_FRACTION * B:
        raise BootstrapInstabilityError(
            f"bootstrap instability: {n_failed} of {B} resamples degenerate")
    ok = np.sort(ok)
    lo = nearest_rank(ok, cfg.alpha / 2.0)
    hi = nearest_rank(ok, 1.0 - cfg.alpha / 2.0)
    return RctResult(
        observed=observed,
        boot_stats=ok,
        ci_low=lo,
        ci_high=hi,
        p_value=two_sided_p(observed.M, ok),
        reject=bool(observed.M < lo or observed.M > hi),
        alpha=cfg.alpha,
        block_size=zeta,
        hurst_mode=cfg.hurst_mode.value,
        n_failed=n_failed,
    )


def rct_test_many(p: BivariatePair, qs: Iterable[int], cfg: MbbConfig = MbbConfig()) -> dict:
    """Run the bootstrap test for several lag budgets on one pair.

    Each block size gets its own resample set seeded from ``(cfg.seed, zeta)``,
    so a q evaluated here gives exactly the same result as ``rct_test`` with
    that q alone; lag budgets sharing a block size share the resamples.
    """
    x, y = p.arrays()
    T = len(x)
    qs = sorted({int(q) for q in qs})
    for q in qs:
        _check_q(T, q, low=1)
    Hx, Hy = _observed_hurst(x, y, cfg)
    obs = row_parts(x, y, max(qs))

    groups: dict[int, list[int]] = {}
    for q in qs:
        groups.setdefault(cfg.block_for(T, q), []).append(q)

    results = {}
    for zeta, group in groups.items():
        idx = block_indices(T, zeta, cfg.replicates, derive_seed(cfg.seed, "mbb", zeta))
        xb, yb = x[idx], y[idx]
        parts = row_parts(xb, yb, max(group))
        if cfg.hurst_mode is HurstMode.REESTIMATE:
            bHx = hurst_rows(xb, cfg.hurst_config)
            bHy = hurst_rows(yb, cfg.hurst_config)
        else:
            bHx, bHy = Hx, Hy
        for q in group:
            if obs.degenerate(q)[0]:
                raise DegenerateStatisticError("degenerate long-run covariance")
            s_q = float(obs.s_q(q)[0])
            observed = RctStatistic(
                M=float(obs.M(q, Hx, Hy)[0]), q=q, Hx=Hx, Hy=Hy,
                cov_partial_sums=float(obs.cov_ps[0]), s_xy_q=s_q, T=T)
            results[q] = _result(observed, parts.M(q, bHx, bHy), cfg, zeta)
    return results


def rct_test(p: BivariatePair, q: int, cfg: MbbConfig = MbbConfig()) -> RctResult:
    return rct_test_many(p, [q], cfg)[q]
