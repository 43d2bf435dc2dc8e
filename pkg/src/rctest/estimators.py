"""HAC cross-covariance, DFA Hurst exponent and the rescaled covariance statistic.

The public functions take :class:`BivariatePair` / :class:`Series`; the
``*_rows`` kernels work on stacked ``(n, T)`` arrays so that bootstrap and
Monte Carlo code can evaluate many series in one numpy pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .series import BivariatePair, Series, lagged_products


class DegenerateStatisticError(ValueError):
    """Long-run cross-covariance is (numerically) zero, so M is undefined."""


DEGENERATE_RTOL = 1e-12


def bartlett_weights(q: int) -> np.ndarray:
    """Weights ``1 - |k|/(q+1)`` for k = -q..q."""
    k = np.arange(-q, q + 1)
    return 1.0 - np.abs(k) / (q + 1.0)


@dataclass(frozen=True)
class HacEstimate:
    q: int
    value: float


def _check_q(T: int, q: int, low: int = 0) -> None:
    if not low <= q <= T - 2:
        raise ValueError(f"q={q} outside [{low}, T-2={T - 2}]")


def lagged_covariances_rows(xc: np.ndarray, yc: np.ndarray, max_lag: int) -> np.ndarray:
    """``gamma(k)`` for k = -max_lag..max_lag, divisor T, on already demeaned rows."""
    T = xc.shape[-1]
    out = np.empty(xc.shape[:-1] + (2 * max_lag + 1,))
    for i, k in enumerate(range(-max_lag, max_lag + 1)):
        out[..., i] = lagged_products(xc, yc, k)
    return out / T


def hac_from_gammas(gammas: np.ndarray, q: int) -> np.ndarray:
    """Bartlett-weighted sum of the central ``2q+1`` entries of a lag table."""
    centre = gammas.shape[-1] // 2
    return gammas[..., centre - q: centre + q + 1] @ bartlett_weights(q)


def hac_cross_covariance(p: BivariatePair, q: int) -> HacEstimate:
    x, y = p.arrays()
    _check_q(len(x), q)
    g = lagged_covariances_rows(x - x.mean(), y - y.mean(), q)
    return HacEstimate(q=q, value=float(hac_from_gammas(g, q)))


# --- Hurst exponent -------------------------------------------------------

@dataclass(frozen=True)
class HurstConfig:
    """DFA settings; ``fixed`` bypasses estimation and passes a known H through."""

    method: str = "dfa"
    min_scale: int = 10
    max_scale_frac: float = 0.2
    n_scales: int = 12
    fixed: Optional[float] = None


@dataclass(frozen=True)
class HurstEstimate:
    H: float
    method: str
    scales: tuple = ()


def dfa_scales(T: int, cfg: HurstConfig = HurstConfig()) -> np.ndarray:
    hi = int(T * cfg.max_scale_frac)
    if hi < cfg.min_scale:
        raise ValueError("insufficient length for scale grid")
    grid = np.unique(np.round(np.geomspace(cfg.min_scale, hi, cfg.n_scales)).astype(int))
    if len(grid) < 4:
        raise ValueError("insufficient length for scale grid")
    return grid


def dfa_fluctuations_rows(x: np.ndarray, scales: Sequence[int]) -> np.ndarray:
    """DFA-1 fluctuation F(s) per row (linear detrending, windows from both ends)."""
    x = np.ascontiguousarray(np.atleast_2d(x), dtype=float)
    return _kernels.dfa_rows(x, np.asarray(scales, dtype=np.int64))


def loglog_slope_rows(scales, fluct: np.ndarray) -> np.ndarray:
    ls = np.log(np.asarray(scales, dtype=float))
    ls = ls - ls.mean()
    with np.errstate(divide="ignore", invalid="ignore"):  # constant rows give NaN
        lf = np.log(fluct)
        return (lf - lf.mean(axis=-1, keepdims=True)) @ ls / (ls @ ls)


def hurst_rows(x: np.ndarray, cfg: HurstConfig = HurstConfig()) -> np.ndarray:
    x = np.atleast_2d(x)
    if cfg.fixed is not None:
        return np.full(x.shape[0], float(cfg.fixed))
    if cfg.method != "dfa":
        raise ValueError(f"unknown Hurst method {cfg.method!r}")
    scales = dfa_scales(x.shape[-1], cfg)
    return loglog_slope_rows(scales, dfa_fluctuations_rows(x, scales))


def estimate_hurst(s: Series, config: HurstConfig = HurstConfig()) -> HurstEstimate:
    if config.fixed is not None:
        return HurstEstimate(H=float(config.fixed), method="fixed")
    scales = dfa_scales(len(s), config)
    H = loglog_slope_rows(scales, dfa_fluctuations_rows(np.asarray(s.values), scales))[0]
    return HurstEstimate(H=float(H), method=config.method, scales=tuple(int(v) for v in scales))


# --- rescaled covariance statistic ---------------------------------------

@dataclass(frozen=True)
class RctStatistic:
    M: float
    q: int
    Hx: float
    Hy: float
    cov_partial_sums: float
    s_xy_q: float
    T: int

    def reconstruct(self) -> float:
        return rct_formula(self.q, self.Hx, self.Hy, self.cov_partial_sums, self.s_xy_q, self.T)


def rct_formula(q, Hx, Hy, cov_ps, s_q, T):
    return np.power(float(q), np.asarray(Hx) + np.asarray(Hy) - 1.0) * cov_ps / (T * s_q)


def partial_sum_cov_rows(xc: np.ndarray, yc: np.ndarray) -> np.ndarray:
    """Path covariance (divisor T) between the partial sums of demeaned rows."""
    X = np.cumsum(xc, axis=-1)
    Y = np.cumsum(yc, axis=-1)
    X -= X.mean(axis=-1, keepdims=True)
    Y -= Y.mean(axis=-1, keepdims=True)
    return np.einsum("...t,...t->...", X, Y) / xc.shape[-1]


@dataclass
class RowParts:
    """Everything M needs for a stack of pairs, minus the Hurst prefactor."""

    T: int
    cov_ps: np.ndarray
    gammas: np.ndarray
    scale: np.ndarray  # sd_x * sd_y per row, for the degeneracy threshold

    def s_q(self, q: int) -> np.ndarray:
        return hac_from_gammas(self.gammas, q)

    def degenerate(self, q: int) -> np.ndarray:
        return np.abs(self.s_q(q)) <= DEGENERATE_RTOL * self.scale

    def M(self, q: int, Hx, Hy) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            m = rct_formula(q, Hx, Hy, self.cov_ps, self.s_q(q), self.T)
        return np.where(self.degenerate(q), np.nan, m)


def row_parts(x: np.ndarray, y: np.ndarray, max_q: int) -> RowParts:
    x = np.atleast_2d(x)
    y = np.atleast_2d(y)
    cov_ps, gammas, scale = _kernels.pair_stats_rows(
        np.ascontiguousarray(x, dtype=float), np.ascontiguousarray(y, dtype=float), int(max_q))
    return RowParts(T=x.shape[-1], cov_ps=cov_ps, gammas=gammas, scale=scale)


def rct_statistic(p: BivariatePair, q: int, Hx: float, Hy: float) -> RctStatistic:
    x, y = p.arrays()
    T = len(x)
    _check_q(T, q, low=1)
    parts = row_parts(x, y, q)
    if parts.degenerate(q)[0]:
        raise DegenerateStatisticError("degenerate long-run covariance")
    cov_ps = float(parts.cov_ps[0])
    s_q = float(parts.s_q(q)[0])
    M = float(rct_formula(q, Hx, Hy, cov_ps, s_q, T))
    return RctStatistic(M=M, q=q, Hx=float(Hx), Hy=float(Hy),
                        cov_partial_sums=cov_ps, s_xy_q=s_q, T=T)
