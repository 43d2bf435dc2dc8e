"""Series containers, lagged cross-covariances and partial sums."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


def _frozen(values, name: str = "values") -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Series:
    """Equally spaced real-valued series with optional label and index tags."""

    values: np.ndarray
    label: Optional[str] = None
    index: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if self.index is not None:
            idx = tuple(self.index)
            if len(idx) != len(self.values):
                raise ValueError("index length does not match values")
            object.__setattr__(self, "index", idx)

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def with_values(self, values) -> "Series":
        return Series(values, label=self.label, index=self.index)


@dataclass(frozen=True)
class BivariatePair:
    x: Series
    y: Series

    def __post_init__(self):
        x = self.x if isinstance(self.x, Series) else Series(self.x)
        y = self.y if isinstance(self.y, Series) else Series(self.y)
        if len(x) != len(y):
            raise ValueError(f"series lengths differ: {len(x)} != {len(y)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_arrays(cls, x, y, index: Optional[Sequence] = None) -> "BivariatePair":
        return cls(Series(x, label="x", index=index), Series(y, label="y", index=index))

    def __len__(self) -> int:
        return len(self.x)

    @property
    def T(self) -> int:
        return len(self.x)

    def swap(self) -> "BivariatePair":
        return BivariatePair(self.y, self.x)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x.values, self.y.values


@dataclass(frozen=True)
class CcfEstimate:
    lags: np.ndarray
    rho: np.ndarray
    gamma: np.ndarray
    sd_x: float = field(default=np.nan)
    sd_y: float = field(default=np.nan)

    def at(self, k: int) -> float:
        return float(self.rho[k - int(self.lags[0])])


def demean(s: Series) -> Series:
    if len(s) == 0:
        raise ValueError("empty input")
    v = s.values
    return s.with_values(v - v.mean())


def partial_sum(s: Series) -> Series:
    """Cumulative sum ``X_t = x_1 + ... + x_t``; the input is not demeaned here."""
    return s.with_values(np.cumsum(s.values))


def lagged_products(xc: np.ndarray, yc: np.ndarray, k: int) -> np.ndarray:
    """Sum over t of ``xc[..., t] * yc[..., t-k]`` along the last axis.

    Works on stacked rows, which is what the bootstrap and Monte Carlo
    kernels feed in. No normalisation is applied.
    """
    T = xc.shape[-1]
    if k >= 0:
        a, b = xc[..., k:], yc[..., : T - k]
    else:
        a, b = xc[..., : T + k], yc[..., -k:]
    return np.einsum("...t,...t->...", a, b)


def _check_lag(T: int, k: int) -> None:
    if abs(k) > T - 2:
        raise ValueError(f"lag exceeds sample: |k|={abs(k)} > T-2={T - 2}")


def cross_covariance(p: BivariatePair, k: int) -> float:
    """Sample cross-covariance of ``x_t`` with ``y_{t-k}`` (divisor T, full-sample means).

    Positive ``k`` pairs ``x_t`` with the value of y observed k steps earlier.
    """
    x, y = p.arrays()
    T = len(x)
    _check_lag(T, k)
    return float(lagged_products(x - x.mean(), y - y.mean(), k) / T)


def ccf(p: BivariatePair, max_lag: int) -> CcfEstimate:
    x, y = p.arrays()
    T = len(x)
    _check_lag(T, max_lag)
    xc, yc = x - x.mean(), y - y.mean()
    lags = np.arange(-max_lag, max_lag + 1)
    gamma = np.array([lagged_products(xc, yc, int(k)) for k in lags]) / T
    sd_x = np.sqrt(xc @ xc / T)
    sd_y = np.sqrt(yc @ yc / T)
    denom = sd_x * sd_y
    rho = gamma / denom if denom > 0 else np.full_like(gamma, np.nan)
    return CcfEstimate(lags=lags, rho=rho, gamma=gamma, sd_x=float(sd_x), sd_y=float(sd_y))
