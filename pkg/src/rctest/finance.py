"""Daily series from intraday prices: realized variance, log volatility, returns, volume.

Intraday CSV layout: ``date,time,price[,volume]``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from .series import Series

log = logging.getLogger(__name__)

DAILY_COLUMNS = ["day", "realized_variance", "log_volatility", "log_return",
                 "log_volume", "detrended_log_volume"]


@dataclass(frozen=True)
class IngestOptions:
    freq_minutes: int = 5
    min_bars: int = 20
    detrend_order: int = 2
    overnight: bool = False  # add the squared close-to-open return to RV


def realized_variance(prices) -> float:
    """Sum of squared log returns between consecutive bars."""
    p = np.asarray(prices, dtype=float)
    if len(p) < 2:
        raise ValueError("need at least 2 bars for a realized variance")
    if np.any(p <= 0) or not np.all(np.isfinite(p)):
        raise ValueError("prices must be positive and finite")
    r = np.diff(np.log(p))
    return float(r @ r)


def detrend_log_volume(s: Series, order: int = 2) -> Series:
    """Residuals of a least-squares polynomial in the time index."""
    v = np.asarray(s.values)
    T = len(v)
    if order < 0:
        raise ValueError("order must be >= 0")
    if T <= order + 1:
        raise ValueError(f"degenerate polynomial fit: T={T} <= order+1={order + 1}")
    t = np.arange(T, dtype=float)
    fit = np.polynomial.Polynomial.fit(t, v, order)
    return s.with_values(v - fit(t))


def read_intraday(path) -> pd.DataFrame:
    df = pd.read_csv(path, dtype={"date": str, "time": str})
    missing = {"date", "time", "price"} - set(df.columns)
    if missing:
        raise ValueError(f"intraday file lacks columns: {sorted(missing)}")
    df["timestamp"] = pd.to_datetime(df["date"] + " " + df["time"])
    if (df["price"] <= 0).any() or df["price"].isna().any():
        raise ValueError("prices must be positive")
    return df.sort_values("timestamp", kind="stable").reset_index(drop=True)


def grid_prices(day: pd.DataFrame, freq_minutes: int = 5) -> np.ndarray:
    """Prices on a regular grid by last observation carried forward.

    The grid starts at the first bar and ends at the last one; ticks between
    grid points are ignored except the latest one before each point.
    """
    ts = day["timestamp"]
    grid = pd.date_range(ts.iloc[0], ts.iloc[-1], freq=f"{freq_minutes}min")
    if grid[-1] != ts.iloc[-1]:
        grid = grid.append(pd.DatetimeIndex([ts.iloc[-1]]))
    pos = np.searchsorted(ts.values, grid.values, side="right") - 1
    return day["price"].to_numpy(dtype=float)[pos]


def daily_records(df: pd.DataFrame, opts: IngestOptions = IngestOptions()) -> pd.DataFrame:
    rows = []
    prev_close = None
    for day, g in df.groupby("date", sort=True):
        if len(g) < max(opts.min_bars, 2):
            log.warning("dropping %s: %d bars < %d", day, len(g), max(opts.min_bars, 2))
            continue
        p = grid_prices(g, opts.freq_minutes)
        rv = realized_variance(p)
        if opts.overnight and prev_close is not None:
            rv += float(np.log(p[0] / prev_close) ** 2)
        close = p[-1]
        rows.append({
            "day": day,
            "realized_variance": rv,
            "log_volatility": 0.5 * np.log(rv) if rv > 0 else np.nan,
            "log_return": np.log(close / prev_close) if prev_close is not None else np.nan,
            "log_volume": np.log(g["volume"].sum()) if "volume" in g else np.nan,
        })
        prev_close = close
    out = pd.DataFrame(rows, columns=DAILY_COLUMNS[:-1])
    out["detrended_log_volume"] = np.nan
    vol = out["log_volume"].to_numpy()
    ok = np.isfinite(vol)
    if ok.sum() > opts.detrend_order + 1:
        out.loc[ok, "detrended_log_volume"] = detrend_log_volume(
            Series(vol[ok]), opts.detrend_order).values
    return out


def ingest(path, opts: IngestOptions = IngestOptions()) -> pd.DataFrame:
    return daily_records(read_intraday(path), opts)


def write_daily(df: pd.DataFrame, path) -> None:
    df.to_csv(path, index=False, float_format="%.17g")


def read_daily(path) -> pd.DataFrame:
    return pd.read_csv(path, dtype={"day": str}, float_precision="round_trip")


def daily_series(df: pd.DataFrame, column: str) -> Series:
    """Column as a Series indexed by day, rows with missing values dropped."""
    sub = df[["day", column]].dropna()
    return Series(sub[column].to_numpy(dtype=float), label=column, index=tuple(sub["day"]))
