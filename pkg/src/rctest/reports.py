"""Pair file IO, q sweeps of the bootstrap test and plot-ready CCF tables."""
from __future__ import annotations

import csv
import math
from typing import Iterable

import numpy as np
import pandas as pd

from .bootstrap import MbbConfig, rct_test_many
from .series import BivariatePair, ccf

SWEEP_FIELDS = ["q", "M", "ci_low", "ci_high", "p_value", "reject", "Hx", "Hy",
                "cov_partial_sums", "s_xy_q", "T", "block_size"]
CCF_FIELDS = ["lag", "rho", "gamma", "log_lag", "log_abs_rho"]


def read_pair(path) -> BivariatePair:
    """Load ``x,y`` or ``date,x,y`` CSV; any missing or non-numeric cell is an error."""
    df = pd.read_csv(path, float_precision="round_trip")
    if not {"x", "y"} <= set(df.columns):
        raise ValueError("pair file needs columns x,y (optionally date)")
    x = pd.to_numeric(df["x"], errors="coerce").to_numpy()
    y = pd.to_numeric(df["y"], errors="coerce").to_numpy()
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("pair file contains missing or non-numeric values")
    index = tuple(df["date"].astype(str)) if "date" in df.columns else None
    return BivariatePair.from_arrays(x, y, index=index)


def write_pair(p: BivariatePair, path) -> None:
    x, y = p.arrays()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if p.x.index is not None:
            w.writerow(["date", "x", "y"])
            w.writerows((d, repr(float(a)), repr(float(b))) for d, a, b in zip(p.x.index, x, y))
        else:
            w.writerow(["x", "y"])
            w.writerows((repr(float(a)), repr(float(b))) for a, b in zip(x, y))


def q_sweep(p: BivariatePair, qs: Iterable[int], cfg: MbbConfig = MbbConfig()) -> list[dict]:
    results = rct_test_many(p, qs, cfg)
    rows = []
    for q in sorted(results):
        r = results[q]
        o = r.observed
        rows.append({"q": q, "M": o.M, "ci_low": r.ci_low, "ci_high": r.ci_high,
                     "p_value": r.p_value, "reject": r.reject, "Hx": o.Hx, "Hy": o.Hy,
                     "cov_partial_sums": o.cov_partial_sums, "s_xy_q": o.s_xy_q, "T": o.T,
                     "block_size": r.block_size})
    return rows


def ccf_table(p: BivariatePair, max_lag: int) -> list[dict]:
    est = ccf(p, max_lag)
    rows = []
    for k, r, g in zip(est.lags, est.rho, est.gamma):
        k = int(k)
        ll = math.log(k) if k > 0 else None
        la = math.log(abs(r)) if k > 0 and r != 0 else None
        rows.append({"lag": k, "rho": float(r), "gamma": float(g), "log_lag": ll, "log_abs_rho": la})
    return rows


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows(rows: list[dict], fields: list[str], dest) -> None:
    """Write rows as CSV to a path or an open text stream."""
    if hasattr(dest, "write"):
        _write(rows, fields, dest)
        return
    with open(dest, "w", newline="") as fh:
        _write(rows, fields, fh)


def _write(rows, fields, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_cell(row[f]) for f in fields])


def ccf_export(p: BivariatePair, max_lag: int, path) -> list[dict]:
    rows = ccf_table(p, max_lag)
    write_rows(rows, CCF_FIELDS, path)
    return rows


def read_ccf(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [
            {"lag": int(r["lag"]), "rho": float(r["rho"]), "gamma": float(r["gamma"]),
             "log_lag": float(r["log_lag"]) if r["log_lag"] else None,
             "log_abs_rho": float(r["log_abs_rho"]) if r["log_abs_rho"] else None}
            for r in csv.DictReader(fh)
        ]
