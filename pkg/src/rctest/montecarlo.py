"""Monte Carlo harness: size/power tables, statistic sweeps and partial-sum scaling.

Every replicate draws its data from a child seed derived from
``(base seed, process, parameter, T, rho, replicate)``, so any split of the
replicate range across workers merges into the same table.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .bootstrap import HurstMode, MbbConfig, rct_test_many
from .estimators import DegenerateStatisticError, HurstConfig, hurst_rows, row_parts
from .simulate import (
    Ar1PairSpec,
    ArfimaPairSpec,
    NoiseSpec,
    derive_seed,
    simulate,
    simulate_batch,
)

PROCESSES = ("noise", "ar1", "arfima")


def process_spec(process: str, param: float, rho: float, T: int, **kw):
    """Build the simulator spec for one grid point; ``arfima`` with d=0 is white noise."""
    if process == "noise" or (process == "arfima" and param == 0):
        return NoiseSpec(rho=rho, T=T)
    if process == "ar1":
        return Ar1PairSpec(param, param, rho, T, **kw)
    if process == "arfima":
        return ArfimaPairSpec(param, param, rho, T, **kw)
    raise ValueError(f"unknown process {process!r}; expected one of {PROCESSES}")


@dataclass(frozen=True)
class ExperimentSpec:
    """One size/power table: a process with fixed memory parameter over a (T, q, alpha, rho) grid.

    ``assume_true_hurst`` feeds the generating process's H into the observed
    statistic instead of estimating it (resamples still follow ``hurst_mode``).
    """

    process: str = "noise"
    param: float = 0.0
    rhos: tuple = (0.5, 0.9)
    Ts: tuple = (500, 1000, 5000)
    qs: tuple = (1, 5, 10, 30)
    alphas: tuple = (0.01, 0.05, 0.1)
    replications: int = 1000
    seed: int = 0
    boot_replicates: int = 1000
    hurst_mode: str = "reestimate"
    assume_true_hurst: bool = False
    block_size: Optional[int] = None
    process_options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.process not in PROCESSES:
            raise ValueError(f"unknown process {self.process!r}")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        for T in self.Ts:
            for q in self.qs:
                if not 1 <= q <= T - 2:
                    raise ValueError(f"q={q} invalid for T={T}")
            for rho in self.rhos:
                process_spec(self.process, self.param, rho, T, **self.process_options)
        for a in self.alphas:
            if not 0 < a < 1:
                raise ValueError(f"alpha={a} outside (0, 1)")
        HurstMode(self.hurst_mode)

    def data_seed(self, T: int, rho: float, rep: int) -> int:
        return derive_seed(self.seed, self.process, float(self.param), int(T), float(rho), int(rep))


Cell = tuple  # (T, q, alpha, rho)


@dataclass
class McTable:
    """Rejection counts per (T, q, alpha, rho) cell."""

    counts: dict
    replications: dict  # (T, rho) -> number of replicates run
    failed: dict = field(default_factory=dict)  # (T, rho) -> degenerate replicates
    meta: dict = field(default_factory=dict)

    def R(self, cell: Cell) -> int:
        T, _, _, rho = cell
        return self.replications[(T, rho)]

    def rate(self, cell: Cell) -> float:
        return self.counts[cell] / self.R(cell)

    def se(self, cell: Cell) -> float:
        r = self.rate(cell)
        return math.sqrt(r * (1.0 - r) / self.R(cell))

    def cells(self) -> list:
        return sorted(self.counts)

    def merge(self, other: "McTable") -> "McTable":
        counts = dict(self.counts)
        for k, v in other.counts.items():
            counts[k] = counts.get(k, 0) + v
        reps = dict(self.replications)
        for k, v in other.replications.items():
            reps[k] = reps.get(k, 0) + v
        failed = dict(self.failed)
        for k, v in other.failed.items():
            failed[k] = failed.get(k, 0) + v
        return McTable(counts=counts, replications=reps, failed=failed, meta=dict(self.meta))

    def rows(self) -> list[dict]:
        seed = self.meta.get("spec", {}).get("seed")
        return [
            {"T": c[0], "q": c[1], "alpha": c[2], "rho": c[3], "rate": self.rate(c),
             "se": self.se(c), "R": self.R(c), "seed": seed}
            for c in self.cells()
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["T", "q", "alpha", "rho", "rate", "se", "R", "seed"],
                           lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({**row, "rate": repr(row["rate"]), "se": repr(row["se"])})
        return buf.getvalue()

    def manifest(self) -> dict:
        return {**self.meta, "failed": {f"{k[0]},{k[1]}": v for k, v in self.failed.items()}}


def _mbb_config(spec: ExperimentSpec, pspec, seed: int) -> MbbConfig:
    return MbbConfig(
        block_size=spec.block_size,
        replicates=spec.boot_replicates,
        alpha=spec.alphas[0],
        hurst_mode=HurstMode(spec.hurst_mode),
        hurst=pspec.hurst if spec.assume_true_hurst else None,
        seed=derive_seed(seed, "bootstrap"),
    )


def _run_chunk(spec: ExperimentSpec, T: int, rho: float, reps: Sequence[int]) -> McTable:
    pspec = process_spec(spec.process, spec.param, rho, T, **spec.process_options)
    counts = {(T, q, a, rho): 0 for q in spec.qs for a in spec.alphas}
    failed = 0
    for rep in reps:
        seed = spec.data_seed(T, rho, rep)
        pair = simulate(pspec, seed)
        try:
            results = rct_test_many(pair, spec.qs, _mbb_config(spec, pspec, seed))
        except DegenerateStatisticError:
            failed += 1
            continue
        for q, res in results.items():
            for a in spec.alphas:
                counts[(T, q, a, rho)] += res.reject_at(a)
    return McTable(counts=counts, replications={(T, rho): len(reps)},
                   failed={(T, rho): failed})


def _spec_dict(spec: ExperimentSpec) -> dict:
    return json.loads(json.dumps(asdict(spec), default=str))


def run_size_power(spec: ExperimentSpec, replicates: Optional[Iterable[int]] = None,
                   workers: int = 1, chunk: int = 50) -> McTable:
    """Rejection rates of the bootstrap test on every grid cell of ``spec``.

    ``replicates`` restricts the run to a subset of replicate indices (a
    shard); merging the tables of disjoint shards gives the full table.
    """
    spec.validate()
    reps = list(range(spec.replications)) if replicates is None else list(replicates)
    jobs = [(T, rho, reps[i:i + chunk]) for T in spec.Ts for rho in spec.rhos
            for i in range(0, len(reps), chunk)]
    t0 = time.time()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, [spec] * len(jobs), *zip(*jobs)))
    else:
        parts = [_run_chunk(spec, *job) for job in jobs]
    table = McTable(counts={}, replications={})
    for part in parts:
        table = table.merge(part)
    table.meta = {"spec": _spec_dict(spec), "replicates": [min(reps), max(reps)] if reps else [],
                  "wall_time_s": time.time() - t0, "version": _version()}
    return table


def _version() -> str:
    from . import __version__
    return __version__


# --- statistic sweep ------------------------------------------------------

@dataclass
class SweepCurve:
    kind: str
    T: int
    q: int
    R: int
    points: dict  # (param, rho) -> (mean M, sd M)

    def rows(self) -> list[dict]:
        return [{"param": k[0], "rho": k[1], "mean": v[0], "sd": v[1]}
                for k, v in sorted(self.points.items())]


def sweep_statistics(kind: str, param: float, rho: float, T: int, q: int, R: int, seed: int,
                     hurst: str = "true", **process_options) -> np.ndarray:
    """M for R independent pairs at one grid point (no bootstrap)."""
    pspec = process_spec(kind, param, rho, T, **process_options)
    seeds = [derive_seed(seed, kind, float(param), float(rho), int(T), r) for r in range(R)]
    x, y = simulate_batch(pspec, seeds)
    parts = row_parts(x, y, q)
    if hurst == "true":
        Hx, Hy = pspec.hurst
    elif hurst == "dfa":
        Hx, Hy = hurst_rows(x, HurstConfig()), hurst_rows(y, HurstConfig())
    else:
        raise ValueError(f"hurst must be 'true' or 'dfa', got {hurst!r}")
    return parts.M(q, Hx, Hy)


def default_sweep_grid(kind: str) -> np.ndarray:
    if kind == "ar1":
        return np.round(np.arange(0.0, 0.91, 0.1), 10)
    if kind == "arfima":
        return np.round(np.arange(0.0, 0.451, 0.05), 10)
    raise ValueError(f"sweep kind must be 'ar1' or 'arfima', got {kind!r}")


def run_statistic_sweep(kind: str, grid: Optional[Sequence[float]] = None,
                        rhos: Sequence[float] = (0.2, 0.4, 0.6, 0.8, 1.0),
                        T: int = 5000, q: int = 30, R: int = 1000, seed: int = 0,
                        hurst: str = "true") -> SweepCurve:
    if min(T, q, R) < 1:
        raise ValueError("T, q and R must be >= 1")
    grid = default_sweep_grid(kind) if grid is None else grid
    points = {}
    for p in grid:
        for rho in rhos:
            m = sweep_statistics(kind, float(p), float(rho), T, q, R, seed, hurst=hurst)
            m = m[np.isfinite(m)]
            points[(float(p), float(rho))] = (float(m.mean()), float(m.std(ddof=1)) if len(m) > 1 else 0.0)
    return SweepCurve(kind=kind, T=T, q=q, R=R, points=points)


# --- partial-sum covariance scaling ---------------------------------------

@dataclass
class ScalingResult:
    slope: float
    ns: np.ndarray
    cov: np.ndarray
    t_stats: np.ndarray  # cov / standard error, per n


def run_scaling_check(spec, ns: Sequence[int], R: int, seed: int) -> ScalingResult:
    """Ensemble covariance of the endpoint partial sums ``X_n, Y_n`` and its log-log slope.

    One path of length ``max(ns)`` per replicate supplies every ``n`` (the
    processes are stationary). The processes are not demeaned: the
    propositions concern zero-mean processes and their raw partial sums.
    """
    ns = np.unique(np.asarray(ns, dtype=int))
    if len(ns) < 4:
        raise ValueError("need at least 4 grid points")
    if ns.min() < 1:
        raise ValueError("grid values must be >= 1")
    n_max = int(ns.max())
    if spec.T < n_max:
        spec = type(spec)(**{**asdict(spec), "T": n_max})
    X = np.empty((R, len(ns)))
    Y = np.empty((R, len(ns)))
    step = 200
    for lo in range(0, R, step):
        seeds = [derive_seed(seed, "scaling", r) for r in range(lo, min(R, lo + step))]
        x, y = simulate_batch(spec, seeds)
        X[lo: lo + len(seeds)] = np.cumsum(x[:, :n_max], axis=1)[:, ns - 1]
        Y[lo: lo + len(seeds)] = np.cumsum(y[:, :n_max], axis=1)[:, ns - 1]
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    prod = Xc * Yc
    cov = prod.sum(axis=0) / (R - 1)
    se = prod.std(axis=0, ddof=1) / math.sqrt(R)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = cov / se
        slope = np.polyfit(np.log(ns), np.log(cov), 1)[0] if np.all(cov > 0) else float("nan")
    return ScalingResult(slope=float(slope), ns=ns, cov=cov, t_stats=t)
