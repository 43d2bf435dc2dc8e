"""Command line front-end.

Exit codes: 0 ran, 2 input error, 3 degenerate statistic.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .bootstrap import BootstrapInstabilityError, HurstMode, MbbConfig
from .estimators import DegenerateStatisticError
from .finance import IngestOptions, ingest, write_daily
from .montecarlo import ExperimentSpec, run_scaling_check, run_size_power, run_statistic_sweep, process_spec
from .reports import CCF_FIELDS, SWEEP_FIELDS, ccf_table, q_sweep, read_pair, write_rows

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 2, 3

log = logging.getLogger("rctest")


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(","))


def _ints(text: str) -> tuple:
    return tuple(int(v) for v in text.split(","))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="worker processes for Monte Carlo runs")
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def _boot_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--B", type=int, default=1000, help="bootstrap replicates")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--block-size", type=int, default=None)
    p.add_argument("--hurst-mode", choices=[m.value for m in HurstMode], default="reestimate")
    p.add_argument("--hurst", type=float, nargs=2, metavar=("HX", "HY"), default=None,
                   help="use these Hurst exponents for the observed statistic")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="rctest", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", parents=[common], help="bootstrap RCT on a pair file")
    p.add_argument("pair_file", type=Path)
    p.add_argument("--q", type=int, required=True)
    _boot_args(p)

    p = sub.add_parser("sweep", parents=[common], help="RCT over a range of q")
    p.add_argument("pair_file", type=Path)
    p.add_argument("--q-min", type=int, default=1)
    p.add_argument("--q-max", type=int, default=100)
    _boot_args(p)

    p = sub.add_parser("ccf", parents=[common], help="cross-correlation table")
    p.add_argument("pair_file", type=Path)
    p.add_argument("--max-lag", type=int, default=100)

    p = sub.add_parser("ingest", parents=[common], help="intraday prices -> daily records")
    p.add_argument("intraday_file", type=Path)
    p.add_argument("--freq", type=int, default=5, help="grid spacing in minutes")
    p.add_argument("--min-bars", type=int, default=20)
    p.add_argument("--detrend-order", type=int, default=2)
    p.add_argument("--overnight", action="store_true", help="include overnight return in RV")

    p = sub.add_parser("mc-size-power", parents=[common], help="size/power table")
    p.add_argument("--process", choices=("noise", "ar1", "arfima"), default="noise")
    p.add_argument("--param", type=float, default=0.0, help="AR coefficient or d")
    p.add_argument("--rhos", type=_floats, default=(0.5, 0.9))
    p.add_argument("--Ts", type=_ints, default=(500, 1000, 5000))
    p.add_argument("--qs", type=_ints, default=(1, 5, 10, 30))
    p.add_argument("--alphas", type=_floats, default=(0.01, 0.05, 0.1))
    p.add_argument("--R", type=int, default=1000)
    p.add_argument("--B", type=int, default=1000)
    p.add_argument("--hurst-mode", choices=[m.value for m in HurstMode], default="reestimate")
    p.add_argument("--assume-true-hurst", action="store_true")
    p.add_argument("--block-size", type=int, default=None)
    p.add_argument("--shard", default=None, metavar="I/N", help="run replicate shard I of N")

    p = sub.add_parser("mc-fig1", parents=[common], help="mean/sd of M over a parameter grid")
    p.add_argument("--kind", choices=("ar1", "arfima"), default="ar1")
    p.add_argument("--T", type=int, default=5000)
    p.add_argument("--q", type=int, default=30)
    p.add_argument("--R", type=int, default=1000)
    p.add_argument("--rhos", type=_floats, default=(0.2, 0.4, 0.6, 0.8, 1.0))
    p.add_argument("--grid", type=_floats, default=None)
    p.add_argument("--hurst", choices=("true", "dfa"), default="true")

    p = sub.add_parser("mc-scaling", parents=[common], help="partial-sum covariance scaling")
    p.add_argument("--kind", choices=("ar1", "arfima"), default="arfima")
    p.add_argument("--param", type=float, default=0.4)
    p.add_argument("--rho", type=float, default=0.9)
    p.add_argument("--n-min", type=int, default=100)
    p.add_argument("--n-max", type=int, default=10_000)
    p.add_argument("--n-points", type=int, default=9)
    p.add_argument("--R", type=int, default=2000)
    p.add_argument("--method", choices=("circulant", "truncated"), default="circulant")
    return ap


def _mbb(args) -> MbbConfig:
    return MbbConfig(block_size=args.block_size, replicates=args.B, alpha=args.alpha,
                     hurst_mode=args.hurst_mode, hurst=args.hurst, seed=args.seed)


def _emit(args, rows: list[dict], fields: list[str], manifest: dict) -> None:
    if args.format == "json":
        text = json.dumps({"rows": rows, "manifest": manifest}, indent=2, default=_jsonable)
        if args.out:
            args.out.write_text(text + "\n")
        else:
            print(text)
        return
    if args.out:
        write_rows(rows, fields, args.out)
        Path(str(args.out) + ".manifest.json").write_text(
            json.dumps(manifest, indent=2, default=_jsonable) + "\n")
    else:
        write_rows(rows, fields, sys.stdout)


def _jsonable(v):
    if hasattr(v, "item"):
        return v.item()
    if hasattr(v, "value"):
        return v.value
    return str(v)


def _manifest(args, **extra) -> dict:
    opts = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    return {"version": __version__, "command": args.command, "options": opts, **extra}


def cmd_test(args) -> None:
    pair = read_pair(args.pair_file)
    rows = q_sweep(pair, [args.q], _mbb(args))
    _emit(args, rows, SWEEP_FIELDS, _manifest(args, mbb=asdict(_mbb(args))))


def cmd_sweep(args) -> None:
    pair = read_pair(args.pair_file)
    hi = min(args.q_max, len(pair) - 2)
    rows = q_sweep(pair, range(args.q_min, hi + 1), _mbb(args))
    _emit(args, rows, SWEEP_FIELDS, _manifest(args, mbb=asdict(_mbb(args))))


def cmd_ccf(args) -> None:
    pair = read_pair(args.pair_file)
    _emit(args, ccf_table(pair, args.max_lag), CCF_FIELDS, _manifest(args))


def cmd_ingest(args) -> None:
    opts = IngestOptions(freq_minutes=args.freq, min_bars=args.min_bars,
                         detrend_order=args.detrend_order, overnight=args.overnight)
    df = ingest(args.intraday_file, opts)
    if args.format == "csv" and args.out:
        write_daily(df, args.out)
        Path(str(args.out) + ".manifest.json").write_text(
            json.dumps(_manifest(args, ingest=asdict(opts)), indent=2) + "\n")
    else:
        rows = df.astype(object).where(df.notna(), None).to_dict("records")
        _emit(args, rows, list(df.columns), _manifest(args, ingest=asdict(opts)))


def cmd_mc_size_power(args) -> None:
    spec = ExperimentSpec(process=args.process, param=args.param, rhos=args.rhos, Ts=args.Ts,
                          qs=args.qs, alphas=args.alphas, replications=args.R, seed=args.seed,
                          boot_replicates=args.B, hurst_mode=args.hurst_mode,
                          assume_true_hurst=args.assume_true_hurst, block_size=args.block_size)
    reps = None
    if args.shard:
        i, n = (int(v) for v in args.shard.split("/"))
        if not 0 <= i < n:
            raise ValueError("shard must be I/N with 0 <= I < N")
        reps = range(i, args.R, n)
    table = run_size_power(spec, replicates=reps, workers=args.threads)
    _emit(args, table.rows(), ["T", "q", "alpha", "rho", "rate", "se", "R", "seed"], table.manifest())


def cmd_mc_fig1(args) -> None:
    curve = run_statistic_sweep(args.kind, grid=args.grid, rhos=args.rhos, T=args.T, q=args.q,
                                R=args.R, seed=args.seed, hurst=args.hurst)
    _emit(args, curve.rows(), ["param", "rho", "mean", "sd"], _manifest(args))


def cmd_mc_scaling(args) -> None:
    import numpy as np

    opts = {"method": args.method} if args.kind == "arfima" else {}
    spec = process_spec(args.kind, args.param, args.rho, args.n_max, **opts)
    ns = np.unique(np.round(np.geomspace(args.n_min, args.n_max, args.n_points)).astype(int))
    res = run_scaling_check(spec, ns, args.R, args.seed)
    rows = [{"n": int(n), "cov": float(c), "t": float(t)} for n, c, t in zip(res.ns, res.cov, res.t_stats)]
    _emit(args, rows, ["n", "cov", "t"], _manifest(args, slope=res.slope))
    log.info("slope %.4f", res.slope)


COMMANDS = {
    "test": cmd_test, "sweep": cmd_sweep, "ccf": cmd_ccf, "ingest": cmd_ingest,
    "mc-size-power": cmd_mc_size_power, "mc-fig1": cmd_mc_fig1, "mc-scaling": cmd_mc_scaling,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (DegenerateStatisticError, BootstrapInstabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
