"""Command-line entry point: ``bench``, ``verify``, ``sim`` and ``plot``.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import bench, plot, verify
from .bench import BenchConfig, DEFAULT_GRID
from .stall_sim import occupancy_sweep
from .strategies import STRATEGY_NAMES, AdaptiveParams, ElasticParams, FunnelParams
from .workload import Mode

log = logging.getLogger("bathroom_hash")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SIM_HEADER = ("n", "occupancy", "trials", "mean_probes", "stddev_probes", "max_probes", "found_rate")


class UsageError(Exception):
    pass


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _name_list(text: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    for n in names:
        if n not in STRATEGY_NAMES:
            raise argparse.ArgumentTypeError(f"unknown strategy {n!r}")
    return names


def _seed(text: str) -> int:
    return int(text, 0)


# flag name -> (argparse type, BenchOptions field)
BENCH_FLAGS: dict[str, tuple[Any, str]] = {
    "strategies": (_name_list, "strategies"),
    "entries": (int, "n_entries"),
    "load-factors": (_float_list, "load_factors"),
    "trials": (int, "trials"),
    "seed": (_seed, "seed"),
    "mode": (str, "mode"),
    "capacity": (int, "capacity"),
    "unsuccessful-fraction": (float, "unsuccessful_fraction"),
    "theta": (int, "theta"),
    "delta": (int, "delta"),
    "growth": (str, "growth"),
    "t1": (int, "t1"),
    "t2": (int, "t2"),
    "levels": (int, "levels"),
    "shrink": (float, "shrink"),
    "budget": (int, "budget_beta"),
    "jobs": (int, "jobs"),
    "out": (str, "out"),
    "hist": (str, "hist"),
    "report": (str, "report"),
}


@dataclass
class BenchOptions:
    """Flat view of every ``bench`` setting, before validation."""

    strategies: tuple[str, ...] = STRATEGY_NAMES
    n_entries: int = 10000
    load_factors: tuple[float, ...] = DEFAULT_GRID
    trials: int = 100
    seed: int = 42
    mode: str = "fixed-n"
    capacity: int | None = None
    unsuccessful_fraction: float = 0.0
    theta: int = 2
    delta: int = 1
    growth: str = "additive"
    t1: int = 4
    t2: int = 16
    levels: int = 3
    shrink: float = 0.5
    budget_beta: int = 4
    jobs: int = 1
    out: str = "results.csv"
    hist: str = "histogram.csv"
    report: str | None = None

    def to_config(self) -> BenchConfig:
        try:
            return BenchConfig(
                strategies=tuple(self.strategies),
                n_entries=self.n_entries,
                load_factors=tuple(self.load_factors),
                trials=self.trials,
                seed=self.seed,
                mode=Mode(self.mode),
                capacity=self.capacity,
                unsuccessful_fraction=self.unsuccessful_fraction,
                adaptive=AdaptiveParams(self.theta, self.delta, bench.parse_growth(self.growth)),
                elastic=ElasticParams(self.t1, self.t2),
                funnel=FunnelParams(self.levels, self.shrink, self.budget_beta),
                jobs=self.jobs,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a flat JSON object")
    out = {}
    for raw_key, value in data.items():
        flag = raw_key.replace("_", "-")
        if flag not in BENCH_FLAGS:
            raise UsageError(f"unknown config key {raw_key!r}")
        conv, dest = BENCH_FLAGS[flag]
        try:
            out[dest] = _coerce(conv, value)
        except (ValueError, TypeError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"bad value for {raw_key!r}: {exc}") from None
    return out


def _coerce(conv, value):
    if value is None and conv is str:
        return None
    if isinstance(value, list):
        value = ",".join(str(v) for v in value)
    if isinstance(value, str):
        return conv(value)
    if isinstance(value, bool):
        raise ValueError("booleans are not accepted")
    if conv in (int, _seed):
        if not isinstance(value, int):
            raise ValueError(f"expected an integer, got {value!r}")
        return value
    if conv is float and isinstance(value, (int, float)):
        return float(value)
    if conv in (_float_list, _name_list):
        return conv(str(value))
    raise ValueError(f"unexpected value {value!r}")


def parse_config(args: argparse.Namespace) -> BenchOptions:
    """Defaults, then the JSON config file, then explicit flags."""
    opts = BenchOptions()
    if getattr(args, "config", None):
        for dest, value in _load_config_file(args.config).items():
            setattr(opts, dest, value)
    for flag, (_, dest) in BENCH_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            setattr(opts, dest, value)
    return opts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bathroom-bench",
        description="Adaptive-probing hash table benchmarks and self-checks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="load-factor sweep over probing strategies")
    p.add_argument("--config", help="flat JSON file of flag values; flags override it")
    for flag, (conv, dest) in BENCH_FLAGS.items():
        kwargs: dict[str, Any] = {"type": conv, "dest": dest, "default": None}
        if flag == "mode":
            kwargs["choices"] = [m.value for m in Mode]
        if flag == "growth":
            kwargs["choices"] = ["additive", "multiplicative"]
        p.add_argument(f"--{flag}", **kwargs)

    p = sub.add_parser("verify", help="run invariant and oracle suites")
    p.add_argument("--suite", default="all", choices=["all", *verify.SUITES])
    p.add_argument("--seed", type=_seed, default=7)

    p = sub.add_parser("sim", help="stall simulator occupancy sweep")
    p.add_argument("--size", type=int, default=1009)
    p.add_argument("--occupancy", type=_float_list, default=(0.0, *DEFAULT_GRID, 1.0))
    p.add_argument("--theta", type=int, default=2)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--growth", choices=["additive", "multiplicative"], default="additive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--out", default="sim.csv")

    p = sub.add_parser("plot", help="SVG chart of a results CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--metric", default="mean_probes", choices=plot.PLOTTABLE)
    p.add_argument("--op-kind", default="LookupHit")
    return parser


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_bench(opts: BenchOptions) -> int:
    config = opts.to_config()
    log.info("bench: %d row(s) planned", bench.expected_rows(config))
    t0 = time.perf_counter()
    rows, merged = bench.run_bench(config)
    log.info("bench: finished in %.1fs", time.perf_counter() - t0)
    _write(opts.out, bench.format_results(rows))
    _write(opts.hist, bench.format_histograms(config, merged))
    if opts.report:
        _write(opts.report, bench.comparison_report(bench.compare_strategies(rows)))
    return EXIT_OK


def cmd_verify(suite: str, seed: int) -> int:
    names = list(verify.SUITES) if suite == "all" else [suite]
    return EXIT_OK if verify.run_suites(names, seed) else EXIT_VERIFY


def cmd_sim(args: argparse.Namespace) -> int:
    if args.size < 1 or args.trials < 1:
        raise UsageError("size and trials must be positive")
    if any(not 0.0 <= f <= 1.0 for f in args.occupancy):
        raise UsageError("occupancy values must lie in [0, 1]")
    try:
        params = AdaptiveParams(args.theta, args.delta, bench.parse_growth(args.growth))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = occupancy_sweep(args.size, args.occupancy, args.trials, args.seed, params)
    lines = [",".join(SIM_HEADER)]
    for r in rows:
        lines.append(",".join(str(v) if not isinstance(v, float) else repr(v) for v in (
            r.n, r.occupancy, r.trials, r.mean_probes, r.stddev_probes, r.max_probes, r.found_rate,
        )))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    try:
        with open(args.input, newline="", encoding="utf-8") as fh:
            series = plot.read_series(fh, args.metric, args.op_kind)
    except plot.SchemaError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, plot.render_svg(series, args.metric, args.op_kind))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        if args.command == "bench":
            return cmd_bench(parse_config(args))
        if args.command == "verify":
            return cmd_verify(args.suite, args.seed)
        if args.command == "sim":
            return cmd_sim(args)
        return cmd_plot(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
