"""Monte Carlo harness: per-drop evaluation of all schemes, sweeps, CSV, CLI.

Schemes per drop, all sharing one channel realization:

  Proposed : balancing design at the configured weight
  ConvRis  : balancing design with weight 0 (serving cell only)
  RandRis  : uniform random phases
  NoRis    : cell 2 sees the direct links only; cell 1, being fully blocked,
             is reported as rate 0

Per-drop seeds are a fixed hash-mix of (master seed, sweep index, drop
index), so results are independent of worker count and of execution order.
The RISBAL_THREADS environment variable caps worker parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .beamform import composite_cell1, composite_cell2, slnr_beamformer
from .channel import gen_channel_set
from .config import ScenarioConfig, load_config
from .errors import ConfigError, NumericalError, RisbalError
from .manifold import RcgConfig
from .metrics import evaluate
from .ris_design import design_balanced, design_random

__all__ = [
    "Scheme",
    "Cell",
    "SweepParam",
    "SweepResult",
    "run_drop",
    "run_sweep",
    "write_csv",
    "cli_main",
]


class Scheme(Enum):
    PROPOSED = "Proposed"
    CONV_RIS = "ConvRis"
    RAND_RIS = "RandRis"
    NO_RIS = "NoRis"


class Cell(Enum):
    CELL1 = "Cell1"
    CELL2 = "Cell2"


class SweepParam(Enum):
    TRANSMIT_POWER_DBM = "txpower"
    LAMBDA_DB = "lambda"


@dataclass(frozen=True)
class SweepResult:
    scheme: Scheme
    sweep_value: float
    cell: Cell
    mean_sum_rate: float
    std_err: float
    num_drops: int


def run_drop(
    cfg: ScenarioConfig,
    drop_seed: int,
    rcg_cfg: RcgConfig | None = None,
) -> dict[Scheme, tuple[float, float]]:
    """One channel realization, all four schemes; returns (R1, R2) per scheme."""
    cfg.validate()
    chan_ss, phase_ss = np.random.SeedSequence(int(drop_seed)).spawn(2)
    channels = gen_channel_set(cfg, np.random.default_rng(chan_ss))

    power = cfg.transmit_power_w
    phis = {
        Scheme.PROPOSED: design_balanced(channels, cfg.lambda_linear, rcg_cfg)[0],
        Scheme.CONV_RIS: design_balanced(channels, 0.0, rcg_cfg)[0],
        Scheme.RAND_RIS: design_random(cfg.ris_array.size, np.random.default_rng(phase_ss)),
    }

    direct_rows = np.conj(channels.h_d2)
    # BS 2 designs with direct-link knowledge only
    F2 = slnr_beamformer(direct_rows, power, channels.noise_var_2)

    results: dict[Scheme, tuple[float, float]] = {}
    for scheme, phi in phis.items():
        rows1 = composite_cell1(phi, channels)
        F1 = slnr_beamformer(rows1, power, channels.noise_var_1)
        r1 = evaluate(rows1, F1, channels.noise_var_1).sum_rate
        rows2 = composite_cell2(phi, channels)
        r2 = evaluate(rows2, F2, channels.noise_var_2).sum_rate
        results[scheme] = (r1, r2)

    r2_direct = evaluate(direct_rows, F2, channels.noise_var_2).sum_rate
    results[Scheme.NO_RIS] = (0.0, r2_direct)
    return results


def drop_seed_for(seed: int, sweep_index: int, drop_index: int, crn: bool = False) -> int:
    """Deterministic per-drop seed; with crn the sweep index is left out so
    every sweep value reuses the same drops."""
    key = [seed, drop_index] if crn else [seed, sweep_index, drop_index]
    return int(np.random.SeedSequence(key).generate_state(1, np.uint64)[0])


def _apply_sweep_value(cfg: ScenarioConfig, sweep: SweepParam, value: float) -> ScenarioConfig:
    if sweep is SweepParam.TRANSMIT_POWER_DBM:
        return replace(cfg, p_t_dbm=value)
    return replace(cfg, lambda_db=value)


def _resolve_workers(max_workers: int | None) -> int:
    if max_workers is None:
        env = os.environ.get("RISBAL_THREADS", "0")
        try:
            max_workers = int(env)
        except ValueError:
            raise ConfigError(f"RISBAL_THREADS must be an integer, got {env!r}")
    if max_workers < 0:
        raise ConfigError("worker count must be nonnegative")
    if max_workers == 0:
        max_workers = os.cpu_count() or 1
    return max_workers


def run_sweep(
    cfg: ScenarioConfig,
    sweep: SweepParam,
    values: list[float],
    crn: bool = False,
    max_workers: int | None = None,
    rcg_cfg: RcgConfig | None = None,
) -> list[SweepResult]:
    """Run num_drops independent drops per sweep value and aggregate.

    Drops execute in parallel; aggregation is ordered by drop index, so the
    output is byte-stable across worker counts.
    """
    if not values:
        raise ConfigError("sweep needs at least one value")
    cfg.validate()
    workers = _resolve_workers(max_workers)

    results: list[SweepResult] = []
    for si, value in enumerate(values):
        cfg_v = _apply_sweep_value(cfg, sweep, float(value))
        seeds = [drop_seed_for(cfg.seed, si, d, crn) for d in range(cfg.num_drops)]

        def one(seed: int) -> dict[Scheme, tuple[float, float]]:
            return run_drop(cfg_v, seed, rcg_cfg)

        if workers == 1:
            drops = [one(s) for s in seeds]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                drops = list(pool.map(one, seeds))

        for scheme in Scheme:
            for cell, idx in ((Cell.CELL1, 0), (Cell.CELL2, 1)):
                samples = np.array([d[scheme][idx] for d in drops])
                mean = float(samples.mean())
                if samples.size > 1:
                    std_err = float(samples.std(ddof=1) / np.sqrt(samples.size))
                else:
                    std_err = 0.0
                results.append(
                    SweepResult(
                        scheme=scheme,
                        sweep_value=float(value),
                        cell=cell,
                        mean_sum_rate=mean,
                        std_err=std_err,
                        num_drops=cfg.num_drops,
                    )
                )
    return results


def write_csv(results: list[SweepResult], path: str, sweep: SweepParam) -> None:
    """Emit results sorted by (sweep_value, scheme, cell), 9 significant digits."""
    ordered = sorted(results, key=lambda r: (r.sweep_value, r.scheme.value, r.cell.value))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["scheme", "cell", "sweep_param", "sweep_value",
             "mean_sum_rate_bps_hz", "std_err", "num_drops"]
        )
        for r in ordered:
            writer.writerow(
                [
                    r.scheme.value,
                    r.cell.value,
                    sweep.value,
                    f"{r.sweep_value:.9g}",
                    f"{r.mean_sum_rate:.9g}",
                    f"{r.std_err:.9g}",
                    r.num_drops,
                ]
            )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risbal",
        description="Monte Carlo sum-rate sweeps for the balancing reflection design",
        epilog="The NoRis scheme reports a cell-1 sum rate of 0 (cell 1 has no "
               "direct links). RISBAL_THREADS caps worker parallelism (0 = auto).",
    )
    parser.add_argument("--config", help="scenario config file (defaults used if omitted)")
    parser.add_argument(
        "--sweep",
        required=True,
        choices=[s.value for s in SweepParam],
        help="parameter to sweep",
    )
    parser.add_argument(
        "--values",
        required=True,
        help="comma-separated sweep values (dBm for txpower, dB for lambda)",
    )
    parser.add_argument("--drops", type=int, help="Monte Carlo drops per value")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument(
        "--crn",
        action="store_true",
        help="reuse the same drops across sweep values (variance reduction)",
    )
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        overrides = {}
        if args.drops is not None:
            overrides["num_drops"] = args.drops
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            cfg = replace(cfg, **overrides)
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"--values must be a comma-separated number list, got {args.values!r}")
        sweep = SweepParam(args.sweep)
        cfg.validate()
    except ConfigError as exc:
        print(f"risbal: config error: {exc}", file=sys.stderr)
        return 2

    try:
        results = run_sweep(cfg, sweep, values, crn=args.crn)
        write_csv(results, args.out, sweep)
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"risbal: numerical failure: {exc}", file=sys.stderr)
        return 3
    except RisbalError as exc:
        print(f"risbal: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"risbal: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(cli_main())
