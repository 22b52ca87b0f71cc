"""Command-line front end.

Subcommands: `bound` (analytical delay-violation bounds), `aoi`
(analytical age metrics), `simulate` (Monte Carlo), `sweep` (q2/w/P1
tradeoff grid), `optimize` (largest q2 meeting a delay target).

Scenarios come from a flat TOML file of unit-suffixed keys::

    p1_watts = 0.01
    p2_watts = 0.01
    r1_meters = 80.0
    r2_meters = 80.0
    path_loss_exponent = 4.0
    sigma2_watts = 1e-11
    gamma1_linear = 4.0            # or rate_r_nats_per_slot; both must agree
    gamma2_linear = 0.5
    lambda_nats_per_slot = 0.5
    rho_nats = 0.5
    q2 = 0.2

Without --config the built-in baseline scenario is used. Outputs are
byte-deterministic for a fixed seed: no timestamps, shortest round-trip
float formatting, LF line endings; non-finite numbers serialize as ""
(CSV) or null (JSON).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

try:
    import tomllib
except ImportError:                      # Python 3.10
    import tomli as tomllib

from . import presets
from .aoi import avg_aoi_from_interval, geometric_moments, renewal_interval_moments
from .channel import (ChannelParams, rate_from_threshold, success_prob_s2,
                      threshold_from_rate)
from .errors import BacklogOverflowError, ConfigError, NumericalError
from .explore import SWEEP_COLUMNS, max_sampling_rate, sweep_tradeoff
from .sim import SimConfig, replicate, run_simulation
from .snc import ArrivalEnvelope, OnOffService, delay_violation_bound

_SCENARIO_REQUIRED = frozenset({
    "p1_watts", "p2_watts", "r1_meters", "r2_meters", "path_loss_exponent",
    "sigma2_watts", "gamma2_linear", "lambda_nats_per_slot", "rho_nats", "q2",
})
_SCENARIO_OPTIONAL = frozenset({
    "gamma1_linear", "rate_r_nats_per_slot", "horizon_slots", "warmup_slots",
    "seed", "interference_mode", "delay_thresholds_slots", "backlog_ceiling_nats",
})
_TASK_KEYS = frozenset({
    "sweep_q2", "sweep_w_slots", "sweep_p1_watts",
    "optimize_w_slots", "optimize_epsilon",
})
_ALL_KEYS = _SCENARIO_REQUIRED | _SCENARIO_OPTIONAL | _TASK_KEYS

_DEFAULT_SWEEP_Q2 = tuple(round(0.1 * k, 1) for k in range(1, 10))


def _load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    unknown = sorted(set(data) - _ALL_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    missing = sorted(_SCENARIO_REQUIRED - set(data))
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")
    return data


def _number(cfg: dict, key: str, default=None) -> float:
    value = cfg.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def _integer(cfg: dict, key: str, default=None) -> int:
    value = cfg.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _number_list(cfg: dict, key: str) -> list[float]:
    value = cfg[key]
    if (not isinstance(value, list) or not value
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
        raise ConfigError(f"{key} must be a non-empty array of numbers, got {value!r}")
    return [float(v) for v in value]


def _integer_list(cfg: dict, key: str) -> list[int]:
    value = cfg[key]
    if (not isinstance(value, list) or not value
            or any(isinstance(v, bool) or not isinstance(v, int) for v in value)):
        raise ConfigError(f"{key} must be a non-empty array of integers, got {value!r}")
    return list(value)


def _resolve_rate(cfg: dict) -> tuple[float, float]:
    """(gamma1, rate_r) from whichever of the two keys are present."""
    has_gamma = "gamma1_linear" in cfg
    has_rate = "rate_r_nats_per_slot" in cfg
    if not (has_gamma or has_rate):
        raise ConfigError("need gamma1_linear or rate_r_nats_per_slot")
    if has_gamma and has_rate:
        gamma1 = _number(cfg, "gamma1_linear")
        rate = _number(cfg, "rate_r_nats_per_slot")
        implied = threshold_from_rate(rate)
        if not math.isclose(implied, gamma1, rel_tol=1e-6, abs_tol=1e-12):
            raise ConfigError(
                f"gamma1_linear={gamma1:g} and rate_r_nats_per_slot={rate:g} "
                f"disagree (rate implies gamma1={implied:g})")
        return gamma1, rate
    if has_gamma:
        gamma1 = _number(cfg, "gamma1_linear")
        return gamma1, rate_from_threshold(gamma1)
    rate = _number(cfg, "rate_r_nats_per_slot")
    return threshold_from_rate(rate), rate


def scenario_from_config(cfg: dict) -> SimConfig:
    gamma1, rate_r = _resolve_rate(cfg)
    mode = cfg.get("interference_mode", "persistent")
    if not isinstance(mode, str):
        raise ConfigError(f"interference_mode must be a string, got {mode!r}")
    mode = mode.replace("-", "_")
    thresholds = cfg.get("delay_thresholds_slots", [2, 3, 5])
    if not isinstance(thresholds, list):
        raise ConfigError("delay_thresholds_slots must be an array of integers")
    horizon = _integer(cfg, "horizon_slots", 1_000_000)
    try:
        channel = ChannelParams(
            p1=_number(cfg, "p1_watts"),
            p2=_number(cfg, "p2_watts"),
            r1=_number(cfg, "r1_meters"),
            r2=_number(cfg, "r2_meters"),
            theta=_number(cfg, "path_loss_exponent"),
            sigma2=_number(cfg, "sigma2_watts"),
            gamma1=gamma1,
            gamma2=_number(cfg, "gamma2_linear"),
        )
        return SimConfig(
            channel=channel,
            arrivals=ArrivalEnvelope(rho=_number(cfg, "rho_nats"),
                                     lam=_number(cfg, "lambda_nats_per_slot")),
            rate_r=rate_r,
            q2=_number(cfg, "q2"),
            horizon=horizon,
            warmup=_integer(cfg, "warmup_slots", horizon // 10),
            seed=_integer(cfg, "seed", presets.SEED_DEFAULT),
            interference_mode=mode,
            delay_thresholds=tuple(_integer_list({"delay_thresholds_slots": thresholds},
                                                 "delay_thresholds_slots")),
            backlog_ceiling=_number(cfg, "backlog_ceiling_nats", 1e9),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _load_scenario(args) -> tuple[SimConfig, dict]:
    cfg = _load_toml(args.config) if args.config else {}
    scenario = scenario_from_config(cfg) if cfg else presets.make_baseline_config()
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    return scenario, cfg


# ---------------------------------------------------------------------------
# output formatting

def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    return value


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_clean(record), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in record.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                writer.writerow([f"{key}[{sub}]", _cell(_clean(v))])
        else:
            writer.writerow([key, _cell(_clean(value))])
    return buf.getvalue()


def _render_table(columns, rows, fmt: str) -> str:
    if fmt == "json":
        records = [_clean(dict(zip(columns, row))) for row in rows]
        return json.dumps(records, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(_clean(v)) for v in row])
    return buf.getvalue()


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {output}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands

def _parse_w_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--w expects integers like '2,3,5', got {text!r}") from None


def _cmd_bound(args) -> int:
    scenario, _ = _load_scenario(args)
    ws = _parse_w_list(args.w) if args.w else list(scenario.delay_thresholds)
    if not ws:
        raise ConfigError("--w list is empty")
    service = OnOffService.from_channel(scenario.channel, scenario.q2,
                                        scenario.rate_r)
    rows = []
    for w in ws:
        if w < 0:
            raise ConfigError(f"delay threshold must be nonnegative, got {w}")
        b = delay_violation_bound(scenario.arrivals, service, w)
        rows.append((w, b.value, b.s_star, b.stable))
    _write(_render_table(("w", "pv_bound", "s_star", "stable"), rows,
                         args.format or "csv"), args.output)
    return 0


def _cmd_aoi(args) -> int:
    scenario, _ = _load_scenario(args)
    if scenario.q2 <= 0.0:
        raise ConfigError("aoi requires q2 > 0")
    p2 = success_prob_s2(scenario.channel)
    moments = geometric_moments(scenario.q2)
    mean_x, second_x = renewal_interval_moments(moments, p2)
    record = {
        "avg_aoi": avg_aoi_from_interval(mean_x, second_x),
        "p2": p2,
        "mean_t": moments.mean_t,
        "second_t": moments.second_t,
        "mean_x": mean_x,
        "second_x": second_x,
    }
    _write(_render_record(record, args.format or "json"), args.output)
    return 0


def _cmd_simulate(args) -> int:
    scenario, _ = _load_scenario(args)
    if args.reps < 1:
        raise ConfigError(f"--reps must be >= 1, got {args.reps}")
    if args.reps == 1:
        result = run_simulation(scenario, trace_path=args.trace)
    else:
        if args.trace:
            raise ConfigError("--trace requires --reps 1")
        result = replicate(scenario, args.reps)
    _write(_render_record(result.to_dict(), args.format or "json"), args.output)
    return 0


def _cmd_sweep(args) -> int:
    scenario, cfg = _load_scenario(args)
    q2s = _number_list(cfg, "sweep_q2") if "sweep_q2" in cfg else list(_DEFAULT_SWEEP_Q2)
    ws = (_integer_list(cfg, "sweep_w_slots") if "sweep_w_slots" in cfg
          else list(scenario.delay_thresholds))
    p1s = (_number_list(cfg, "sweep_p1_watts") if "sweep_p1_watts" in cfg
           else [scenario.channel.p1])
    points = sweep_tradeoff(scenario, q2s, ws, p1s,
                            with_sim=args.with_sim, n_reps=args.reps)
    _write(_render_table(SWEEP_COLUMNS, [p.as_row() for p in points],
                         args.format or "csv"), args.output)
    return 0


def _cmd_optimize(args) -> int:
    scenario, cfg = _load_scenario(args)
    if args.w is not None:
        w = args.w
    elif "optimize_w_slots" in cfg:
        w = _integer(cfg, "optimize_w_slots")
    else:
        raise ConfigError("optimize needs --w or the optimize_w_slots key")
    if args.eps is not None:
        eps = args.eps
    elif "optimize_epsilon" in cfg:
        eps = _number(cfg, "optimize_epsilon")
    else:
        raise ConfigError("optimize needs --eps or the optimize_epsilon key")
    try:
        result = max_sampling_rate(scenario, w, eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    record = {
        "q2_max": result.q2_max,
        "aoi_at_max": result.aoi_at_max,
        "feasible": result.feasible,
        "iterations": result.iterations,
    }
    _write(_render_record(record, args.format or "json"), args.output)
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="TOML scenario file (default: built-in baseline)")
    common.add_argument("--output", metavar="FILE",
                        help="write result here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"),
                        help="output format (default: csv for tables, json otherwise)")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--reps", type=int, default=1,
                        help="independent replications for simulated metrics")
    common.add_argument("--with-sim", action="store_true",
                        help="add empirical columns to analytical outputs")

    parser = argparse.ArgumentParser(
        prog="macaoi",
        description="Delay bounds, age of information, and simulation for a "
                    "two-source multiple access channel.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common],
                       help="analytical delay-violation bounds")
    p.add_argument("--w", metavar="SLOTS[,SLOTS...]",
                   help="delay thresholds, comma-separated "
                        "(default: scenario thresholds)")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("aoi", parents=[common],
                       help="analytical age-of-information metrics")
    p.set_defaults(func=_cmd_aoi)

    p = sub.add_parser("simulate", parents=[common],
                       help="slot-level Monte Carlo run")
    p.add_argument("--trace", metavar="FILE",
                   help="per-slot CSV trace (single-rep runs only)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", parents=[common],
                       help="tradeoff grid over q2, w, and P1")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize", parents=[common],
                       help="largest q2 meeting a delay-violation target")
    p.add_argument("--w", type=int, metavar="SLOTS",
                   help="delay threshold (overrides optimize_w_slots)")
    p.add_argument("--eps", type=float, metavar="PROB",
                   help="violation budget (overrides optimize_epsilon)")
    p.set_defaults(func=_cmd_optimize)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BacklogOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
