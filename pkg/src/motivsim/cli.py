"""Command-line entry point: run scenarios, replay traces, launch the service.

Exit codes: 0 success, 2 unknown scenario, 3 unwritable output,
4 validation failure, 5 replay mismatch.  Seeds default to the scenario's
own fixed seed, never the clock, so bare invocations reproduce.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

from .harness import (
    Simulation,
    compute_metrics,
    metrics_to_json,
    trace_from_jsonl,
    trace_to_csv,
    trace_to_jsonl,
    verify_trace,
)
from .scenarios import Scenario, ScenarioError, builtin_scenario, list_scenarios, load_scenario

EXIT_OK = 0
EXIT_UNKNOWN_SCENARIO = 2
EXIT_UNWRITABLE = 3
EXIT_VALIDATION = 4
EXIT_MISMATCH = 5

SEED_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")


def _err(message: str) -> None:
    print(f"motivsim: {message}", file=sys.stderr)


def _load(name_or_path: str) -> Scenario:
    """Resolve a built-in name or a scenario file path."""
    try:
        return builtin_scenario(name_or_path)
    except KeyError:
        pass
    path = Path(name_or_path)
    if not path.is_file():
        raise KeyError(name_or_path)
    return load_scenario(path.read_text(), name=path.stem)


def _seeds(args: argparse.Namespace, scenario: Scenario) -> list[int]:
    if args.seeds is not None:
        match = SEED_RANGE.match(args.seeds)
        if match is None:
            raise ScenarioError("seeds: must look like A..B")
        lo, hi = int(match.group(1)), int(match.group(2))
        if hi < lo:
            raise ScenarioError("seeds: range end below start")
        return list(range(lo, hi + 1))
    if args.seed is not None:
        return [args.seed]
    return [scenario.seed]


def _out_dir(args: argparse.Namespace) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(os.environ.get("MOTIVSIM_OUT", "out"))


def cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = _load(args.scenario)
    except KeyError:
        _err(f"unknown scenario: {args.scenario}")
        return EXIT_UNKNOWN_SCENARIO
    except ScenarioError as exc:
        _err(str(exc))
        return EXIT_VALIDATION

    try:
        seeds = _seeds(args, scenario)
    except ScenarioError as exc:
        _err(str(exc))
        return EXIT_VALIDATION

    root = _out_dir(args)
    for seed in seeds:
        out = root / f"seed-{seed}" if len(seeds) > 1 else root
        simulation = Simulation(scenario, seed)
        records = simulation.run()
        metrics = compute_metrics(records, scenario, seed)
        try:
            out.mkdir(parents=True, exist_ok=True)
            if args.format in ("jsonl", "both"):
                (out / "trace.jsonl").write_text(trace_to_jsonl(records, scenario, seed))
            if args.format in ("csv", "both"):
                (out / "trace.csv").write_text(trace_to_csv(records))
            (out / "metrics.json").write_text(metrics_to_json(metrics))
        except OSError as exc:
            _err(f"cannot write output: {exc}")
            return EXIT_UNWRITABLE
        print(f"{scenario.name} seed {seed}: {scenario.total_ticks} ticks -> {out}")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    path = Path(args.trace)
    try:
        text = path.read_text()
    except OSError as exc:
        _err(f"cannot read trace: {exc}")
        return EXIT_VALIDATION
    if args.verify:
        try:
            ok, line = verify_trace(text)
        except (ValueError, ScenarioError) as exc:
            _err(f"invalid trace: {exc}")
            return EXIT_VALIDATION
        if not ok:
            _err(f"trace mismatch at line {line}")
            return EXIT_MISMATCH
        print(f"{path}: verified, trace is reproducible")
        return EXIT_OK
    try:
        scenario, seed, records = trace_from_jsonl(text)
    except (ValueError, KeyError, TypeError, ScenarioError) as exc:
        _err(f"invalid trace: {exc}")
        return EXIT_VALIDATION
    last = records[-1] if records else None
    print(f"{scenario.name} seed {seed}: {len(records)} records")
    if last is not None:
        alphas = " ".join(f"{k}={v:.4f}" for k, v in last.alpha.items())
        print(f"final tick {last.tick}: behavior={last.behavior} {alphas}")
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    path = Path(args.trace)
    try:
        scenario, seed, records = trace_from_jsonl(path.read_text())
    except OSError as exc:
        _err(f"cannot read trace: {exc}")
        return EXIT_VALIDATION
    except (ValueError, KeyError, TypeError, ScenarioError) as exc:
        _err(f"invalid trace: {exc}")
        return EXIT_VALIDATION
    text = metrics_to_json(compute_metrics(records, scenario, seed))
    if args.out is not None:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            _err(f"cannot write output: {exc}")
            return EXIT_UNWRITABLE
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import asyncio

    from .service import run_service

    try:
        scenario = _load(args.scenario)
    except KeyError:
        _err(f"unknown scenario: {args.scenario}")
        return EXIT_UNKNOWN_SCENARIO
    except ScenarioError as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    try:
        asyncio.run(
            run_service(
                scenario,
                host=args.host,
                port=args.port,
                seed=args.seed,
                tick_rate=args.tick_rate,
                start_paused=args.paused,
            )
        )
    except OSError as exc:
        _err(f"cannot listen on {args.host}:{args.port}: {exc}")
        return 1
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_list_scenarios(args: argparse.Namespace) -> int:
    for name in list_scenarios():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motivsim",
        description="Deterministic animat action-selection simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write trace + metrics")
    p_run.add_argument("--scenario", required=True, help="built-in name or scenario file path")
    p_run.add_argument("--seed", type=int, default=None, help="seed override")
    p_run.add_argument("--seeds", default=None, help="inclusive seed range A..B, one run each")
    p_run.add_argument("--out", default=None, help="output directory (default $MOTIVSIM_OUT or ./out)")
    p_run.add_argument("--format", choices=("jsonl", "csv", "both"), default="both",
                       help="trace format(s) to write")
    p_run.set_defaults(func=cmd_run)

    p_replay = sub.add_parser("replay", help="summarize or verify a persisted trace")
    p_replay.add_argument("--trace", required=True, help="trace.jsonl path")
    p_replay.add_argument("--verify", action="store_true",
                          help="re-simulate and require a byte-identical trace")
    p_replay.set_defaults(func=cmd_replay)

    p_metrics = sub.add_parser("metrics", help="recompute metrics from a persisted trace")
    p_metrics.add_argument("--trace", required=True, help="trace.jsonl path")
    p_metrics.add_argument("--out", default=None, help="metrics file (default stdout)")
    p_metrics.set_defaults(func=cmd_metrics)

    p_serve = sub.add_parser("serve", help="expose a live simulation over a websocket")
    p_serve.add_argument("--scenario", required=True, help="built-in name or scenario file path")
    p_serve.add_argument("--seed", type=int, default=None, help="seed override")
    p_serve.add_argument("--host", default="127.0.0.1", help="bind address")
    p_serve.add_argument("--port", type=int, default=8765, help="listen port")
    p_serve.add_argument("--tick-rate", type=float, default=20.0,
                         help="ticks per second; 0 runs unthrottled")
    p_serve.add_argument("--paused", action="store_true", help="start paused")
    p_serve.set_defaults(func=cmd_serve)

    p_list = sub.add_parser("list-scenarios", help="print built-in scenario names")
    p_list.set_defaults(func=cmd_list_scenarios)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
