"""Command-line entry point: run, sweep and replay.

Configuration comes from defaults, an optional key=value config file, the
LEXSIM_SEED environment variable (seed fallback only) and command-line flags,
in increasing order of precedence. Runs first write a manifest, then raw
per-repetition results and their aggregate as CSV; replay re-executes a
manifest and verifies the result files byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .experiment import (
    ConditionKey,
    ExperimentConfig,
    SuccessCurve,
    TraceRecord,
    run_repetition_detailed,
    run_experiment,
    run_sweep,
)

RESULTS_HEADER = ["algorithm", "f", "strategy", "checkpoint", "repetition", "success_rate"]
AGGREGATE_HEADER = ["algorithm", "f", "strategy", "checkpoint", "mean", "std"]

_INT_KEYS = (
    "world_size",
    "context_size",
    "lexicon_size",
    "dims",
    "k",
    "training_interactions",
    "test_interactions",
    "repetitions",
    "seed",
)
_FLOAT_KEYS = ("f", "alpha")
_STR_KEYS = ("algorithm", "strategy")


def _parse_value(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "checkpoints":
            return tuple(int(part) for part in raw.split(",") if part.strip())
        if key in _STR_KEYS:
            return raw
    except ValueError:
        raise ValueError(f"invalid value for config key {key!r}: {raw!r}") from None
    raise ValueError(f"unknown config key {key!r}")


def read_config_file(path: str | Path) -> dict:
    """Parse a key=value config file ('#' starts a comment)."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        values[key.strip()] = _parse_value(key.strip(), raw.strip())
    return values


def parse_config(
    path: str | Path | None = None,
    overrides: dict | None = None,
    env: dict | None = None,
) -> ExperimentConfig:
    """Resolve a config: flags override file values override the seed
    fallback from LEXSIM_SEED override defaults."""
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        values.update(read_config_file(path))
    if "seed" not in values and "LEXSIM_SEED" in env:
        try:
            values["seed"] = int(env["LEXSIM_SEED"])
        except ValueError:
            raise ValueError(f"invalid LEXSIM_SEED: {env['LEXSIM_SEED']!r}") from None
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def fmt(x: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def emit_results_csv(results: dict[ConditionKey, SuccessCurve], path: str | Path) -> None:
    """One row per (condition, checkpoint, repetition), sorted by key."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for key in sorted(results):
            alg, f, strategy = key
            curve = results[key]
            for ci, checkpoint in enumerate(curve.checkpoints):
                for rep in range(curve.repetitions):
                    writer.writerow(
                        [alg, fmt(f), strategy, checkpoint, rep, fmt(curve.rates[rep, ci])]
                    )


def emit_aggregate_csv(results: dict[ConditionKey, SuccessCurve], path: str | Path) -> None:
    """Mean and sample standard deviation per (condition, checkpoint)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_HEADER)
        for key in sorted(results):
            alg, f, strategy = key
            curve = results[key]
            for ci, checkpoint in enumerate(curve.checkpoints):
                writer.writerow(
                    [alg, fmt(f), strategy, checkpoint, fmt(curve.mean[ci]), fmt(curve.std[ci])]
                )


def read_results_csv(path: str | Path) -> dict[ConditionKey, SuccessCurve]:
    """Inverse of emit_results_csv (exact, thanks to round-trip floats)."""
    cells: dict[ConditionKey, dict] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            key = (row["algorithm"], float(row["f"]), row["strategy"])
            cell = cells.setdefault(key, {})
            cell.setdefault(int(row["checkpoint"]), {})[int(row["repetition"])] = float(
                row["success_rate"]
            )
    results = {}
    for key, by_checkpoint in cells.items():
        checkpoints = tuple(sorted(by_checkpoint))
        reps = sorted(by_checkpoint[checkpoints[0]])
        rates = np.array(
            [[by_checkpoint[c][rep] for c in checkpoints] for rep in reps]
        )
        results[key] = SuccessCurve(checkpoints, rates)
    return results


def read_aggregate_csv(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            {
                "algorithm": row["algorithm"],
                "f": float(row["f"]),
                "strategy": row["strategy"],
                "checkpoint": int(row["checkpoint"]),
                "mean": float(row["mean"]),
                "std": float(row["std"]),
            }
            for row in csv.DictReader(fh)
        ]


def emit_trace_csv(
    traces: list[tuple[ConditionKey, int, list[TraceRecord]]], path: str | Path
) -> None:
    """One row per interaction, grouped by repetition in run order."""
    header = [
        "algorithm",
        "f",
        "strategy",
        "repetition",
        "phase",
        "checkpoint",
        "step",
        "context_ids",
        "topic_id",
        "word",
        "pointing",
        "hearer_id",
        "success",
    ]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for (alg, f, strategy), rep, records in traces:
            for rec in records:
                out = rec.outcome
                writer.writerow(
                    [
                        alg,
                        fmt(f),
                        strategy,
                        rep,
                        rec.phase,
                        "" if rec.checkpoint is None else rec.checkpoint,
                        rec.step,
                        "|".join(str(i) for i in out.context_ids),
                        out.topic_id,
                        "" if out.word is None else out.word,
                        int(out.pointing),
                        "" if out.hearer_id is None else out.hearer_id,
                        "" if out.success is None else int(out.success),
                    ]
                )


def emit_state_csv(states: list[tuple[int, list]], dims: int, path: str | Path) -> None:
    """Tutor lexicon and end-of-run learner summaries, one row per word."""
    header = ["repetition", "source", "word", "count"] + [f"f{i}" for i in range(dims)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for rep, rows in states:
            for source, word, count, coords in rows:
                coord_cells = [""] * dims if coords is None else [fmt(c) for c in coords]
                writer.writerow([rep, source, word, "" if count is None else count] + coord_cells)


def write_manifest(
    path: str | Path,
    *,
    command: str,
    config: ExperimentConfig,
    grid: dict | None,
    outputs: dict[str, str],
    jobs: int,
) -> None:
    doc = {
        "tool": "lexsim",
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "config": asdict(config) | {"checkpoints": list(config.checkpoints)},
        "grid": grid,
        "jobs": jobs,
        "outputs": outputs,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_manifest(path: str | Path) -> dict:
    manifest_path = Path(path)
    if not manifest_path.exists():
        raise FileNotFoundError(f"manifest not found: {manifest_path}")
    with open(manifest_path, encoding="utf-8") as fh:
        return json.load(fh)


def _traced_task(task):
    config, rep, want_trace, want_state = task
    trace: list[TraceRecord] | None = [] if want_trace else None
    result = run_repetition_detailed(config, rep, trace)
    state_rows = None
    if want_state:
        state_rows = [
            ("tutor", word, None, result.lexicon.prototypes[i])
            for i, word in enumerate(result.lexicon.words)
        ]
        state_rows += [
            ("learner", word, count, coords)
            for word, count, coords in result.learner.dump_rows()
        ]
    return result.rates, trace, state_rows


def _map_detailed(tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [_traced_task(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_traced_task, tasks))


def _resolve_jobs(args) -> int:
    if args.jobs is not None:
        if args.jobs < 1:
            raise ValueError(f"jobs must be >= 1 (got {args.jobs})")
        return args.jobs
    return os.cpu_count() or 1


def _config_overrides(args) -> dict:
    keys = (
        "world_size",
        "context_size",
        "lexicon_size",
        "dims",
        "alpha",
        "k",
        "training_interactions",
        "test_interactions",
        "repetitions",
        "seed",
        "checkpoints",
    )
    overrides = {key: getattr(args, key) for key in keys}
    if getattr(args, "algorithm_single", None) is not None:
        overrides["algorithm"] = args.algorithm_single
    if getattr(args, "f_single", None) is not None:
        overrides["f"] = args.f_single
    if getattr(args, "strategy_single", None) is not None:
        overrides["strategy"] = args.strategy_single
    return overrides


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="key=value config file")
    parser.add_argument("--world-size", dest="world_size", type=int, default=None)
    parser.add_argument("--context-size", dest="context_size", type=int, default=None)
    parser.add_argument("--lexicon-size", dest="lexicon_size", type=int, default=None)
    parser.add_argument("--dims", dest="dims", type=int, default=None)
    parser.add_argument("--alpha", dest="alpha", type=float, default=None)
    parser.add_argument("--k", dest="k", type=int, default=None)
    parser.add_argument("--train", dest="training_interactions", type=int, default=None,
                        help="training interactions per repetition")
    parser.add_argument("--tests", dest="test_interactions", type=int, default=None,
                        help="test interactions per checkpoint")
    parser.add_argument("--reps", dest="repetitions", type=int, default=None)
    parser.add_argument("--seed", dest="seed", type=int, default=None)
    parser.add_argument("--checkpoints", dest="checkpoints", default=None,
                        type=lambda raw: _parse_value("checkpoints", raw),
                        help="comma-separated training counts to evaluate at")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--jobs", type=int, default=None,
                        help="parallel workers (default: number of processors)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexsim",
        description="Tutor/learner word-learning experiments with mixed pointing feedback.",
    )
    parser.add_argument("--version", action="version", version=f"lexsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a single condition")
    _add_shared_flags(run)
    run.add_argument("--algorithm", dest="algorithm_single", default=None,
                     help="one of knn, pe, ap, cwp")
    run.add_argument("--f", dest="f_single", type=float, default=None,
                     help="pointing probability in [0, 1]")
    run.add_argument("--strategy", dest="strategy_single", default=None,
                     help="discriminative or descriptive")
    run.add_argument("--trace", action="store_true", help="emit per-interaction trace.csv")
    run.add_argument("--dump-state", action="store_true",
                     help="emit end-of-run lexicon and learner state.csv")
    run.set_defaults(handler=cmd_run)

    sweep = sub.add_parser("sweep", help="run a grid of conditions")
    _add_shared_flags(sweep)
    sweep.add_argument("--algorithm", dest="algorithms", default="knn,pe,ap,cwp",
                       help="comma-separated algorithms")
    sweep.add_argument("--f", dest="f_values", default="0,0.25,0.5,0.75,1",
                       help="comma-separated pointing probabilities")
    sweep.add_argument("--strategy", dest="strategies", default="discriminative",
                       help="comma-separated production strategies")
    sweep.set_defaults(handler=cmd_sweep)

    replay = sub.add_parser("replay", help="re-run a manifest and verify outputs byte for byte")
    replay.add_argument("--manifest", required=True)
    replay.add_argument("--out", default=None,
                        help="directory for re-run outputs (default: <manifest dir>/replay)")
    replay.add_argument("--jobs", type=int, default=None)
    replay.set_defaults(handler=cmd_replay)
    return parser


def _compute_results(
    config: ExperimentConfig, grid: dict | None, jobs: int
) -> dict[ConditionKey, SuccessCurve]:
    if grid is None:
        return {config.condition: run_experiment(config, jobs=jobs)}
    return run_sweep(
        config,
        f_values=grid["f_values"],
        algorithms=grid["algorithms"],
        strategies=grid["strategies"],
        jobs=jobs,
    )


def cmd_run(args) -> int:
    config = parse_config(args.config, _config_overrides(args))
    jobs = _resolve_jobs(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {"results": "results.csv", "aggregate": "aggregate.csv"}
    if args.trace:
        outputs["trace"] = "trace.csv"
    if args.dump_state:
        outputs["state"] = "state.csv"
    write_manifest(
        out_dir / "manifest.json",
        command="run",
        config=config,
        grid=None,
        outputs=outputs,
        jobs=jobs,
    )
    if args.trace or args.dump_state:
        tasks = [(config, rep, args.trace, args.dump_state) for rep in range(config.repetitions)]
        detailed = _map_detailed(tasks, jobs)
        curve = SuccessCurve(config.checkpoints, np.array([rates for rates, _, _ in detailed]))
        results = {config.condition: curve}
        if args.trace:
            traces = [
                (config.condition, rep, trace)
                for rep, (_, trace, _) in enumerate(detailed)
            ]
            emit_trace_csv(traces, out_dir / "trace.csv")
        if args.dump_state:
            states = [(rep, rows) for rep, (_, _, rows) in enumerate(detailed)]
            emit_state_csv(states, config.dims, out_dir / "state.csv")
    else:
        results = {config.condition: run_experiment(config, jobs=jobs)}
    emit_results_csv(results, out_dir / "results.csv")
    emit_aggregate_csv(results, out_dir / "aggregate.csv")
    curve = results[config.condition]
    print(
        f"run {config.algorithm} f={fmt(config.f)} {config.strategy}: "
        f"final mean success {curve.mean[-1]:.3f} over {config.repetitions} repetitions "
        f"-> {out_dir}"
    )
    return 0


def cmd_sweep(args) -> int:
    config = parse_config(args.config, _config_overrides(args))
    grid = {
        "algorithms": [a.strip() for a in args.algorithms.split(",") if a.strip()],
        "f_values": [float(v) for v in args.f_values.split(",") if v.strip()],
        "strategies": [s.strip() for s in args.strategies.split(",") if s.strip()],
    }
    jobs = _resolve_jobs(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {"results": "results.csv", "aggregate": "aggregate.csv"}
    write_manifest(
        out_dir / "manifest.json",
        command="sweep",
        config=config,
        grid=grid,
        outputs=outputs,
        jobs=jobs,
    )
    results = _compute_results(config, grid, jobs)
    emit_results_csv(results, out_dir / "results.csv")
    emit_aggregate_csv(results, out_dir / "aggregate.csv")
    print(f"sweep: {len(results)} conditions x {config.repetitions} repetitions -> {out_dir}")
    return 0


def cmd_replay(args) -> int:
    manifest_path = Path(args.manifest)
    doc = load_manifest(manifest_path)
    base_dir = manifest_path.parent
    out_dir = Path(args.out) if args.out else base_dir / "replay"
    out_dir.mkdir(parents=True, exist_ok=True)
    config = ExperimentConfig(**doc["config"])
    jobs = args.jobs if args.jobs else os.cpu_count() or 1
    results = _compute_results(config, doc["grid"], jobs)
    emit_results_csv(results, out_dir / "results.csv")
    emit_aggregate_csv(results, out_dir / "aggregate.csv")
    ok = True
    for name in ("results", "aggregate"):
        rel = doc["outputs"][name]
        original = (base_dir / rel).read_bytes()
        rerun = (out_dir / f"{name}.csv").read_bytes()
        same = original == rerun
        ok = ok and same
        print(f"replay {rel}: {'PASS' if same else 'FAIL'}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
