"""Command-line interface for the lock-scheduling toolkit.

Exit codes: 0 on success, 2 when some per-instance computations were skipped,
1 on fatal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from . import __version__
from .arrivals import bucket_to_periods, extract_instance, parse_arrivals, serialize_arrivals
from .dp import CANONICAL, PAPER_LITERAL, result_to_json_dict, solve as dp_solve, DEFAULT_PERIOD_CAP
from .experiment import (
    DAY_MINUTES,
    ExperimentConfig,
    fit_report_csv,
    run_fit_experiment,
    run_schedule_experiment,
    schedule_report_csv,
    synth_dataset,
)
from .matching import best_fit, stream_set_to_json
from .policies import adv_fifo, alternating, fifo, realized_periodic
from .rolling import ChunkRequest, chunk_to_json, default_window, next_chunk
from .schedule import (
    Direction,
    instance_from_json,
    schedule_from_json,
    schedule_to_json,
)
from .two_stream import TwoStreamParams, closed_form_action, lambda_one_schedule


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_dataset(path: str):
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_arrivals(fh)


def cmd_synth(args) -> int:
    spec = json.loads(Path(args.streams).read_text(encoding="utf-8")) if args.streams else {
        "D": [[63, 126], [126, 126]],
        "U": [[21, 126], [126, 126]],
    }
    streams_spec = {Direction(d): [tuple(p) for p in pairs] for d, pairs in spec.items()}
    dataset = synth_dataset(args.seed, args.days, streams_spec, args.sigma)
    _write(args.out, serialize_arrivals(dataset))
    return 0


def cmd_fit(args) -> int:
    dataset = _load_dataset(args.arrivals)
    if args.day:
        day = date.fromisoformat(args.day)
        direction = Direction(args.direction)
        instance = extract_instance(dataset, day, direction, args.n)
        solution = best_fit(instance, args.k)
        directions = [direction] * len(solution.streams.streams)
        _write(args.out, stream_set_to_json(solution.streams, directions) + "\n")
        return 0
    config = ExperimentConfig(k_values=tuple(args.k_list), n_values=tuple(args.n_list), jobs=args.jobs)
    rows, skipped = run_fit_experiment(dataset, config)
    _write(args.out, fit_report_csv(rows))
    return 2 if skipped else 0


def cmd_schedule(args) -> int:
    instance = instance_from_json(Path(args.instance).read_text(encoding="utf-8"))
    out = {}
    for mode in (CANONICAL, PAPER_LITERAL):
        result = dp_solve(instance, mode=mode, period_cap=args.dp_cap)
        out[mode] = result_to_json_dict(result)
    _write(args.out, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_evaluate(args) -> int:
    dataset = _load_dataset(args.arrivals)
    period = args.period_minutes
    horizon = -(-DAY_MINUTES // period)
    schedule = None
    wanted = args.policies.split(",")
    if "realized" in wanted:
        if not args.schedule:
            print("error: --schedule is required for the realized policy", file=sys.stderr)
            return 1
        schedule = schedule_from_json(Path(args.schedule).read_text(encoding="utf-8"))
    lines = ["day,policy,per_vessel_minutes"]
    for day in dataset.days():
        counts = bucket_to_periods(dataset, day, period, horizon)
        runs = []
        if "alternating" in wanted:
            runs.append(alternating(counts, horizon))
        if "fifo" in wanted:
            run = fifo(counts, horizon)
            if args.best_of_two:
                other = fifo(counts, horizon, Direction.UP)
                run = other if other.result.total_wait < run.result.total_wait else run
            runs.append(run)
        if "advfifo" in wanted:
            run = adv_fifo(counts, horizon)
            if args.best_of_two:
                other = adv_fifo(counts, horizon, Direction.UP)
                run = other if other.result.total_wait < run.result.total_wait else run
            runs.append(run)
        if "realized" in wanted:
            runs.append(realized_periodic(schedule, counts, horizon))
        for run in runs:
            lines.append(f"{day.isoformat()},{run.policy},{float(run.per_vessel_minutes(period)):.2f}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_rolling(args) -> int:
    instance = instance_from_json(Path(args.instance).read_text(encoding="utf-8"))
    window = args.window or default_window(instance.k, args.epsilon)
    start = args.start
    position = None
    lines = []
    for _ in range(args.chunks):
        chunk = next_chunk(
            instance, ChunkRequest(start=start, window=window, epsilon=args.epsilon, position=position)
        )
        lines.append(chunk_to_json(chunk))
        start = chunk.next_start
        position = chunk.next_position
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_policy(args) -> int:
    params = TwoStreamParams(
        mu_d=args.mu_d, mu_u=args.mu_u, lambda_d=args.lambda_d, lambda_u=args.lambda_u
    )
    if params.lambda_d == 1 or params.lambda_u == 1:
        print(schedule_to_json(lambda_one_schedule(params)))
    else:
        print(closed_form_action(params, args.t).value)
    return 0


def cmd_experiment(args) -> int:
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        config = ExperimentConfig(
            k_values=tuple(raw.get("k", [2, 3, 4])),
            n_values=tuple(raw.get("n", [20, 30, 40, 50])),
            period_minutes=raw.get("period_minutes", 21),
            epsilon=raw.get("epsilon", 1.0),
            seed=raw.get("seed", args.seed),
            dp_cap=raw.get("dp_cap", args.dp_cap),
            jobs=raw.get("jobs", args.jobs),
        )
    else:
        config = ExperimentConfig(
            k_values=tuple(args.k_list),
            n_values=tuple(args.n_list),
            period_minutes=args.period_minutes,
            seed=args.seed,
            dp_cap=args.dp_cap,
            jobs=args.jobs,
        )
    dataset = _load_dataset(args.arrivals)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fit_rows, fit_skipped = run_fit_experiment(dataset, config)
    (out_dir / "fit.csv").write_text(fit_report_csv(fit_rows), encoding="utf-8")
    sched_rows, sched_skipped = run_schedule_experiment(dataset, config)
    (out_dir / "schedule.csv").write_text(schedule_report_csv(sched_rows), encoding="utf-8")
    skipped = fit_skipped + sched_skipped
    if skipped:
        print(f"warning: {skipped} per-instance computations skipped", file=sys.stderr)
    return 2 if skipped else 0


def _int_list(text: str):
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locksched", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic arrival CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--days", type=int, default=3)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--streams", help="JSON file mapping direction to [mu, lambda] minute pairs")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit", help="fit periodic streams to arrival data")
    p.add_argument("--arrivals", required=True)
    p.add_argument("--day", help="fit a single day/direction and emit the stream-set JSON")
    p.add_argument("--direction", choices=["D", "U"], default="D")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--k-list", type=_int_list, default=[2, 3, 4])
    p.add_argument("--n-list", type=_int_list, default=[20, 30, 40, 50])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("schedule", help="optimal periodic schedule for an instance JSON")
    p.add_argument("--instance", required=True)
    p.add_argument("--dp-cap", type=int, default=DEFAULT_PERIOD_CAP)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("evaluate", help="run policies against arrival data")
    p.add_argument("--policies", default="alternating,fifo,advfifo")
    p.add_argument("--arrivals", required=True)
    p.add_argument("--schedule", help="schedule JSON for the realized policy")
    p.add_argument("--period-minutes", type=int, default=21)
    p.add_argument("--best-of-two", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rolling", help="emit rolling-horizon chunks as JSON lines")
    p.add_argument("--instance", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--chunks", type=int, default=1)
    p.add_argument("--window", type=int)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_rolling)

    p = sub.add_parser("policy", help="query the two-stream closed form")
    p.add_argument("mode", choices=["two-stream"])
    p.add_argument("--lambda-d", type=int, required=True)
    p.add_argument("--lambda-u", type=int, required=True)
    p.add_argument("--mu-d", type=int, required=True)
    p.add_argument("--mu-u", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("experiment", help="full fit + schedule pipeline with CSV reports")
    p.add_argument("--arrivals", required=True)
    p.add_argument("--config", help="JSON config overriding the defaults")
    p.add_argument("--k-list", type=_int_list, default=[2, 3, 4])
    p.add_argument("--n-list", type=_int_list, default=[20, 30, 40, 50])
    p.add_argument("--period-minutes", type=int, default=21)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dp-cap", type=int, default=DEFAULT_PERIOD_CAP)
    p.add_argument("--out-dir", default="reports")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
