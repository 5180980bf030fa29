"""Command-line interface: run experiments and write reproducible artifacts.

Every run writes ``<out>/<name>-<seed>/summary.json`` (byte-identical
for identical config and seed) plus optional CSV data and a
``run_meta.json`` with timing. Exit codes: 0 success, 1 configuration
error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np


class ConfigError(Exception):
    """Bad command line, config file, or parameter values."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="symbreak", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    exp = sub.add_parser("experiment", help="run a named experiment")
    exp.add_argument("name", help="experiment name (stern-gerlach, epr, two-particle, zeno, decoherence)")
    exp.add_argument("--config", type=Path, help="JSON file with a parameters object")
    exp.add_argument("--seed", type=int, help="64-bit master seed (required for stochastic runs)")
    exp.add_argument("--trials", type=int, help="number of trials")
    exp.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    exp.add_argument("--per-trial", action="store_true", help="also write per-trial CSV data")

    born = sub.add_parser("born-scan", help="scan power-law probability exponents")
    born.add_argument("--states", type=int, default=50, help="number of random states")
    born.add_argument("--seed", type=int, help="64-bit master seed")
    born.add_argument("--out", type=Path, default=Path("results"), help="output directory")

    gibbs = sub.add_parser("gibbs", help="run one lattice trajectory")
    gibbs.add_argument("--config", type=Path, required=True, help="JSON lattice config")
    gibbs.add_argument("--out", type=Path, default=Path("results"), help="output directory")

    sweep = sub.add_parser("sweep", help="order-parameter sweep over temperature")
    sweep.add_argument("--config", type=Path, required=True, help="JSON sweep config")
    sweep.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    return parser


def _canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_summary(run_dir: Path, payload: dict, wall_time: float) -> None:
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "summary.json").write_text(_canonical_json(payload))
    (run_dir / "run_meta.json").write_text(
        _canonical_json({"wall_time_seconds": wall_time})
    )


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])


def _load_json(path: Path) -> dict:
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return payload


def _cmd_experiment(args) -> int:
    from .experiments import ExperimentConfig, run_experiment

    file_cfg = _load_json(args.config) if args.config else {}
    seed = args.seed if args.seed is not None else file_cfg.get("seed")
    if seed is None:
        raise ConfigError("a --seed (or a seed in the config file) is required; runs never draw silent entropy")
    trials = args.trials if args.trials is not None else file_cfg.get("trials", 100_000)
    parameters = dict(file_cfg.get("parameters", {}))
    try:
        config = ExperimentConfig(
            experiment=args.name, trials=int(trials), seed=int(seed), parameters=parameters
        )
        record = run_experiment(config)
    except ValueError as exc:
        # bad names, angles, or counts are configuration problems
        raise ConfigError(str(exc)) from exc
    run_dir = args.out / f"{record.experiment}-{int(seed)}"
    payload = record.summary_payload()
    if args.per_trial and record.per_trial_rows is not None:
        payload["per_trial_data"] = "trials.csv"
    _write_summary(run_dir, payload, record.wall_time)
    if args.per_trial and record.per_trial_rows is not None:
        _write_csv(run_dir / "trials.csv", record.per_trial_header, record.per_trial_rows)
    print(f"wrote {run_dir / 'summary.json'}")
    return 0


def _cmd_born_scan(args) -> int:
    from .born import exponent_scan, random_state_corpus

    if args.seed is None:
        raise ConfigError("--seed is required; runs never draw silent entropy")
    if args.states < 1:
        raise ConfigError(f"need at least one state, got {args.states}")
    start = time.perf_counter()
    corpus = random_state_corpus(args.states, seed=int(args.seed))
    report = exponent_scan(corpus)
    payload = {
        "experiment": "born-scan",
        "config": {"states": args.states, "seed": int(args.seed)},
        "summary": report.to_json_dict(),
    }
    run_dir = args.out / f"born-scan-{int(args.seed)}"
    _write_summary(run_dir, payload, time.perf_counter() - start)
    _write_csv(
        run_dir / "betas.csv",
        ("beta", "max_normalization_violation", "multiplicativity_violation"),
        list(zip(report.betas, report.max_normalization_violation, report.multiplicativity_violation)),
    )
    print(f"wrote {run_dir / 'summary.json'}")
    return 0


def _cmd_gibbs(args) -> int:
    from .gibbs import GibbsConfig, detect_symmetry_breaking, gibbs_sample

    payload = _load_json(args.config)
    try:
        cfg = GibbsConfig.from_json_dict(payload)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    start = time.perf_counter()
    trajectory = gibbs_sample(cfg)
    report = detect_symmetry_breaking(trajectory)
    summary = {
        "experiment": "gibbs",
        "config": cfg.to_json_dict(),
        "summary": {
            "mean_abs_magnetization": report.mean_abs_magnetization,
            "mean_magnetization": float(np.mean(trajectory.magnetization)),
            "mean_energy": float(np.mean(trajectory.energy)),
            "broken": report.broken,
            "selected_sign": report.selected_sign,
            "recorded_sweeps": len(trajectory.magnetization),
        },
    }
    run_dir = args.out / f"gibbs-{cfg.seed}"
    _write_summary(run_dir, summary, time.perf_counter() - start)
    _write_csv(run_dir / "trajectory.csv", ("sweep", "m", "E"), trajectory.rows())
    print(f"wrote {run_dir / 'summary.json'}")
    return 0


def _cmd_sweep(args) -> int:
    from .gibbs import GibbsConfig, order_parameter_sweep

    payload = _load_json(args.config)
    for key in ("base", "temperatures"):
        if key not in payload:
            raise ConfigError(f"sweep config must contain {key!r}")
    try:
        base = GibbsConfig.from_json_dict(payload["base"])
        temperatures = [float(t) for t in payload["temperatures"]]
        seeds_per_temperature = int(payload.get("seeds_per_temperature", 50))
        threshold = float(payload.get("threshold", 0.5))
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    start = time.perf_counter()
    report = order_parameter_sweep(
        base, temperatures, seeds_per_temperature=seeds_per_temperature, threshold=threshold
    )
    summary = {
        "experiment": "sweep",
        "config": {
            "base": base.to_json_dict(),
            "temperatures": temperatures,
            "seeds_per_temperature": seeds_per_temperature,
            "threshold": threshold,
        },
        "summary": {
            "points": [
                {
                    "temperature": p.temperature,
                    "mean_abs_magnetization": p.mean_abs_magnetization,
                    "broken_fraction": p.broken_fraction,
                }
                for p in report.points
            ],
            "crossing_bracket": list(report.crossing) if report.crossing else None,
            "crossing_estimate": report.crossing_estimate,
        },
    }
    run_dir = args.out / f"sweep-{base.seed}"
    _write_summary(run_dir, summary, time.perf_counter() - start)
    _write_csv(
        run_dir / "sweep.csv",
        ("temperature", "mean_abs_magnetization", "broken_fraction"),
        [(p.temperature, p.mean_abs_magnetization, p.broken_fraction) for p in report.points],
    )
    print(f"wrote {run_dir / 'summary.json'}")
    return 0


def cli_main(argv=None) -> int:
    """Entry point returning the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    handlers = {
        "experiment": _cmd_experiment,
        "born-scan": _cmd_born_scan,
        "gibbs": _cmd_gibbs,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure contract
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
