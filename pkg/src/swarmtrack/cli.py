"""Command line entry point: ``swarmtrack {run,batch,metrics,ecdf}``.

Exit codes: 0 success, 1 configuration error, 2 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections import defaultdict
from dataclasses import replace
from pathlib import Path

from swarmtrack.batch import emit_ecdf_csv, format_table, read_report, run_batch, write_report
from swarmtrack.config import (
    DEFAULT_OUTPUT_DIR,
    OUTPUT_ENV_VAR,
    ExperimentConfig,
    load_config,
    load_sim_config,
)
from swarmtrack.engine import SimConfig, run
from swarmtrack.errors import ConfigError
from swarmtrack.logio import CONFIG_FILE, find_run_dirs, read_run_log, write_run_log
from swarmtrack.metrics import aggregate, combine

log = logging.getLogger("swarmtrack")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _default_out() -> str:
    return os.environ.get(OUTPUT_ENV_VAR, DEFAULT_OUTPUT_DIR)


def cmd_run(args) -> int:
    cfg = load_sim_config(args.config) if args.config else SimConfig()
    overrides = {}
    if args.layout is not None:
        overrides["layout"] = args.layout
    if args.robots is not None:
        overrides["n_robots"] = args.robots
    if args.seed is not None:
        overrides["seed"] = args.seed
    cfg = replace(cfg, **overrides)
    cfg.validate()
    out = Path(args.out or _default_out())
    if (out / CONFIG_FILE).exists() and not args.force:
        raise FileExistsError(f"{out} already holds a run; pass --force to overwrite")
    result = run(cfg)
    write_run_log(result, out)
    print(f"wrote {out}: {len(result.transitions)} transitions, "
          f"{len(result.observations)} observations, {len(result.belief_rows)} belief rows")
    return EXIT_OK


def cmd_batch(args) -> int:
    cfg = load_config(args.config) if args.config else ExperimentConfig(layouts=("Env1", "Env2", "Env3", "Env4"))
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    run_batch(cfg, jobs=args.jobs, force=args.force, echo=print)
    return EXIT_OK


def cmd_metrics(args) -> int:
    root = Path(args.path)
    dirs = find_run_dirs(root)
    if not dirs:
        raise ConfigError(f"no run logs found under {root}")
    by_size = defaultdict(list)
    for d in dirs:
        lg = read_run_log(d)
        by_size[lg.n_robots].append(lg)
    out = Path(args.out) if args.out else root / "reports"
    reports = []
    for n in sorted(by_size):
        rep = aggregate(by_size[n], n)
        path = write_report(rep, out / f"report_n{n}.json", force=args.force)
        print(f"wrote {path}")
        reports.append(rep)
    print(format_table(combine(reports)))
    return EXIT_OK


def cmd_ecdf(args) -> int:
    report = combine(read_report(p) for p in args.reports)
    out = Path(args.out) if args.out else Path(_default_out()) / "ecdf"
    for path in emit_ecdf_csv(report, out, force=args.force):
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmtrack", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one configuration and write its logs")
    p.add_argument("--config", help="single-run YAML config")
    p.add_argument("--layout", help="built-in layout id or layout YAML path")
    p.add_argument("--robots", type=int, help="swarm size")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV_VAR} or {DEFAULT_OUTPUT_DIR})")
    p.add_argument("--force", action="store_true", help="overwrite an existing run")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("batch", help="run a layouts x swarm sizes x seeds grid")
    p.add_argument("--config", help="experiment YAML config (default: full built-in grid)")
    p.add_argument("--seed", type=int, help="override base_seed")
    p.add_argument("--out", help="override output_dir")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--force", action="store_true", help="discard a manifest from a different config")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("metrics", help="recompute pooled reports from persisted run logs")
    p.add_argument("path", help="batch output directory or a single run directory")
    p.add_argument("--out", help="report directory (default PATH/reports)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("ecdf", help="write plot-ready ECDF CSVs from report files")
    p.add_argument("reports", nargs="+", help="report_n*.json files")
    p.add_argument("--out", help="directory for the CSV files")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_ecdf)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
