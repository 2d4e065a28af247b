"""Experiment grid execution, resumable via a manifest.

Output layout::

    <output_dir>/manifest.json                 completed run keys + config digest
    <output_dir>/<layout>/<size>/<run>/        one run log (see logio)
    <output_dir>/reports/report_n<size>.json   pooled metrics per swarm size
    <output_dir>/ecdf/{detect,prop25,prop50,prop75}.csv
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from itertools import zip_longest
from pathlib import Path

from swarmtrack.config import ExperimentConfig, RunSpec
from swarmtrack.engine import RunLog, run
from swarmtrack.errors import ConfigError
from swarmtrack.logio import SCHEMA_VERSION, dump_json, read_run_log, write_run_log
from swarmtrack.metrics import METRICS, MetricsReport, aggregate, combine

MANIFEST = "manifest.json"


def run_dir(root, spec: RunSpec) -> Path:
    return Path(root) / spec.key


def _save_manifest(path: Path, digest: str, completed: list[str]) -> None:
    tmp = path.with_suffix(".tmp")
    dump_json({"schema_version": SCHEMA_VERSION, "config_digest": digest, "completed": completed}, tmp)
    os.replace(tmp, path)


def _load_manifest(path: Path, digest: str, force: bool) -> list[str]:
    if not path.exists():
        return []
    data = json.loads(path.read_text())
    if data.get("config_digest") != digest:
        if not force:
            raise ConfigError(
                f"{path} was written by a different experiment config; use --force to start over"
            )
        return []
    return list(data.get("completed", []))


def _execute(spec: RunSpec) -> RunLog:
    return run(spec.config)


def write_report(report: MetricsReport, path, force: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    dump_json(report.to_dict(), path)
    return path


def read_report(path) -> MetricsReport:
    return MetricsReport.from_dict(json.loads(Path(path).read_text()))


def emit_ecdf_csv(report: MetricsReport, out, force: bool = False) -> list[Path]:
    """One CSV per metric with a (delay, cumulative fraction) column pair per swarm size.

    A curve with no uncensored delays is written as a single ``0.0,0.0`` row.
    """
    out = Path(out)
    targets = [out / f"{m}.csv" for m in METRICS]
    if not force:
        for t in targets:
            if t.exists():
                raise FileExistsError(f"{t} exists; pass --force to overwrite")
    out.mkdir(parents=True, exist_ok=True)
    sizes = sorted(report.sizes)
    for metric, target in zip(METRICS, targets):
        header = []
        columns = []
        for n in sizes:
            header += [f"delay_s_n{n}", f"cum_fraction_n{n}"]
            steps = report[n].curves[metric].steps or ((0.0, 0.0),)
            columns.append(steps)
        with target.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in zip_longest(*columns):
                cells = []
                for step in row:
                    cells += [repr(step[0]), repr(step[1])] if step else ["", ""]
                w.writerow(cells)
    dump_json(
        {
            "schema_version": SCHEMA_VERSION,
            "files": [t.name for t in targets],
            "columns": "per swarm size n: delay_s_n<n> (seconds since event), "
                       "cum_fraction_n<n> (fraction of all events, censored included)",
            "swarm_sizes": sizes,
            "events": {str(n): report[n].n_events for n in sizes},
        },
        out / "index.json",
    )
    return targets


def summary_rows(report: MetricsReport) -> list[dict]:
    rows = []
    for n in sorted(report.sizes):
        s = report[n]
        rows.append(
            {
                "n_robots": n,
                "runs": s.n_runs,
                "events": s.n_events,
                **{f"rate_{m}": s.rates[m] for m in METRICS},
                **{f"median_s_{m}": s.median_delay[m] for m in METRICS},
                **{f"censored_{m}": s.censored[m] for m in METRICS},
            }
        )
    return rows


def format_table(report: MetricsReport) -> str:
    lines = [
        f"{'robots':>6} {'runs':>4} {'events':>6}  "
        + "  ".join(f"{m + ' rate':>12} {'median':>7} {'cens':>4}" for m in METRICS)
    ]
    for n in sorted(report.sizes):
        s = report[n]
        cells = []
        for m in METRICS:
            med = s.median_delay[m]
            cells.append(f"{s.rates[m]:>12.3f} {('-' if med is None else f'{med:.1f}'):>7} {s.censored[m]:>4}")
        lines.append(f"{n:>6} {s.n_runs:>4} {s.n_events:>6}  " + "  ".join(cells))
    return "\n".join(lines)


def run_batch(config: ExperimentConfig, jobs: int = 1, force: bool = False, echo=print) -> dict:
    """Run every layout x size x run combination, then pool metrics per swarm size."""
    config.validate()
    root = Path(config.output_dir)
    root.mkdir(parents=True, exist_ok=True)
    manifest = root / MANIFEST
    digest = config.digest()
    completed = _load_manifest(manifest, digest, force)
    done = set(completed)
    specs = list(config.runs())
    todo = [s for s in specs if s.key not in done or not (run_dir(root, s) / "beliefs.csv").exists()]
    logs: dict[str, RunLog] = {}

    def finish(spec: RunSpec, log: RunLog) -> None:
        write_run_log(log, run_dir(root, spec))
        logs[spec.key] = log
        if spec.key not in done:
            done.add(spec.key)
            completed.append(spec.key)
        _save_manifest(manifest, digest, completed)
        echo(f"run {spec.key} seed={spec.config.seed} done")

    _save_manifest(manifest, digest, completed)
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for spec, log in zip(todo, pool.map(_execute, todo)):
                finish(spec, log)
    else:
        for spec in todo:
            finish(spec, _execute(spec))

    reports = []
    for n in config.swarm_sizes:
        group = []
        for spec in specs:
            if spec.n_robots != n:
                continue
            log = logs.get(spec.key)
            group.append(log if log is not None else read_run_log(run_dir(root, spec)))
        rep = aggregate(group, n)
        write_report(rep, root / "reports" / f"report_n{n}.json", force=True)
        reports.append(rep)
    report = combine(reports)
    emit_ecdf_csv(report, root / "ecdf", force=True)
    rows = summary_rows(report)
    dump_json({"schema_version": SCHEMA_VERSION, "sizes": rows}, root / "summary.json")
    echo(format_table(report))
    return {"report": report, "rows": rows, "runs": len(specs), "executed": len(todo)}
