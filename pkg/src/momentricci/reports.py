"""Report emission: JSON summary, CSV tables and a separate timing file."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .certificates import _plain as plain

SUMMARY = "summary.json"
PROFILES = "profiles.csv"
SCAN = "scan.csv"
TIMING = "timing.json"
MANIFEST = [SUMMARY, PROFILES, SCAN, TIMING]


def write_csv(path: Path, rows: list) -> None:
    """Columns are the union of row keys in first-seen order; missing cells stay empty."""
    fields: dict = {}
    for r in rows:
        fields.update(dict.fromkeys(r))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(fields), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(v) for k, v in plain(r).items()})


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return v


def build_summary(scenario, params: dict, seed: int, outcome) -> dict:
    checks = {k: bool(v) for k, v in outcome.checks.items()}
    failed = sorted(k for k, v in checks.items() if not v)
    return plain({
        "scenario": scenario.name,
        "anchor": scenario.anchor,
        "seed": seed,
        "params": params,
        "checks": checks,
        "failed": failed,
        "pass": not failed and bool(checks),
        "results": outcome.results,
        "files": MANIFEST,
    })


def dump_summary(summary: dict) -> str:
    return json.dumps(summary, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(out: Path, summary: dict, outcome, wall_time: float) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / SUMMARY).write_text(dump_summary(summary), encoding="utf-8")
    write_csv(out / PROFILES, outcome.profiles)
    write_csv(out / SCAN, outcome.scan)
    (out / TIMING).write_text(json.dumps({"wall_time_s": wall_time}) + "\n", encoding="utf-8")
