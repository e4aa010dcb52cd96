"""momentricci run <scenario> --config <path> --out <dir> [--seed N] | momentricci list"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .config import ConfigError, load_config, resolve_params, section_keys
from .reports import build_summary, write_report
from .scenarios import SCENARIOS, get_scenario, list_scenarios

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def run_scenario(name: str, config, out, seed: int | None = None):
    """Run one scenario and write its report; returns (summary, exit code)."""
    sc = get_scenario(name)
    cfg = load_config(config, name, sc.schema, out, seed)
    kwargs = {}
    if name == "full":
        defaults = cfg.sections.get("DEFAULT", {})
        sub = {}
        for other, osc in SCENARIOS.items():
            if other == "full":
                continue
            raw = {k: v for k, v in defaults.items() if k in osc.schema}
            raw.update(section_keys(cfg.sections, other))
            raw.pop("seed", None)
            sub[other] = resolve_params(other, osc.schema, raw)
        kwargs["sub_params"] = sub
    t0 = time.perf_counter()
    try:
        outcome = sc.runner(cfg.params, cfg.seed, **kwargs)
    except ValueError as exc:
        # preconditions the schema cannot see (e.g. profile feasibility)
        raise ConfigError(f"{name}: {exc}") from exc
    wall = time.perf_counter() - t0
    summary = build_summary(sc, cfg.params, cfg.seed, outcome)
    write_report(cfg.out, summary, outcome, wall)
    return summary, EXIT_OK if summary["pass"] else EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="momentricci", description="Ricci-positivity verification scenarios")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("scenario")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--seed", type=int, default=None)
    ls = sub.add_parser("list", help="list scenarios and their parameters")
    ls.add_argument("--json", action="store_true")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        cat = list_scenarios()
        if args.json:
            print(json.dumps(cat, indent=2, sort_keys=True))
        else:
            for e in cat:
                print(f"{e['name']:<10} [{e['anchor']}] {e['description']}")
                for k, p in e["params"].items():
                    print(f"    {k} ({p['kind']}, default {p['default']!r}): {p['rule']}")
        return EXIT_OK
    try:
        summary, code = run_scenario(args.scenario, args.config, args.out, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = "PASS" if code == EXIT_OK else "FAIL: " + ", ".join(summary["failed"])
    print(f"{summary['scenario']} [{summary['anchor']}] {status}")
    return code


if __name__ == "__main__":
    sys.exit(main())
