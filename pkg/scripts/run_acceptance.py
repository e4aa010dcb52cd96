"""Run every scenario with the default config and print a pass/fail table."""
import argparse
import sys
import time
from pathlib import Path

from momentricci.cli import run_scenario
from momentricci.scenarios import list_scenarios

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path, default=HERE / "configs" / "default.ini")
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--skip-full", action="store_true")
    args = ap.parse_args()
    bad = 0
    for e in list_scenarios():
        name = e["name"]
        if name == "full" and args.skip_full:
            continue
        t0 = time.perf_counter()
        summary, code = run_scenario(name, args.config, args.out / name, args.seed)
        dt = time.perf_counter() - t0
        status = "PASS" if code == 0 else "FAIL " + ", ".join(summary["failed"])
        print(f"{name:<10} {dt:7.2f}s  {status}")
        bad += code != 0
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
