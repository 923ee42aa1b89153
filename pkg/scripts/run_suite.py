"""Run every configuration in a directory and aggregate the exit codes.

Usage: python scripts/run_suite.py [CONFIG_DIR] [--expect-error NAME ...]

Each config runs in its own process.  Configs listed with --expect-error are
expected to exit 2 (configuration error); all others must exit 0.  The suite
exits 0 only when every config matches its expectation.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config_dir", nargs="?", default=str(ROOT / "configs"))
    parser.add_argument("--expect-error", action="append", default=["odd_diagonal"], help="config stem expected to exit 2")
    parser.add_argument("--tolerance", type=float)
    args = parser.parse_args(argv)

    configs = sorted(Path(args.config_dir).glob("*.json"))
    if not configs:
        print(f"no configs in {args.config_dir}", file=sys.stderr)
        return 2
    failures = 0
    for path in configs:
        expected = 2 if path.stem in args.expect_error else 0
        cmd = [sys.executable, "-m", "jacobi_theta", "--config", str(path), "--quiet"]
        if args.tolerance is not None:
            cmd += ["--tolerance", str(args.tolerance)]
        start = time.perf_counter()
        proc = subprocess.run(cmd, capture_output=True, text=True)
        elapsed = time.perf_counter() - start
        ok = proc.returncode == expected
        failures += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {path.name:32s} exit {proc.returncode} (expected {expected}) {elapsed:6.2f}s")
        if not ok and proc.stderr:
            print(proc.stderr, file=sys.stderr)
    print(f"{len(configs) - failures}/{len(configs)} configs as expected")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
