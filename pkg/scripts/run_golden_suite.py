"""Run the golden sweep suite twice and confirm the CSV artifacts are byte-identical.

Usage: python3 scripts/run_golden_suite.py [--output DIR] [--workers N]
"""

import argparse
import hashlib
import sys
from pathlib import Path

from helmlab.cli import RunConfig, render_report, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--output", default="golden-runs")
    ap.add_argument("--workers", type=int, default=0)
    args = ap.parse_args()
    root = Path(args.output)
    digests, codes = [], []
    for tag in ("a", "b"):
        out = root / tag
        codes.append(run(RunConfig(command="sweep", seed=0, workers=args.workers, output=str(out))))
        digests.append(hashlib.sha256((out / "sweep.csv").read_bytes()).hexdigest())
        print(f"run {tag}: exit {codes[-1]}  sha256 {digests[-1]}")
    print(render_report(root / "a"))
    same = digests[0] == digests[1]
    print("identical CSV" if same else "CSV artifacts differ")
    return 0 if same and codes == [0, 0] else 2


if __name__ == "__main__":
    sys.exit(main())
