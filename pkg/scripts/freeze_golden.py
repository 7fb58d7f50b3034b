"""Run the golden sweeps and store their sup_Q values next to the registry.

Usage: python3 scripts/freeze_golden.py [--workers N]
"""

import argparse
import json
import multiprocessing as mp
from pathlib import Path

from helmlab.estimlab.engine import GOLDEN_GRIDS, golden_grid, sweep

OUT = Path(__file__).resolve().parents[1] / "src" / "helmlab" / "estimlab" / "golden.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=mp.cpu_count())
    args = ap.parse_args()
    frozen = {}
    with mp.Pool(args.workers) as pool:
        for eid in GOLDEN_GRIDS:
            lams, data, rv = golden_grid(eid)
            res = sweep(eid, lams, data, r_values=rv, pool=pool)
            frozen[eid] = {"grid": "golden", "sup_Q": res.sup_Q, "points": len(res.rows)}
            print(f"{eid}: sup_Q = {res.sup_Q:.17g} over {len(res.rows)} points")
    OUT.write_text(json.dumps(frozen, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
