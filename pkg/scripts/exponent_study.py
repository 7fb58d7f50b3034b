"""Fitted decay exponents of every real-frequency estimate against the predicted ones.

For each estimate the dominant left-hand term is fitted over |lambda| in [10, 1e3]
for a few low modes.  A negative delta means the datum does not saturate the
estimate; delta > 0.05 on a low mode would contradict it.  Source modes with
n >= 1 only reach their asymptotic slope once lambda >> n^2, so their deltas
drift upward with n on this range.

Usage: python3 scripts/exponent_study.py [--modes 1,2,8] [--count 12]
"""

import argparse

from helmlab.estimlab import REGISTRY, mode_datum, ray_grid, source_datum, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modes", default="1,2,8")
    ap.add_argument("--count", type=int, default=12)
    args = ap.parse_args()
    modes = [int(m) for m in args.modes.split(",")]
    lams = ray_grid(10, 1e3, args.count)
    print(f"{'estimate':<36}{'datum':<30}{'term':<34}{'slope':>8}{'pred':>8}{'delta':>8}")
    worst = -float("inf")
    for sid, spec in REGISTRY.items():
        if spec.regime != "real":
            continue
        if spec.problem.startswith("halfspace"):
            data = None
        elif spec.problem.startswith("source"):
            data = [source_datum(0)] + [source_datum(n) for n in modes]
        else:
            data = [mode_datum(n) for n in modes if n or not spec.mean_zero_required]
        res = sweep(spec, lams, data)
        for f in res.fits:
            if not f["dominant"]:
                continue
            worst = max(worst, f["delta"])
            r = "" if f["r"] is None else f" r={f['r']}"
            print(f"{sid:<36}{f['data_id'] + r:<30}{f['term']:<34}"
                  f"{f['slope']:>8.3f}{f['predicted']:>8.3f}{f['delta']:>8.3f}")
    print(f"largest delta: {worst:+.3f}")


if __name__ == "__main__":
    main()
