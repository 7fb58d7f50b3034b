"""Command-line front end: identity checks, estimate sweeps, probes and reports.

Every run writes ``summary.json`` (schema 1) into the output directory, plus
CSV tables and two-column plot-data files where relevant.  Exit codes: 0 all
checks pass, 2 a check failed, 3 configuration or input error, 4 numerical
accuracy error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import multiprocessing
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import diskmodal, specfun
from .diskmodal import CircleData
from .errors import AccuracyError, ConfigError, HelmlabError, InputError
from .estimlab import engine, probes, registry
from .identities import TOLERANCES, regression_grid

SCHEMA = 1
COMMANDS = ("verify-identities", "sweep", "specfun-selftest", "obstruction", "bootstrap", "report")
CSV_COLUMNS = ("estimate_id", "re_lambda", "im_lambda", "data_id", "r", "Q", "lhs", "rhs", "s")
EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_ACCURACY = 0, 2, 3, 4
SLOPE_TOL = 0.05


@dataclass
class RunConfig:
    """Run parameters; any field may come from a JSON file and be overridden by flags.

    The frequency grid is ``t`` log-spaced in ``[lam_min, lam_max]`` along the
    rays ``t e^{i phi}``, ``phi`` in ``angles``; leaving ``lam_min`` unset uses
    each estimate's golden grid.
    """

    command: str = "sweep"
    estimates: list = field(default_factory=list)
    lam_min: float | None = None
    lam_max: float | None = None
    lam_count: int = 12
    angles: list = field(default_factory=lambda: [0.0])
    re_min: float | None = None
    modes: list | None = None
    r_values: list | None = None
    s_values: list | None = None
    output: str = "helmlab-out"
    seed: int = 0
    seeds: int = 20
    workers: int = 0
    tolerances: dict = field(default_factory=dict)
    kind: str = "neumann-complex"
    k: int = 1
    input: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for eid in self.estimates:
            if eid not in registry.REGISTRY:
                raise ConfigError(f"unknown estimate id {eid!r}")
        for name in ("lam_min", "lam_max"):
            v = getattr(self, name)
            if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive number")
        if (self.lam_min is None) != (self.lam_max is None):
            raise ConfigError("lam_min and lam_max go together")
        if self.lam_min is not None and self.lam_max < self.lam_min:
            raise ConfigError("lam_max must not be below lam_min")
        if int(self.lam_count) != self.lam_count or self.lam_count < 1:
            raise ConfigError("lam_count must be a positive integer")
        if self.workers < 0 or self.seeds < 1:
            raise ConfigError("workers must be >= 0 and seeds >= 1")
        if self.modes is not None and any(abs(int(n)) > diskmodal.N_MAX for n in self.modes):
            raise ConfigError(f"modes are limited to |n| <= {diskmodal.N_MAX}")
        bad = set(self.tolerances) - set(TOLERANCES)
        if bad:
            raise ConfigError(f"unknown tolerance keys {sorted(bad)}")
        if any(not (isinstance(v, (int, float)) and v > 0) for v in self.tolerances.values()):
            raise ConfigError("tolerances must be positive")
        if self.kind not in probes.BOOTSTRAP_KINDS:
            raise ConfigError(f"unknown bootstrap kind {self.kind!r}")
        return self

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("the config file must hold a JSON object")
        return cls.from_dict(d)


# ------------------------------------------------------------------- artifacts


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(path, rows, columns=CSV_COLUMNS):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])


def _slug(text):
    return "".join(ch if ch.isalnum() or ch in "-." else "_" for ch in str(text))


def write_plot_data(directory, res: engine.SweepResult):
    """One ``|lambda| Q`` file per (datum, r, s, ray) series."""
    directory.mkdir(parents=True, exist_ok=True)
    series = {}
    for row in res.rows:
        z = complex(row["re_lambda"], row["im_lambda"])
        key = (row["data_id"], row["r"], row["s"], round(math.atan2(z.imag, z.real), 6))
        series.setdefault(key, []).append((abs(z), row["Q"]))
    for (did, r, s, phi), pts in series.items():
        name = f"{_slug(res.estimate_id)}__{_slug(did)}__r{_slug(r)}__s{_slug(s)}__phi{phi:+.6f}.dat"
        with open(directory / name, "w", encoding="utf-8") as fh:
            fh.write("# |lambda| Q\n")
            for x, y in sorted(pts):
                fh.write("%.17g %.17g\n" % (x, y))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def write_summary(outdir, payload):
    outdir.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    (outdir / "summary.json").write_text(text + "\n", encoding="utf-8")


# -------------------------------------------------------------------- commands


def _pool(cfg):
    return multiprocessing.Pool(cfg.workers) if cfg.workers > 1 else None


def _grid_for(cfg, eid):
    if eid in engine.GOLDEN_GRIDS and cfg.lam_min is None and cfg.modes is None:
        lams, data, rv = engine.golden_grid(eid)
        if cfg.r_values is None:
            return lams, data, rv, "golden"
        return lams, data, cfg.r_values, None
    spec = registry.get(eid)
    if cfg.lam_min is None:
        lo, hi = (1.0, 1e3)
    else:
        lo, hi = cfg.lam_min, cfg.lam_max
    re_min = cfg.re_min
    if re_min is None and spec.regime == "complex":
        re_min = spec.omega
    # real-regime estimates only take the phi = 0 ray of a mixed run
    angles = [0.0] if spec.regime == "real" else cfg.angles
    lams = [0.0] if spec.regime == "zero" else engine.ray_grid(lo, hi, cfg.lam_count, angles, re_min)
    if cfg.modes is None or spec.problem.startswith("halfspace"):
        data = engine.default_family(spec)
    elif spec.problem.startswith("source"):
        data = [engine.source_datum(n) for n in cfg.modes]
    else:
        data = [engine.mode_datum(n) for n in cfg.modes]
    return lams, data, cfg.r_values, None


def cmd_sweep(cfg, outdir):
    ids = cfg.estimates or list(engine.GOLDEN_GRIDS)
    checks, rows = [], []
    pool = _pool(cfg)
    try:
        for eid in ids:
            lams, data, rv, grid = _grid_for(cfg, eid)
            if not lams:
                raise ConfigError(f"{eid}: the frequency grid is empty after the Re(lambda) cut")
            res = engine.sweep(eid, lams, data, r_values=rv, s_values=cfg.s_values,
                               pool=pool, grid_name=grid)
            rows.extend(res.rows)
            write_plot_data(outdir / "plot-data", res)
            d = res.as_dict()
            d["passed"] = bool(res.passed and res.regression_ok is not False)
            d["slopes"] = [f for f in res.fits if f["dominant"]]
            d.pop("fits")
            checks.append(d)
    finally:
        if pool is not None:
            pool.close()
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(outdir / "sweep.csv", rows)
    return checks, {}


def _apply_tolerances(reports, overrides):
    for rep in reports:
        if rep.identity in overrides:
            rep.tolerance = float(overrides[rep.identity])
            rep.passed = rep.residual <= rep.tolerance
    return reports


def cmd_verify_identities(cfg, outdir):
    pool = _pool(cfg)
    try:
        reports = regression_grid(seeds=range(cfg.seed, cfg.seed + cfg.seeds), pool=pool)
    finally:
        if pool is not None:
            pool.close()
    reports = _apply_tolerances(reports, cfg.tolerances)
    cols = ("identity", "problem", "seed", "mode", "re_lambda", "im_lambda", "residual", "tolerance", "pass")
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(outdir / "identities.csv", [r.as_dict() for r in reports], cols)
    checks = []
    for name in TOLERANCES:
        sel = [r for r in reports if r.identity == name]
        worst = max((r.residual for r in sel), default=0.0)
        checks.append({"check": name, "cases": len(sel), "max_residual": worst,
                       "tolerance": sel[0].tolerance if sel else TOLERANCES[name],
                       "passed": all(r.passed for r in sel)})
    return checks, {}


def specfun_selftest(seed=0, samples=400, nmax=128, zmax=500.0):
    """Random Wronskian and recurrence residuals over ``n <= nmax``, ``|z| <= zmax``,
    ``|arg z| <= pi/2 - 0.05``; returns the two maxima."""
    rng = np.random.default_rng(seed)
    ns = rng.integers(0, nmax + 1, samples)
    mod = np.exp(rng.uniform(math.log(1e-3), math.log(zmax), samples))
    arg = rng.uniform(-(math.pi / 2 - 0.05), math.pi / 2 - 0.05, samples)
    zs = mod * np.exp(1j * arg)
    wr = max(float(specfun.wronskian_residual(int(n), z)) for n, z in zip(ns, zs))
    rec = max(float(specfun.recurrence_residual(max(int(n), 1), z)) for n, z in zip(ns, zs))
    return wr, rec


def cmd_specfun(cfg, outdir):
    wr, rec = specfun_selftest(cfg.seed)
    return [
        {"check": "wronskian", "max_residual": wr, "tolerance": 1e-10, "passed": wr < 1e-10},
        {"check": "recurrence", "max_residual": rec, "tolerance": 1e-9, "passed": rec < 1e-9},
    ], {}


def cmd_obstruction(cfg, outdir):
    modes = cfg.modes or [0]
    h = CircleData.from_modes({int(n): 1.0 for n in modes})
    lams = None
    if cfg.lam_min is not None:
        lams = np.geomspace(cfg.lam_min, cfg.lam_max, cfg.lam_count)
    slope, err = probes.obstruction_probe(h, lams)
    ok = abs(slope + 2.0) <= SLOPE_TOL
    return [{"check": "obstruction-slope", "slope": slope, "stderr": err,
             "predicted": -2.0, "passed": ok}], {}


def cmd_bootstrap(cfg, outdir):
    r = probes.bootstrap_sequence(cfg.kind, cfg.k)
    print(r)
    return [{"check": "bootstrap", "kind": cfg.kind, "k": cfg.k, "value": str(r),
             "passed": True}], {"value": str(r)}


def render_report(indir):
    """Human-readable table of a previous run's ``summary.json``."""
    path = Path(indir) / "summary.json"
    if not path.is_file():
        raise InputError(f"no run artifacts in {indir}")
    summary = json.loads(path.read_text())
    lines = [f"command: {summary.get('command')}   status: {summary.get('status')}"]
    for c in summary.get("checks", []):
        mark = "PASS" if c.get("passed") else "FAIL"
        if "estimate_id" in c:
            gold = c.get("golden")
            gtxt = "n/a" if gold is None else f"{gold:.6g}"
            lines.append(f"[{mark}] {c['estimate_id']}: sup_Q = {c['sup_Q']:.6g} (golden {gtxt})")
            for f in c.get("slopes", []):
                flag = "  " if abs(f["delta"]) <= SLOPE_TOL else " *"
                r = "" if f["r"] is None else f" r={f['r']}"
                lines.append(f"   {flag} {f['data_id']:>10}{r} {f['term']:<32} slope {f['slope']:+.3f}"
                             f"  predicted {f['predicted']:+.3f}  delta {f['delta']:+.3f}")
        else:
            name = c.get("check")
            extra = {k: v for k, v in c.items() if k not in ("check", "passed")}
            lines.append(f"[{mark}] {name}: " + ", ".join(f"{k}={v}" for k, v in sorted(extra.items())))
    if summary.get("reason"):
        lines.append(f"reason: {summary['reason']} ({summary.get('message', '')})")
    return "\n".join(lines)


def cmd_report(cfg, outdir):
    print(render_report(cfg.input or cfg.output))
    return None, {}


HANDLERS = {
    "verify-identities": cmd_verify_identities,
    "sweep": cmd_sweep,
    "specfun-selftest": cmd_specfun,
    "obstruction": cmd_obstruction,
    "bootstrap": cmd_bootstrap,
    "report": cmd_report,
}


def run(cfg: RunConfig) -> int:
    """Execute ``cfg`` and write its summary; returns the exit code."""
    outdir = Path(cfg.output)
    payload = {"schema": SCHEMA, "command": cfg.command, "config": cfg.to_dict()}
    try:
        cfg.validate()
        checks, extra = HANDLERS[cfg.command](cfg, outdir)
    except AccuracyError as exc:
        code, payload["reason"], payload["message"] = EXIT_ACCURACY, exc.reason, str(exc)
    except HelmlabError as exc:
        code, payload["reason"], payload["message"] = EXIT_CONFIG, exc.reason, str(exc)
    else:
        if checks is None:  # report renders an existing run and writes nothing
            return EXIT_OK
        payload.update(extra)
        payload["checks"] = checks
        failed = [c for c in checks if not c["passed"]]
        code = EXIT_CHECK if failed else EXIT_OK
        if failed:
            payload["reason"] = "check-failed"
    payload["status"] = {EXIT_OK: "ok", EXIT_CHECK: "check-failed",
                         EXIT_CONFIG: "config-error", EXIT_ACCURACY: "accuracy-error"}[code]
    if cfg.command == "report" and code != EXIT_OK:
        print(f"error: {payload['message']}", file=sys.stderr)
        return code
    write_summary(outdir, payload)
    if code not in (EXIT_OK, EXIT_CHECK):
        print(f"error: {payload['message']}", file=sys.stderr)
    return code


# ------------------------------------------------------------------------ argv


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser():
    p = argparse.ArgumentParser(prog="helmlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--estimates", type=lambda s: [x for x in s.split(",") if x])
    p.add_argument("--lam-min", type=float)
    p.add_argument("--lam-max", type=float)
    p.add_argument("--lam-count", type=int)
    p.add_argument("--angles", type=_floats, help="ray angles in radians, comma separated")
    p.add_argument("--re-min", type=float)
    p.add_argument("--modes", type=_ints)
    p.add_argument("--r-values", type=_floats)
    p.add_argument("--s-values", type=_floats)
    p.add_argument("--output", "-o")
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", type=int, help="number of seeds in the identity grid")
    p.add_argument("--workers", type=int)
    p.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                   help="override an identity tolerance; may be repeated")
    p.add_argument("--kind", choices=probes.BOOTSTRAP_KINDS)
    p.add_argument("--k", type=int)
    p.add_argument("--input", help="artifact directory for 'report'")
    return p


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_json(args.config) if args.config else RunConfig()
    cfg.command = args.command
    for name in ("estimates", "lam_min", "lam_max", "lam_count", "angles", "re_min", "modes",
                 "r_values", "s_values", "output", "seed", "seeds", "workers", "kind", "k", "input"):
        v = getattr(args, name)
        if v is not None:
            setattr(cfg, name, v)
    for item in args.tolerance or []:
        key, sep, val = item.partition("=")
        try:
            cfg.tolerances[key] = float(val)
        except ValueError:
            raise ConfigError(f"bad tolerance override {item!r}") from None
        if not sep:
            raise ConfigError(f"bad tolerance override {item!r}")
    return cfg


def main(argv=None):
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
