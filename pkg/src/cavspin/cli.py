"""``cavspin`` command-line front end.

    cavspin run <config> [--seed K] [--out DIR] [--format csv,json]
    cavspin list-scenarios
    cavspin validate <config>

Exit codes: 0 success, 2 config error, 3 numerical failure.  On failure a
single JSON object describing the error is written to stderr.
``CAVSPIN_THREADS`` caps the BLAS thread pool.
"""

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from .config import ConfigError, parse_config

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
FORMATS = ("csv", "json")
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def _apply_thread_cap():
    raw = os.environ.get("CAVSPIN_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigError(f"CAVSPIN_THREADS must be a positive integer, got {raw!r}", key="CAVSPIN_THREADS")
    # only effective before numpy loads its BLAS, hence the lazy imports below
    for var in _THREAD_VARS:
        os.environ[var] = str(n)
    return n


def _jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, int):
        return v
    v = float(v)
    return v if math.isfinite(v) else str(v)


def _dump(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _csv_text(curve):
    lines = [",".join(curve.columns)]
    lines += [",".join(f"{x:.12g}" for x in row) for row in curve.rows]
    return "\n".join(lines) + "\n"


def _versions():
    import numpy
    import scipy

    from . import __version__
    return {"cavspin": __version__, "numpy": numpy.__version__, "scipy": scipy.__version__}


def _parse_formats(text):
    fmts = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise ConfigError(f"unknown output format(s) {bad or text!r}; choose from {','.join(FORMATS)}")
    return fmts


def run_config(cfg, out_dir, formats):
    """Run a parsed config and write its outputs.  Returns the list of files written."""
    from .scenarios import REGISTRY
    sc = REGISTRY[cfg.scenario]
    params = sc.resolve(cfg.params)
    t0 = time.perf_counter()
    try:
        outcome = sc.run(params, cfg.seed)
    except ConfigError:
        raise
    except Exception as e:  # module failures are reported with scenario context
        raise ScenarioFailure(cfg.scenario, e) from e
    wall = time.perf_counter() - t0

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        for stem in sorted(outcome.curves):
            path = out / f"{stem}.csv"
            path.write_text(_csv_text(outcome.curves[stem]))
            written.append(path.name)
    if "json" in formats:
        if "csv" not in formats:
            curves = {k: {"columns": c.columns, "rows": c.rows.tolist()} for k, c in outcome.curves.items()}
            (out / "curves.json").write_text(_dump(curves))
            written.append("curves.json")
        results = {"scenario": cfg.scenario, "seed": cfg.seed, "seed_used": sc.uses_seed,
                   "params": params, "results": outcome.scalars, "versions": _versions(),
                   "files": sorted(written + ["results.json", "timing.json"])}
        (out / "results.json").write_text(_dump(results))
        (out / "timing.json").write_text(_dump({"scenario": cfg.scenario, "wall_time_s": wall}))
        written += ["results.json", "timing.json"]
    return sorted(written), wall


class ScenarioFailure(Exception):
    def __init__(self, scenario, cause):
        super().__init__(f"scenario {scenario!r} failed: {type(cause).__name__}: {cause}")
        self.scenario = scenario
        self.cause = cause

    def to_dict(self):
        return {"error": "numeric", "scenario": self.scenario, "type": type(self.cause).__name__,
                "message": str(self.cause)}


def _fail(err, code):
    sys.stderr.write(json.dumps(err.to_dict(), sort_keys=True) + "\n")
    return code


def _load(path):
    from .scenarios import known_keys
    return parse_config(path, known=known_keys())


def build_parser():
    ap = argparse.ArgumentParser(prog="cavspin", description="Batch runner for cavity spin-physics scenarios.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario config")
    r.add_argument("config")
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    r.add_argument("--out", default=None, help="output directory (default: out/<scenario>)")
    r.add_argument("--format", default="csv,json", help="comma-separated subset of csv,json")
    sub.add_parser("list-scenarios", help="print the available scenarios")
    v = sub.add_parser("validate", help="check a config without running it")
    v.add_argument("config")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _apply_thread_cap()
        if args.command == "list-scenarios":
            from .scenarios import REGISTRY
            for name in sorted(REGISTRY):
                sc = REGISTRY[name]
                req = f" (requires: {', '.join(sorted(sc.required))})" if sc.required else ""
                print(f"{name:16s} {sc.summary}{req}")
            return EXIT_OK
        cfg = _load(args.config)
        if args.command == "validate":
            print(json.dumps({"ok": True, "scenario": cfg.scenario}, sort_keys=True))
            return EXIT_OK
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg.seed = args.seed
        formats = _parse_formats(args.format)
        out_dir = args.out or os.path.join("out", cfg.scenario)
        files, wall = run_config(cfg, out_dir, formats)
        print(json.dumps({"ok": True, "scenario": cfg.scenario, "out": str(out_dir), "files": files,
                          "wall_time_s": round(wall, 3)}, sort_keys=True))
        return EXIT_OK
    except ConfigError as e:
        return _fail(e, EXIT_CONFIG)
    except ScenarioFailure as e:
        return _fail(e, EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
