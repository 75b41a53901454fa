"""Command-line front end.

    lipquo analyze --poly job.json
    lipquo verify  [--poly job.json] [--suite all|construction|metric|demos]
    lipquo grid    --poly job.json --grid xmin,xmax,ymin,ymax,nx,ny --out grid.csv
    lipquo fiber   --poly job.json --w re,im

A job file is JSON; see ``CONFIG_SCHEMA``.  Command-line flags override the
file.  Reports are JSON with sorted keys and no timestamps, so identical
inputs give byte-identical output.

Exit codes: 0 pass, 1 property violation, 2 config error, 3 numerical
failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import jsonschema
import numpy as np

from . import suite
from . import verify as V
from .params import ConstructionError
from .polycore import Polynomial, PolynomialError, RootFindingError
from .quotient import DEFAULT_PRECISION, build

EXIT_PASS, EXIT_VIOLATION, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4

GRID_HEADER = ["z_re", "z_im", "F2_re", "F2_im"]
GRID_H2_HEADER = ["h2_re", "h2_im"]

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "polynomial": {"type": "array", "items": _PAIR, "minItems": 1},
        "seed": {"type": "integer", "minimum": 0},
        "precision": {"enum": ["double", "extended"]},
        "samples": {"type": "integer", "minimum": 1},
        "suite": {"enum": sorted(suite.SUITES)},
        "force_c": {"type": "number", "exclusiveMinimum": 0},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"multiplicity": {"type": "number", "exclusiveMinimum": 0}},
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["xmin", "xmax", "ymin", "ymax", "nx", "ny"],
            "properties": {
                "xmin": {"type": "number"},
                "xmax": {"type": "number"},
                "ymin": {"type": "number"},
                "ymax": {"type": "number"},
                "nx": {"type": "integer"},
                "ny": {"type": "integer"},
                "include_h2": {"type": "boolean"},
            },
        },
        "w": _PAIR,
        "out": {"type": "string"},
    },
}

DEFAULTS = {"seed": 0, "precision": DEFAULT_PRECISION}


class ConfigError(ValueError):
    pass


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return cfg


def validate(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"schema error at {where}: {exc.message}") from exc
    return {**DEFAULTS, **cfg}


def _parse_floats(text: str, count: int, what: str) -> list:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"{what} must be {count} comma-separated numbers") from None
    if len(vals) != count:
        raise ConfigError(f"{what} must be {count} comma-separated numbers")
    return vals


def merged_config(args) -> dict:
    cfg = load_config(getattr(args, "poly", None))
    for key in ("seed", "samples", "suite", "force_c", "precision", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "grid", None):
        xmin, xmax, ymin, ymax, nx, ny = _parse_floats(args.grid, 6, "--grid")
        if nx != int(nx) or ny != int(ny):
            raise ConfigError("--grid resolution must be integers")
        cfg["grid"] = {**cfg.get("grid", {}), "xmin": xmin, "xmax": xmax, "ymin": ymin, "ymax": ymax, "nx": int(nx), "ny": int(ny)}
    if getattr(args, "include_h2", False):
        cfg.setdefault("grid", {})["include_h2"] = True
    if getattr(args, "w", None):
        cfg["w"] = _parse_floats(args.w, 2, "--w")
    return validate(cfg)


def _polynomial(cfg: dict) -> Polynomial:
    if "polynomial" not in cfg:
        raise ConfigError("config has no 'polynomial'")
    P = Polynomial.from_pairs(cfg["polynomial"], cfg["precision"])
    if P.degree < 1:
        raise ConfigError("constant polynomial has no quotient construction")
    return P


def _build(cfg: dict):
    return build(_polynomial(cfg), cfg["precision"], cfg["seed"])


def _emit(report: dict, out: str | None):
    text = json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item() if not isinstance(obj, np.longdouble) else float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(np.real(obj)), float(np.imag(obj))]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serialisable: {type(obj).__name__}")


# ----------------------------------------------------------------------
# commands


def cmd_analyze(cfg: dict) -> tuple[dict, int]:
    q = _build(cfg)
    report = {"command": "analyze", "seed": cfg["seed"], **q.summary()}
    if q.consts is not None:
        report["constant_chain"] = V.constant_chain(q)
        pairs = cfg.get("samples", 10_000)
        report["lipschitz_estimate"] = suite.lipschitz_estimate(q, pairs, cfg["seed"]).to_record()
    else:
        report["lipschitz_estimate"] = {"value": abs(complex(q.a)), "label": "exact (linear map)"}
    return report, EXIT_PASS


def _corpus_name(pairs) -> str:
    """Corpus key for a known polynomial (so corpus-specific checks apply), else "P"."""
    norm = [[float(a), float(b)] for a, b in pairs]
    for name, c in suite.CORPUS.items():
        if [[float(a), float(b)] for a, b in c] == norm:
            return name
    return "P"


def cmd_verify(cfg: dict) -> tuple[dict, int]:
    name = cfg.get("suite", "all")
    if name == "demos":
        maps = {}
    elif "polynomial" in cfg:
        P = _polynomial(cfg)
        maps = {_corpus_name(cfg["polynomial"]): build(P, cfg["precision"], cfg["seed"])}
    else:
        maps = suite.corpus_maps(cfg["precision"], cfg["seed"])
    results = suite.run(suite.SUITES[name], maps, cfg["seed"], cfg.get("samples"), cfg.get("force_c"))
    results.sort(key=lambda r: r.number)
    ok = all(r.passed for r in results)
    report = {
        "command": "verify",
        "seed": cfg["seed"],
        "suite": name,
        "precision": cfg["precision"],
        "samples": cfg.get("samples"),
        "force_c": cfg.get("force_c"),
        "polynomials": {k: q.P.to_pairs() for k, q in sorted(maps.items())},
        "criteria": [r.to_record() for r in results],
        "summary": [r.line() for r in results],
        "pass": ok,
    }
    return report, EXIT_PASS if ok else EXIT_VIOLATION


def grid_rows(q, grid: dict):
    xmin, xmax, ymin, ymax = (float(grid[k]) for k in ("xmin", "xmax", "ymin", "ymax"))
    nx, ny = int(grid["nx"]), int(grid["ny"])
    if not (xmin < xmax and ymin < ymax and nx >= 1 and ny >= 1):
        raise ConfigError("grid rectangle is empty")
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    Z = (xs[None, :] + 1j * ys[:, None]).reshape(-1).astype(q.dtype)
    F = q.F2(Z)
    cols = [Z.real, Z.imag, F.real, F.imag]
    if grid.get("include_h2"):
        Hz = q.H.forward(Z)
        cols += [np.real(Hz), np.imag(Hz)]
    return np.stack([np.asarray(c, dtype=float) for c in cols], axis=1)


def cmd_grid(cfg: dict) -> tuple[dict, int]:
    if "grid" not in cfg:
        raise ConfigError("grid command needs --grid or a 'grid' entry")
    if not cfg.get("out"):
        raise ConfigError("grid command needs --out")
    q = _build(cfg)
    rows = grid_rows(q, cfg["grid"])
    header = GRID_HEADER + (GRID_H2_HEADER if cfg["grid"].get("include_h2") else [])
    with open(cfg["out"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
    return {"command": "grid", "rows": int(rows.shape[0]), "out": cfg["out"], "header": header}, EXIT_PASS


def cmd_fiber(cfg: dict) -> tuple[dict, int]:
    if "w" not in cfg:
        raise ConfigError("fiber command needs --w re,im")
    q = _build(cfg)
    w = complex(*cfg["w"])
    pts = q.fiber(np.asarray(w).astype(q.dtype))
    res = np.abs(q.F2(pts) - w)
    pts = sorted(pts, key=lambda z: (float(z.real), float(z.imag)))
    return {
        "command": "fiber",
        "w": [w.real, w.imag],
        "points": [[float(z.real), float(z.imag)] for z in pts],
        "max_residual": float(np.max(res)),
        "discrete": V.discreteness_check(q, np.asarray(w).astype(q.dtype)),
    }, EXIT_PASS


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "grid": cmd_grid, "fiber": cmd_fiber}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lipquo", description="Lipschitz quotient construction for complex polynomials")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--poly", help="JSON job file (polynomial as [re, im] pairs, ascending degree)")
        p.add_argument("--seed", type=int)
        p.add_argument("--precision", choices=["double", "extended"])
        p.add_argument("--out", help="write the report (or grid CSV) here")
        return p

    common(sub.add_parser("analyze", help="critical points and construction constants")).add_argument("--samples", type=int)
    v = common(sub.add_parser("verify", help="run acceptance checks"))
    v.add_argument("--suite", choices=sorted(suite.SUITES))
    v.add_argument("--samples", type=int, help="scale sample counts (10000 = published defaults)")
    v.add_argument("--force-c", dest="force_c", type=float, help="use this co-Lipschitz constant everywhere")
    g = common(sub.add_parser("grid", help="export F2 on a rectangle as CSV"))
    g.add_argument("--grid", help="xmin,xmax,ymin,ymax,nx,ny")
    g.add_argument("--include-h2", dest="include_h2", action="store_true")
    f = common(sub.add_parser("fiber", help="preimage of a point under F2"))
    f.add_argument("--w", help="target as re,im")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        cfg = merged_config(args)
        report, code = COMMANDS[args.command](cfg)
    except (ConfigError, PolynomialError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RootFindingError, ConstructionError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        detail = getattr(exc, "residuals", None)
        if detail is not None:
            print(f"residuals: {detail}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        _emit(report, None if args.command == "grid" else cfg.get("out"))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
