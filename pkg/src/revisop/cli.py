"""Command-line front end: ``revisop <command> [options]``.

Exit status: 0 when every checked margin is within tolerance (a missing
comparison triangle counts as a reported outcome), 2 when a check fails,
1 on usage or data errors.  Output goes to ``--out``, else to
``$REVISOP_OUTPUT_DIR/<command>.<ext>``, else to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

from . import __version__
from .errors import GeometryError
from .experiments import (
    CONVERGENCE_COLUMNS,
    PL_SWEEP_COLUMNS,
    TRIANGLE_SWEEP_COLUMNS,
    cone_convergence,
    cone_info,
    pl_trial,
    triangle_row,
    triangle_trial,
)

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "REVISOP_OUTPUT_DIR"

EXIT_OK, EXIT_DATA, EXIT_FAIL = 0, 1, 2

DEFAULT_TOL = {
    "cone-info": 1e-12,       # relative to area
    "pl-check": 0.02,         # relative to area and to L0
    "pl-sweep": 0.02,
    "triangle-check": 1e-7,   # absolute
    "triangle-sweep": 1e-7,
    "disk-check": 1e-4,       # absolute
    "convergence": 0.02,      # relative margin at the finest level
}
DEFAULT_REFINE = 16

_ANGLE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(pi|π)?\s*$")


def parse_angle(text: str) -> float:
    """A float, optionally followed by ``pi``: ``3pi``, ``0.5pi``, ``pi``, ``-pi``, ``1.2``."""
    t = text.strip()
    sign = 1.0
    if t[:1] in "+-" and t[1:].strip() in ("pi", "π"):
        sign, t = (-1.0 if t[0] == "-" else 1.0), t[1:]
    m = _ANGLE.match(t)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    coef = float(m.group(1)) if m.group(1) is not None else 1.0
    return sign * coef * (math.pi if m.group(2) else 1.0)


def parse_floats(text: str, n: int | None = None, angle: bool = False) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    conv = parse_angle if angle else float
    try:
        vals = tuple(conv(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}: {exc}") from exc
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated values, got {text!r}")
    return vals


def parse_points(text: str, angle_second: bool = False) -> tuple:
    """Three points ``x,y;x,y;x,y`` (cone points are ``r,phi`` with phi allowing ``pi``)."""
    pts = [p for p in text.split(";") if p.strip()]
    if len(pts) != 3:
        raise argparse.ArgumentTypeError(f"expected three ';'-separated points, got {text!r}")
    out = []
    for p in pts:
        a, b = parse_floats(p, 2, angle=False) if not angle_second else _cone_pair(p)
        out.append((a, b))
    return tuple(out)


def _cone_pair(text: str):
    r, phi = [s for s in text.split(",")]
    return float(r), parse_angle(phi)


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    refine: int = DEFAULT_REFINE
    tol: float | None = None
    out: str | None = None
    fmt: str | None = None
    workers: int = 1

    @property
    def tolerance(self) -> float:
        return DEFAULT_TOL[self.command] if self.tol is None else self.tol


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DATA, f"{self.prog}: error: {message}\n")


# -- output ---------------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def report_json(cfg: RunConfig, status: str, report: dict, **extra) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "revisop_version": __version__, "command": cfg.command,
           "status": status, "tolerance": cfg.tolerance, **extra, "report": report}
    return json.dumps(_json_safe(doc), indent=2, sort_keys=False) + "\n"


def _destination(cfg: RunConfig, ext: str) -> Path | None:
    if cfg.out:
        return Path(cfg.out)
    d = os.environ.get(OUTPUT_DIR_ENV)
    if d:
        return Path(d) / f"{cfg.command}.{ext}"
    return None


def emit(cfg: RunConfig, text: str, ext: str) -> None:
    dest = _destination(cfg, ext)
    if dest is None:
        sys.stdout.write(text)
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(text)
    print(f"wrote {dest}", file=sys.stderr)


def _ordered_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- commands --------------------------------------------------------------------------------

def cmd_cone_info(cfg: RunConfig) -> int:
    p = cfg.params
    info = cone_info(p["theta"], p["lam"], p["radius"])
    ok = info["margin"] >= -cfg.tolerance * info["area"]
    emit(cfg, report_json(cfg, "pass" if ok else "fail", info), "json")
    return EXIT_OK if ok else EXIT_FAIL


def _pl_base(text: str):
    if ":" in text:
        face, bary = text.split(":", 1)
        return int(face), parse_floats(bary, 3)
    return int(text)


def cmd_pl_check(cfg: RunConfig) -> int:
    from .plsurf import (PLSurface, check_level_length_bound, gauss_bonnet_residual, geodesic_distance,
                         level_curve_profile, verify_disk_inequality)

    p = cfg.params
    s = PLSurface.load(p["mesh"])
    base = _pl_base(p["base"])
    field = geodesic_distance(s, base, cfg.refine)
    rep = verify_disk_inequality(s, base, p["radius"], cfg.refine, field=field)
    prof = level_curve_profile(s, base, p["radius"], p["samples"], cfg.refine, field=field)
    L0 = prof[0][1]
    viol = check_level_length_bound(prof, L0, rep.omega_minus_total)
    tol = cfg.tolerance
    ok = rep.margin >= -tol * rep.area and viol >= -tol * L0
    status = "pass" if ok else "fail"
    if rep.touches_boundary:
        status, ok = "boundary", False
    body = rep.as_dict() | {"level_violation": viol, "gauss_bonnet_residual": gauss_bonnet_residual(s),
                            "profile": [list(x) for x in prof]}
    emit(cfg, report_json(cfg, status, body, refinement_level=cfg.refine, mesh=str(p["mesh"])), "json")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_pl_sweep(cfg: RunConfig) -> int:
    p = cfg.params
    fn = partial(pl_trial, cfg.seed, refinement_level=cfg.refine, tol=cfg.tolerance)
    rows = _ordered_map(fn, range(p["trials"]), cfg.workers)
    emit(cfg, rows_to_csv(rows, PL_SWEEP_COLUMNS), "csv")
    failed = sum(not r["passed"] for r in rows)
    print(f"pl-sweep: {len(rows) - failed}/{len(rows)} trials pass "
          f"(seed {cfg.seed}, refine {cfg.refine}, tol {cfg.tolerance:g})", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _triangle_source(p: dict):
    from .cone import ConePoint, ConeSpec
    from .trianglecmp import ConeSource, ConstantCurvatureSource

    kind = p["source"]
    if kind in ("flat", "hyperbolic"):
        if p.get("sides") is None:
            raise UsageError(f"--source {kind} needs --sides a,b,c")
        lam = 0.0 if kind == "flat" else (-1.0 if p.get("curvature") is None else p["curvature"])
        if kind == "hyperbolic" and not lam < 0:
            raise UsageError("--curvature must be negative for a hyperbolic source")
        return ConstantCurvatureSource(lam, *p["sides"])
    if p.get("points") is None:
        raise UsageError(f"--source {kind} needs --points")
    if kind == "cone":
        if p.get("theta") is None:
            raise UsageError("--source cone needs --theta")
        lam = 0.0 if p.get("curvature") is None else p["curvature"]
        pts = parse_points(p["points"], angle_second=True)
        return ConeSource(ConeSpec(lam, p["theta"]), *(ConePoint(r, phi) for r, phi in pts))
    if kind == "conformal":
        from .riemann import ConformalSource, load_surface

        return ConformalSource(load_surface(p["metric"]), *parse_points(p["points"]))
    raise UsageError(f"unknown source {kind!r}")


def cmd_triangle_check(cfg: RunConfig) -> int:
    from .trianglecmp import verify_triangle_theorem

    p = cfg.params
    src = _triangle_source(p)
    rep = verify_triangle_theorem(src, p["lambda0"], tol=cfg.tolerance)
    if rep.error:
        status, code = "nonexistent", EXIT_OK
    else:
        ok = rep.margin >= -cfg.tolerance
        status, code = ("pass" if ok else "fail"), (EXIT_OK if ok else EXIT_FAIL)
    body = {"triangle": src.measure().as_dict(), **rep.as_dict()}
    emit(cfg, report_json(cfg, status, body, lambda0=p["lambda0"], source=src.name), "json")
    return code


def cmd_triangle_sweep(cfg: RunConfig) -> int:
    p = cfg.params
    fn = partial(triangle_trial, cfg.seed, source_kind=p["source"], lambda0=p["lambda0"],
                 curvature=p.get("curvature"), metric=p["metric"])
    rows = _ordered_map(fn, range(p["trials"]), cfg.workers)
    emit(cfg, rows_to_csv(rows, TRIANGLE_SWEEP_COLUMNS), "csv")
    counts = {k: sum(r["status"] == k for r in rows) for k in ("pass", "fail", "nonexistent")}
    print(f"triangle-sweep: {counts}", file=sys.stderr)
    return EXIT_OK if counts["fail"] == 0 else EXIT_FAIL


def cmd_disk_check(cfg: RunConfig) -> int:
    from .riemann import certify_curvature, load_surface, measure_disk

    p = cfg.params
    s = load_surface(p["metric"])
    d = measure_disk(s, p["center"], p["radius"], rays=p["rays"])
    cert = certify_curvature(s, p["lambda0"], p["cert_grid"])
    tol = cfg.tolerance
    ok = d.margin >= -tol and d.weil_gap >= -tol
    emit(cfg, report_json(cfg, "pass" if ok else "fail", d.as_dict(), metric=s.name,
                          certificate=cert.as_dict()), "json")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_convergence(cfg: RunConfig) -> int:
    p = cfg.params
    levels = p["levels"] or (4, 8, 16)
    rows = cone_convergence(p["theta"], p["radius"], levels, p["rings"])
    rel = [abs(r["relative_margin"]) for r in rows]
    monotone = all(b < a for a, b in zip(rel, rel[1:]))
    ok = monotone and rel[-1] < cfg.tolerance
    if cfg.fmt == "csv":
        emit(cfg, rows_to_csv(rows, CONVERGENCE_COLUMNS), "csv")
    else:
        emit(cfg, report_json(cfg, "pass" if ok else "fail", {"rows": rows, "monotone": monotone},
                              refinement_levels=list(levels)), "json")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "cone-info": cmd_cone_info,
    "pl-check": cmd_pl_check,
    "pl-sweep": cmd_pl_sweep,
    "triangle-check": cmd_triangle_check,
    "triangle-sweep": cmd_triangle_sweep,
    "disk-check": cmd_disk_check,
    "convergence": cmd_convergence,
}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except KeyError:
        print(f"unknown command {cfg.command!r}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, GeometryError, ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"revisop {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


# -- argument parsing -------------------------------------------------------------------------

def _columns_help(cols) -> str:
    return "CSV columns: " + ", ".join(cols)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps (default 0)")
    g.add_argument("--refine", type=int, default=DEFAULT_REFINE,
                   help=f"Steiner points per PL edge (default {DEFAULT_REFINE})")
    g.add_argument("--tol", type=float, default=None, help="override the command's margin tolerance")
    g.add_argument("--out", default=None, help=f"output file (default ${OUTPUT_DIR_ENV}/<command>.<ext> or stdout)")
    g.add_argument("--workers", type=int, default=1, help="processes for sweeps; output order is by trial")

    parser = _Parser(prog="revisop", description="Reverse isoperimetric and comparison triangle checks.",
                     epilog="Angles accept a 'pi' suffix, e.g. 3pi or 0.5pi.")
    parser.add_argument("--version", action="version", version=f"revisop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cone-info", parents=[common], help="apex disk of a cone against the bound")
    c.add_argument("--theta", type=parse_angle, required=True)
    c.add_argument("--lambda", dest="lam", type=float, default=0.0, help="cone curvature (<= 0)")
    c.add_argument("--radius", type=float, required=True)

    c = sub.add_parser("pl-check", parents=[common], help="one disk on a PL mesh file")
    c.add_argument("--mesh", required=True, help="mesh JSON (PLSurface.save)")
    c.add_argument("--base", required=True, help="vertex index, or face:b0,b1,b2")
    c.add_argument("--radius", type=float, required=True)
    c.add_argument("--samples", type=int, default=17, help="level-curve profile samples")

    c = sub.add_parser("pl-sweep", parents=[common], help="random nonpositively curved PL disks",
                       epilog=_columns_help(PL_SWEEP_COLUMNS))
    c.add_argument("--trials", type=int, default=200)

    srcs = ("cone", "hyperbolic", "conformal", "flat")
    c = sub.add_parser("triangle-check", parents=[common], help="one triangle against its cone comparison")
    c.add_argument("--lambda0", type=float, default=0.0)
    c.add_argument("--source", choices=srcs, required=True)
    c.add_argument("--sides", type=lambda t: parse_floats(t, 3), help="flat/hyperbolic: a,b,c")
    c.add_argument("--curvature", type=float, help="hyperbolic/cone source curvature")
    c.add_argument("--theta", type=parse_angle, help="cone angle")
    c.add_argument("--points", help="cone: r,phi;r,phi;r,phi  conformal: x,y;x,y;x,y")
    c.add_argument("--metric", default="gauss-bump-neg", help="conformal metric name or grid JSON")

    c = sub.add_parser("triangle-sweep", parents=[common], help="random triangles against cone comparisons",
                       epilog=_columns_help(TRIANGLE_SWEEP_COLUMNS))
    c.add_argument("--lambda0", type=float, default=0.0)
    c.add_argument("--source", choices=srcs, default="hyperbolic")
    c.add_argument("--curvature", type=float, help="source curvature (hyperbolic default -1, cone default lambda0)")
    c.add_argument("--metric", default="gauss-bump-neg")
    c.add_argument("--trials", type=int, default=100)

    c = sub.add_parser("disk-check", parents=[common], help="geodesic disk on a conformal surface")
    c.add_argument("--metric", default="poincare")
    c.add_argument("--center", type=lambda t: parse_floats(t, 2), default=(0.0, 0.0))
    c.add_argument("--radius", type=float, required=True)
    c.add_argument("--rays", type=int, default=256)
    c.add_argument("--lambda0", type=float, default=0.0, help="curvature bound to certify")
    c.add_argument("--cert-grid", dest="cert_grid", type=int, default=256)

    c = sub.add_parser("convergence", parents=[common], help="PL cone apex disk under refinement",
                       epilog=_columns_help(CONVERGENCE_COLUMNS))
    c.add_argument("--theta", type=parse_angle, default=3 * math.pi)
    c.add_argument("--radius", type=float, default=1.0)
    c.add_argument("--levels", type=_int_list, default=None, help="refinement levels (default 4,8,16)")
    c.add_argument("--rings", type=int, default=6)
    c.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    return parser


_GLOBAL = ("command", "seed", "refine", "tol", "out", "fmt", "workers")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in _GLOBAL}
    return RunConfig(ns.command, params, ns.seed, ns.refine, ns.tol, ns.out,
                     getattr(ns, "fmt", None), ns.workers)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
