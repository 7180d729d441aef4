"""Command-line surface: eval, zeros, pq, map, verify, oracle-compare, kernel.

Exit codes: 0 ok, 2 usage error, 3 convergence failure, 4 I/O failure,
5 anomaly flagged by the strip mapper.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import critical_line, eta, strip, theta
from . import verify as verify_mod
from .strip import Region
from .theta import ConvergenceError, UsageError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4
EXIT_ANOMALY = 5

TOL_MIN, TOL_MAX = 1e-14, 1e-2
Y_MAX_LIMIT = 1000.0

DEFAULT_REGION = (1.0 / 128.0, 1.0, 0.0, 100.0)
DEFAULT_NX, DEFAULT_NY = 128, 512


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' literals (optional spaces, either part omittable)."""
    s = text.replace(" ", "").replace("I", "i")
    if s.endswith("i") or "i" in s:
        s = s.replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex literal {text!r}") from None


def parse_region(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError("region must be x0:x1:y0:y1")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad region {text!r}") from None


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_rows(out_path, fmt, header, rows):
    """Delimited output with round-trip float formatting (byte-stable)."""
    if fmt == "json":
        payload = json.dumps([dict(zip(header, r)) for r in rows], indent=2,
                             default=float)
        text = payload + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get("XILAB_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"bad XILAB_THREADS value {env!r}") from None
    return 0


def _spec(args) -> eta.QuadratureSpec:
    tol = getattr(args, "tol", None) or eta.DEFAULT_TOL
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise UsageError(f"tol must lie in [{TOL_MIN}, {TOL_MAX}]")
    return eta.QuadratureSpec(tol=tol)


def _apply_config_file(args):
    """Flat JSON config keys mirror the flags; explicit flags win."""
    if getattr(args, "config", None) is None:
        return
    data = json.loads(Path(args.config).read_text())
    mapping = {
        "z": ("z", str), "y_max": ("y_max", float), "step": ("step", float),
        "tol": ("tol", float), "region": ("region", str), "nx": ("nx", int),
        "ny": ("ny", int), "format": ("format", str), "out": ("out", str),
        "threads": ("threads", int),
    }
    for key, (attr, cast) in mapping.items():
        if key in data and getattr(args, attr, None) is None:
            setattr(args, attr, cast(data[key]))


def _maybe_plot(args) -> bool:
    return getattr(args, "out", None) is not None and not getattr(args, "no_plot", False)


def _png_path(out_path) -> str:
    return str(Path(out_path).with_suffix(".png"))


def cmd_eval(args) -> int:
    z = parse_complex(args.z)
    spec = _spec(args)
    results = {
        "via_G": eta.eta(z, spec, "via_G"),
        "via_F": eta.eta(z, spec, "via_F"),
        "oracle_xi": eta.xi_oracle(eta.transform(z, "z_to_s"), spec),
    }
    for name, r in results.items():
        print(f"{name:9s}  value = {complex(r.value)!r}  "
              f"bound = {r.abs_error_bound:.3e}")
    g = results["via_G"].value
    print(f"delta via_F     = {abs(results['via_F'].value - g):.3e}")
    print(f"delta oracle_xi = {abs(results['oracle_xi'].value - g):.3e}")
    print(f"|eta(z)| = {abs(g):.6e}")
    return EXIT_OK


def cmd_zeros(args) -> int:
    spec = _spec(args)
    y_max = args.y_max if args.y_max is not None else 100.0
    if y_max > Y_MAX_LIMIT:
        raise UsageError(f"y_max <= {Y_MAX_LIMIT} required")
    step = args.step if args.step is not None else critical_line.DEFAULT_STEP
    threads = _resolve_threads(args)
    records = critical_line.scan_zeros(0.0, y_max, step, spec=spec,
                                       threads=threads)
    header = ["y", "t_zeta", "residual", "u_deriv", "simple"]
    rows = [(r.y, r.t_zeta, r.residual, r.u_deriv, r.simple) for r in records]
    _write_rows(args.out, args.format or "csv", header, rows)
    if _maybe_plot(args):
        ys = np.linspace(0.0, y_max, 400)
        us = [critical_line.u_line(float(y), 0, spec).value for y in ys]
        from . import plots
        plots.save_zeros_plot(_png_path(args.out), ys, us, records)
    return EXIT_OK if all(r.simple for r in records) else 1


def cmd_pq(args) -> int:
    spec = _spec(args)
    ys = [float(p) for p in args.y.split(",")] if args.y else [10.0, 30.0, 60.0, 100.0]
    rows_d = critical_line.pq_table(ys, spec=spec)
    header = ["y", "p", "q", "diff", "scaled_p"]
    rows = [(r["y"], r["p"], r["q"], r["diff"], r["scaled_p"]) for r in rows_d]
    _write_rows(args.out, args.format or "csv", header, rows)
    if _maybe_plot(args):
        from . import plots
        plots.save_pq_plot(_png_path(args.out), rows_d)
    return EXIT_OK


def cmd_map(args) -> int:
    spec = _spec(args)
    x0, x1, y0, y1 = parse_region(args.region) if args.region else DEFAULT_REGION
    nx = args.nx if args.nx is not None else DEFAULT_NX
    ny = args.ny if args.ny is not None else DEFAULT_NY
    region = Region(x0, x1, y0, y1, nx, ny)
    threads = _resolve_threads(args)
    out_dir = Path(args.out) if args.out else Path("map_out")
    out_dir.mkdir(parents=True, exist_ok=True)

    grid_u = strip.sign_grid(region, "u", spec)
    grid_v = strip.sign_grid(region, "v", spec)
    anchors = critical_line.stationary_points(max(0.0, y0), y1,
                                              spec=spec, threads=threads)
    curves = strip.trace_curves(grid_v, spec=spec, anchors=anchors)
    report = strip.anomaly_scan(curves, grid_v)

    fmt = args.format or "csv"
    grid_rows = []
    for i, x in enumerate(region.xs):
        for j, y in enumerate(region.ys):
            grid_rows.append((float(x), float(y),
                              float(grid_u.values[i, j]), float(grid_v.values[i, j]),
                              int(grid_u.signs[i, j]), int(grid_v.signs[i, j])))
    _write_rows(out_dir / f"grid.{fmt}", fmt,
                ["x", "y", "u", "v", "sign_u", "sign_v"], grid_rows)
    curve_rows = []
    for cid, curve in enumerate(curves):
        for (x, y), u in zip(curve.points, curve.u_values):
            curve_rows.append((cid, float(x), float(y), float(u), 0.0))
    _write_rows(out_dir / f"curves.{fmt}", fmt,
                ["curve_id", "x", "y", "u", "v"], curve_rows)
    anomalies = {
        "joins": [vars(f) | {"location": list(f.location),
                             "curve_ids": list(f.curve_ids)}
                  for f in report.joins],
        "bifurcations": [vars(f) | {"cell": list(f.cell),
                                    "location": list(f.location)}
                         for f in report.bifurcations],
    }
    (out_dir / "anomalies.json").write_text(json.dumps(anomalies, indent=2) + "\n")
    if not getattr(args, "no_plot", False):
        from . import plots
        plots.save_map_plot(out_dir / "map.png", grid_u, grid_v, curves)
    return EXIT_ANOMALY if report.count > 0 else EXIT_OK


def cmd_verify(args) -> int:
    threads = _resolve_threads(args)
    report = verify_mod.run_verify(threads=threads,
                                   skip_slow=getattr(args, "quick", False))
    print(report.to_text())
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
    return EXIT_OK if report.passed else 1


def cmd_oracle_compare(args) -> int:
    spec = _spec(args)
    rows = []
    for x in verify_mod.ROUTE_SAMPLE_XS:
        for y in verify_mod.ROUTE_SAMPLE_YS:
            z = complex(x, y)
            g = eta.eta(z, spec, "via_G")
            f = eta.eta(z, spec, "via_F")
            o = eta.xi_oracle(eta.transform(z, "z_to_s"), spec)
            rows.append((x, y, abs(g.value - f.value), abs(g.value - o.value),
                         abs(f.value - o.value)))
    _write_rows(args.out, args.format or "csv",
                ["x", "y", "dGF", "dGO", "dFO"], rows)
    return EXIT_OK


def cmd_kernel(args) -> int:
    ts = np.linspace(-1.0, 1.5, 251)
    rows = [(float(t), theta.G_eval(float(t)).value,
             theta.G_deriv(float(t), 1).value) for t in ts]
    _write_rows(args.out, args.format or "csv", ["t", "G", "G_prime"], rows)
    if _maybe_plot(args):
        from . import plots
        plots.save_kernel_plot(_png_path(args.out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xilab",
                                     description="numerical lab for the "
                                                 "simplified xi kernel")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--config", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--no-plot", action="store_true")

    p = sub.add_parser("eval", help="evaluate eta(z) on all three routes")
    p.add_argument("--z", required=True)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="scan and classify critical-line zeros")
    p.add_argument("--y-max", dest="y_max", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("pq", help="p/q decomposition table")
    p.add_argument("--y", default=None, help="comma-separated ordinates")
    common(p)
    p.set_defaults(func=cmd_pq)

    p = sub.add_parser("map", help="sign grid, curve tracing and audits")
    p.add_argument("--region", default=None, help="x0:x1:y0:y1")
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--ny", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", help="run the full audit suite")
    p.add_argument("--quick", action="store_true",
                   help="skip the strip map and determinism replay")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-compare", help="batch route-agreement table")
    common(p)
    p.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("kernel", help="dump (t, G, G') table")
    common(p)
    p.set_defaults(func=cmd_kernel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
