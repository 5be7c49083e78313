"""Command-line front end: single solves, convergence studies, table
reproduction and the solvability audit.

Configuration is a flat ``key=value`` text file; any command-line option
overrides the file.  Exit codes: 0 success, 2 configuration error,
3 instability, 4 audit failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import struct
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .ccd import get_factorization
from .exact import EXAMPLES, compute_fourier_coefficients, example1_exact
from .grid import GridAxis
from .model import InstabilityError, linf_errors, run
from .reference_data import TABLE1_ROWS
from . import audit as audit_mod

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSTABILITY = 3
EXIT_AUDIT = 4


class ConfigError(Exception):
    pass


def load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def resolve_dt(rule: str, spacing: float, final_time: float) -> float:
    """Turn a dt rule into a concrete step size that divides the final time.

    ``h2`` requests dt = h^2; the step count is rounded up to the next power
    of two so that dt divides the final time exactly and dyadic grid
    refinements quarter the step exactly (keeping observed rates clean even
    when the final time is not a multiple of h^2).
    """
    if rule == "h2":
        if final_time == 0:
            return spacing**2
        target = final_time / spacing**2
        steps = max(1, 2 ** math.ceil(math.log2(target) - 1e-12))
        return final_time / steps
    try:
        dt = float(rule)
    except ValueError as exc:
        raise ConfigError(f"invalid dt rule {rule!r}") from exc
    if not dt > 0:
        raise ConfigError(f"dt must be positive, got {dt}")
    return dt


def _spec_from_options(opts) -> tuple:
    example = opts.get("example")
    if example is None:
        raise ConfigError("an example id (1-4) is required")
    example = int(example)
    if example not in EXAMPLES:
        raise ConfigError(f"unknown example {example}; choose 1-4")
    kwargs = {}
    if opts.get("inv_re") is not None:
        kwargs["inv_re"] = float(opts["inv_re"])
    if opts.get("final_time") is not None:
        kwargs["final_time"] = float(opts["final_time"])
    if example == 4 and opts.get("variant") is not None:
        kwargs["variant"] = opts["variant"]
    return example, EXAMPLES[example](**kwargs)


def _merged_options(args, keys) -> dict:
    opts = load_config(getattr(args, "config", None))
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _fmt(x: float) -> str:
    return f"{x:.5e}"


def _manifest(path: Path, payload: dict) -> None:
    payload = dict(payload)
    payload["package_version"] = __version__
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_grid_dump(path: Path, axes, state) -> None:
    """Raw dump: int32 dims, per-axis int64 cell counts and float64
    spacings, float64 time, then each component row-major as float64."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<i", len(axes)))
        for ax in axes:
            fh.write(struct.pack("<q", ax.n_cells))
        for ax in axes:
            fh.write(struct.pack("<d", ax.spacing))
        fh.write(struct.pack("<d", state.time))
        for comp in state.components:
            np.ascontiguousarray(comp, dtype="<f8").tofile(fh)


def _resolution(opts, dimension) -> list[int]:
    m = opts.get("m")
    if m is None:
        raise ConfigError("a cell count (--m) is required")
    parts = [int(p) for p in str(m).split(",")]
    if len(parts) == 1:
        parts = parts * dimension
    if len(parts) != dimension:
        raise ConfigError(
            f"need 1 or {dimension} cell counts, got {len(parts)}"
        )
    return parts


def cmd_solve(args) -> int:
    opts = _merged_options(
        args, ("example", "m", "dt", "final_time", "inv_re", "variant",
               "boundary_mode", "outdir"))
    example, spec = _spec_from_options(opts)
    resolution = _resolution(opts, spec.dimension)
    axes = spec.axes(resolution)
    dt = resolve_dt(opts.get("dt", "h2"), min(ax.spacing for ax in axes),
                    spec.final_time)
    outdir = Path(opts.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    result = run(spec, resolution, dt,
                 boundary_mode=opts.get("boundary_mode", "step"))
    wall = time.perf_counter() - start

    errors = None
    if spec.exact_fn is not None:
        errors = linf_errors(result.final, spec, resolution)

    if args.dump:
        write_grid_dump(outdir / "fields.bin", axes, result.final)
    summary = {
        "example": example,
        "problem": spec.name,
        "resolution": resolution,
        "spacing": [ax.spacing for ax in axes],
        "dt": dt,
        "steps": result.steps,
        "final_time": spec.final_time,
        "inv_re": spec.inv_re,
        "boundary_mode": opts.get("boundary_mode", "step"),
        "linf_errors": errors,
        "stability_warning": result.advisory.warn,
        "stability_limit": result.advisory.limit,
        "wall_time_s": wall,
    }
    _manifest(outdir / "run_manifest.json", summary)
    if errors is not None:
        names = "uvw"[: spec.dimension]
        for name, err in zip(names, errors):
            print(f"e_{name} = {_fmt(err)}")
    if result.advisory.warn:
        print(f"warning: {result.advisory.message}", file=sys.stderr)
    print(f"wrote {outdir / 'run_manifest.json'}")
    return EXIT_OK


def cmd_converge(args) -> int:
    opts = _merged_options(
        args, ("example", "m_list", "dt", "final_time", "inv_re", "variant",
               "boundary_mode", "outdir"))
    example, spec = _spec_from_options(opts)
    raw = opts.get("m_list")
    if raw is None:
        raise ConfigError("a cell-count list (--m-list) is required")
    m_list = [int(p) for p in str(raw).split(",")]
    if m_list != sorted(m_list) or len(set(m_list)) != len(m_list):
        raise ConfigError("cell counts must be strictly increasing")
    dyadic = all(b == 2 * a for a, b in zip(m_list, m_list[1:]))
    if not dyadic:
        print("notice: cell counts are not dyadic; rates omitted",
              file=sys.stderr)

    outdir = Path(opts.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    names = "uvw"[: spec.dimension]

    rows = []
    start = time.perf_counter()
    for m in m_list:
        resolution = [m] * spec.dimension
        h = min(ax.spacing for ax in spec.axes(resolution))
        dt = resolve_dt(opts.get("dt", "h2"), h, spec.final_time)
        result = run(spec, resolution, dt,
                     boundary_mode=opts.get("boundary_mode", "step"))
        errors = linf_errors(result.final, spec, resolution)
        rows.append({"m": m, "h": h, "dt": dt, "errors": errors})
    wall = time.perf_counter() - start

    header = ["h"]
    for name in names:
        header += [f"e_{name}", f"rate_{name}"]
    csv_path = outdir / f"converge_example{example}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(rows):
            out = [_fmt(row["h"])]
            for c, name in enumerate(names):
                out.append(_fmt(row["errors"][c]))
                if i > 0 and dyadic and rows[i - 1]["errors"][c] > 0:
                    rate = math.log2(rows[i - 1]["errors"][c] / row["errors"][c])
                    out.append(f"{rate:.2f}")
                else:
                    out.append("")
            writer.writerow(out)
    _manifest(outdir / f"converge_example{example}.json", {
        "example": example,
        "problem": spec.name,
        "dt_rule": opts.get("dt", "h2"),
        "boundary_mode": opts.get("boundary_mode", "step"),
        "inv_re": spec.inv_re,
        "final_time": spec.final_time,
        "rows": [
            {"m": r["m"], "h": r["h"], "dt": r["dt"],
             "errors": list(r["errors"])}
            for r in rows
        ],
        "wall_time_s": wall,
    })
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_table1(args) -> int:
    opts = _merged_options(args, ("outdir", "m", "dt"))
    outdir = Path(opts.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    m = int(opts.get("m", 80))
    dt = float(opts.get("dt", 1e-5))

    spec = EXAMPLES[1](final_time=1.0)
    times = sorted({t for _, t, *_ in TABLE1_ROWS})
    start = time.perf_counter()
    result = run(spec, [m], dt, snapshot_times=times)
    wall = time.perf_counter() - start

    axis = GridAxis(m, 0.0, 1.0)
    nodes = axis.nodes()
    csv_path = outdir / "table1.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "t", "CCD-TVD", "Exact", "abs_diff",
                         "HC", "RHC", "RPA", "TVCF"])
        for x, t, hc, rhc, rpa, tvcf, _ccd_ref, _exact_ref in TABLE1_ROWS:
            idx = int(round(x / axis.spacing))
            computed = float(result.snapshots[t].components[0][idx])
            exact = float(spec.exact_fn(np.array([x]), t)[0][0])
            writer.writerow([
                f"{x:.2f}", f"{t:.2f}", f"{computed:.6f}", f"{exact:.6f}",
                _fmt(abs(computed - exact)),
                f"{hc:.6f}", f"{rhc:.6f}", f"{rpa:.6f}", f"{tvcf:.6f}",
            ])
    _manifest(outdir / "table1.json", {
        "m": m, "dt": dt, "inv_re": spec.inv_re, "wall_time_s": wall,
        "rows": [
            {"x": x, "t": t,
             "ccd_tvd": float(result.snapshots[t].components[0][int(round(x / axis.spacing))]),
             "exact": float(spec.exact_fn(np.array([x]), t)[0][0])}
            for x, t, *_ in TABLE1_ROWS
        ],
    })
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_audit(args) -> int:
    opts = _merged_options(args, ("outdir",))
    outdir = Path(opts.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    report = audit_mod.audit_report()
    path = outdir / "audit.json"
    path.write_text(json.dumps(report, indent=2) + "\n")
    margins = report["reduction"]["dominance_margins"]
    print(f"dominance margins: min={min(margins):.4g}")
    failed = [r for r in report["sweep"] if not r["ok"]]
    print(f"sweep: {len(report['sweep'])} cases, {len(failed)} failures")
    print(f"wrote {path}")
    return EXIT_OK if report["ok"] else EXIT_AUDIT


def cmd_derive(args) -> int:
    opts = _merged_options(args, ("m", "left", "right", "expr", "outdir"))
    m = int(opts.get("m", 32))
    left = float(opts.get("left", 0.0))
    right = float(opts.get("right", 1.0))
    expr = opts.get("expr", "sin(2*pi*x)")
    axis = GridAxis(m, left, right)
    x = axis.nodes()
    namespace = {name: getattr(np, name) for name in (
        "sin", "cos", "tan", "exp", "log", "sqrt", "abs", "pi", "e", "tanh",
        "cosh", "sinh")}
    namespace["x"] = x
    try:
        u = np.broadcast_to(np.asarray(eval(expr, {"__builtins__": {}}, namespace),
                                       dtype=float), x.shape)
    except Exception as exc:
        raise ConfigError(f"cannot evaluate expression {expr!r}: {exc}") from exc
    pair = get_factorization(axis).apply(u)
    outdir = Path(opts.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "derive.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "u", "du", "d2u"])
        for xi, ui, di, d2i in zip(x, u, pair.first, pair.second):
            writer.writerow([_fmt(xi), _fmt(ui), _fmt(di), _fmt(d2i)])
    print(f"wrote {csv_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccdburgers",
        description="Sixth-order compact-difference Burgers' solver",
    )
    parser.add_argument("--config", help="flat key=value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--outdir", help="output directory (default: .)")

    solve = sub.add_parser("solve", parents=[common],
                           help="run one problem and report errors")
    solve.add_argument("--example", help="benchmark problem id (1-4)")
    solve.add_argument("--m", help="cells per axis, scalar or comma list")
    solve.add_argument("--dt", help="time step or the rule 'h2'")
    solve.add_argument("--final-time", dest="final_time")
    solve.add_argument("--inv-re", dest="inv_re")
    solve.add_argument("--variant", choices=("corrected", "as-printed"),
                       help="exact-solution variant for example 4")
    solve.add_argument("--boundary-mode", dest="boundary_mode",
                       choices=("step", "stage"))
    solve.add_argument("--dump", action="store_true",
                       help="also write a raw binary grid dump")
    solve.set_defaults(fn=cmd_solve)

    conv = sub.add_parser("converge", parents=[common],
                          help="grid-refinement convergence study")
    conv.add_argument("--example", help="benchmark problem id (1-4)")
    conv.add_argument("--m-list", dest="m_list",
                      help="comma-separated increasing cell counts")
    conv.add_argument("--dt", help="time step or the rule 'h2'")
    conv.add_argument("--final-time", dest="final_time")
    conv.add_argument("--inv-re", dest="inv_re")
    conv.add_argument("--variant", choices=("corrected", "as-printed"))
    conv.add_argument("--boundary-mode", dest="boundary_mode",
                      choices=("step", "stage"))
    conv.set_defaults(fn=cmd_converge)

    tab = sub.add_parser("table1", parents=[common],
                         help="reproduce the 1D comparison table")
    tab.add_argument("--m", help="cells (default 80)")
    tab.add_argument("--dt", help="time step (default 1e-5)")
    tab.set_defaults(fn=cmd_table1)

    aud = sub.add_parser("audit", parents=[common],
                         help="solvability audit (reduction + sweep)")
    aud.set_defaults(fn=cmd_audit)

    der = sub.add_parser("derive", parents=[common],
                         help="differentiate a sampled expression (debugging)")
    der.add_argument("--m", help="cells (default 32)")
    der.add_argument("--left")
    der.add_argument("--right")
    der.add_argument("--expr", help="numpy expression in x, e.g. 'sin(2*pi*x)'")
    der.set_defaults(fn=cmd_derive)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY


if __name__ == "__main__":
    sys.exit(main())
