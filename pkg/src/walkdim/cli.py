"""Command-line front end.

Loads systems (preset names or JSON config paths), dispatches to the
library, prints a JSON summary to stdout, and optionally writes bulk
data (log-log tables, graph edges, vertex values) to a CSV file for
external plotting.  Exit codes: 0 success, 1 computation error, 2
argument/config error; failures emit {"error": code, "detail": text}.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .audit import audit_pair
from .besov import LipschitzMap, critical_exponent_fit, pushforward_check
from .dirichlet import (
    default_time_grid,
    exit_time_profile,
    graph_energy,
    harmonic_extension,
    heat_kernel_diag,
)
from .errors import (
    BudgetExceeded,
    ConvergenceError,
    FitError,
    ReductionError,
    ValidationError,
    WalkdimError,
)
from .ifs import IfsSpec, load_system, preset_names, sample_measure, validate
from .levelgraph import build_level_graph, components_after_removal
from .network import renorm_factor, walk_dimension
from .rational import format_rational, parse_rational

DEFAULT_SEED = 42


class _ParseFailure(Exception):
    """Argument/config-stage failure: exit code 2."""


class _Parser(argparse.ArgumentParser):
    # Route argparse's own failures through the JSON error channel.
    def error(self, message):
        raise _ParseFailure(message)


def _load(source: str) -> IfsSpec:
    # filesystem errors propagate: main() maps them to the "file" code
    try:
        return load_system(source)
    except json.JSONDecodeError as exc:
        raise _ParseFailure(f"invalid JSON in {source!r}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise _ParseFailure(f"bad system config {source!r}: {exc}") from exc


def _rational(text: str, what: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _ParseFailure(f"bad {what} {text!r}: {exc}") from exc


def _rational_list(text: str, what: str) -> list[Fraction]:
    return [_rational(part.strip(), what) for part in text.split(",") if part.strip()]


def _point(text: str) -> tuple[Fraction, Fraction]:
    coords = _rational_list(text, "coordinate")
    if len(coords) != 2:
        raise _ParseFailure(f"point {text!r} needs exactly two coordinates")
    return (coords[0], coords[1])


def _constants(text: str) -> tuple[int, Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 3:
        raise _ParseFailure(
            f"constants {text!r} must be map_count,ratio,energy_scale"
        )
    n = _rational(parts[0], "map count")
    if n.denominator != 1:
        raise _ParseFailure(f"map count {parts[0]!r} must be an integer")
    return (
        int(n),
        _rational(parts[1], "contraction ratio"),
        _rational(parts[2], "energy scale"),
    )


def _graph_function(ifs: IfsSpec, graph, name: str, boundary: Optional[str]):
    """Resolve a named test function to per-vertex values."""
    if name == "harmonic":
        k = len(ifs.boundary)
        if boundary is None:
            vals: Sequence = [Fraction(1)] + [Fraction(0)] * (k - 1)
        else:
            vals = _rational_list(boundary, "boundary value")
            if len(vals) != k:
                raise _ParseFailure(f"need {k} boundary values, got {len(vals)}")
        return harmonic_extension(ifs, graph.level, vals)
    if name in ("x", "y"):
        axis = 0 if name == "x" else 1
        return [float(v[axis]) for v in graph.vertices]
    raise _ParseFailure(f"unknown function {name!r} (harmonic, x, y)")


# ---------------------------------------------------------------- commands


def _cmd_validate(args):
    ifs = _load(args.system)
    report = validate(ifs)
    payload = {"system": ifs.name, **report.to_json()}
    return payload, None


def _cmd_dim(args):
    ifs = _load(args.system)
    report = walk_dimension(ifs, max_iter=args.max_iter, tol=args.tol)
    return report.to_json(), None


def _cmd_graph(args):
    ifs = _load(args.system)
    g = build_level_graph(ifs, args.level)
    payload = {
        "system": ifs.name,
        "level": g.level,
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
        "cell_count": len(g.cells),
        "boundary_indices": list(g.boundary_indices()),
    }
    rows = [
        [
            float(g.vertices[u][0]),
            float(g.vertices[u][1]),
            float(g.vertices[v][0]),
            float(g.vertices[v][1]),
        ]
        for u, v in g.edges
    ]
    return payload, (["ux", "uy", "vx", "vy"], rows)


def _cmd_renorm(args):
    ifs = _load(args.system)
    result = renorm_factor(ifs, max_iter=args.max_iter, tol=args.tol)
    payload = {"system": ifs.name, **result.to_json()}
    return payload, None


def _cmd_harmonic(args):
    ifs = _load(args.system)
    k = len(ifs.boundary)
    vals = _rational_list(args.boundary, "boundary value")
    if len(vals) != k:
        raise _ParseFailure(f"need {k} boundary values, got {len(vals)}")
    u = harmonic_extension(ifs, args.level, vals, method=args.method)
    renorm = renorm_factor(ifs)
    raw = graph_energy(u, 1)
    scaled = graph_energy(u, renorm.energy_scale)
    floats = u.float_values()
    payload = {
        "system": ifs.name,
        "level": args.level,
        "boundary_values": [format_rational(v) for v in vals],
        "vertex_count": u.graph.vertex_count,
        "energy_raw": format_rational(raw) if isinstance(raw, Fraction) else float(raw),
        "energy_scale": (
            format_rational(renorm.energy_scale)
            if renorm.exact
            else float(renorm.energy_scale)
        ),
        "energy_scaled": (
            format_rational(scaled) if isinstance(scaled, Fraction) else float(scaled)
        ),
        "min": float(floats.min()),
        "max": float(floats.max()),
    }
    rows = [
        [float(x), float(y), fv]
        for (x, y), fv in zip(u.graph.vertices, floats)
    ]
    return payload, (["x", "y", "value"], rows)


def _cmd_exit_fit(args):
    ifs = _load(args.system)
    report = exit_time_profile(ifs, args.levels, start=args.start)
    payload = {"system": ifs.name, **report.to_json()}
    rows = [[m, float(t)] for m, t in report.rows]
    return payload, (["level", "expected_steps"], rows)


def _cmd_heat_fit(args):
    ifs = _load(args.system)
    laziness = float(_rational(args.laziness, "laziness"))
    grid = default_time_grid(args.t_min, args.t_max, args.points)
    profile = heat_kernel_diag(ifs, args.level, laziness=laziness, t_grid=grid)
    payload = {"system": ifs.name, "level": args.level, **profile.to_json()}
    rows = [[t, p] for t, p in zip(profile.times, profile.diag_values)]
    return payload, (["t", "p_diag"], rows)


def _cmd_besov_fit(args):
    ifs = _load(args.system)
    if args.sample is not None:
        if args.function == "harmonic":
            raise _ParseFailure(
                "--sample supports coordinate functions only (x, y)"
            )
        source = sample_measure(ifs, depth=args.depth, count=args.sample, seed=args.seed)
        axis = 0 if args.function == "x" else 1
        u = [float(p[axis]) for p in source.points]
    else:
        source = build_level_graph(ifs, args.level)
        u = _graph_function(ifs, source, args.function, args.boundary)
    window = (
        float(_rational(args.r_min, "window edge")),
        float(_rational(args.r_max, "window edge")),
    )
    estimate = critical_exponent_fit(source, u, r_window=window)
    payload = {
        "system": ifs.name,
        "function": args.function,
        "seed": args.seed,
        **estimate.to_json(),
    }
    rows = [[r, v] for r, v in zip(estimate.radii, estimate.values)]
    return payload, (["r", "oscillation"], rows)


def _cmd_pushforward(args):
    ifs = _load(args.system)
    graph = build_level_graph(ifs, args.level)
    u = _graph_function(ifs, graph, args.function, args.boundary)
    if not hasattr(u, "graph"):
        raise _ParseFailure("pushforward needs a graph function (harmonic)")
    transform = LipschitzMap(_rational(args.scale, "scale"), _point(args.translate))
    report = pushforward_check(transform, ifs, u)
    payload = {"system": ifs.name, "level": args.level, **report.to_json()}
    rows = [[row.r, row.lhs, row.bound, int(row.ok)] for row in report.rows]
    return payload, (["r", "image_oscillation", "bound", "ok"], rows)


def _cmd_cut(args):
    ifs = _load(args.system)
    g = build_level_graph(ifs, args.level)
    removed: list[tuple[Fraction, Fraction]] = []
    if args.remove_interior:
        boundary = set(g.boundary_indices())
        removed.extend(
            v for i, v in enumerate(g.vertices) if i not in boundary
        )
    for text in args.remove or []:
        removed.append(_point(text))
    count = components_after_removal(g, removed)
    payload = {
        "system": ifs.name,
        "level": args.level,
        "removed": [[format_rational(x), format_rational(y)] for x, y in removed],
        "components": count,
    }
    return payload, None


def _cmd_compare(args):
    subjects: list = [_load(s) for s in args.systems or []]
    subjects.extend(_constants(c) for c in args.constants or [])
    if len(subjects) != 2:
        raise _ParseFailure(
            f"compare needs exactly two subjects "
            f"(systems and/or --constants), got {len(subjects)}"
        )
    verdict = audit_pair(subjects[0], subjects[1])
    return verdict.to_json(), None


# ---------------------------------------------------------------- wiring


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="walkdim",
        description=(
            "Dimensions and Lipschitz invariants of gasket-type "
            "self-similar sets (presets: %s)." % ", ".join(preset_names())
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help="RNG seed for sampling-based estimators (default 42)",
    )

    out = _Parser(add_help=False)
    out.add_argument("--out", help="write the data table (or summary) to this file")
    out.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="--out file format: csv data table or json summary (default csv)",
    )

    p = sub.add_parser("validate", parents=[common, out], help="run structural checks")
    p.add_argument("system", help="preset name or JSON config path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser(
        "dim", parents=[common, out], help="Hausdorff and walk dimension report"
    )
    p.add_argument("system")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser(
        "graph", parents=[common, out], help="level-m approximation graph"
    )
    p.add_argument("system")
    p.add_argument("-m", "--level", type=int, default=1)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser(
        "renorm", parents=[common, out], help="energy renormalization factor"
    )
    p.add_argument("system")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_renorm)

    p = sub.add_parser(
        "harmonic", parents=[common, out], help="energy-minimizing extension"
    )
    p.add_argument("system")
    p.add_argument("-m", "--level", type=int, default=1)
    p.add_argument(
        "--boundary",
        default="1,0,0",
        help="comma-separated rational boundary values (default 1,0,0)",
    )
    p.add_argument("--method", choices=("auto", "recursive", "direct"), default="auto")
    p.set_defaults(func=_cmd_harmonic)

    p = sub.add_parser(
        "exit-fit", parents=[common, out], help="mean exit times across levels"
    )
    p.add_argument("system")
    p.add_argument("-m", "--levels", type=int, default=4)
    p.add_argument("--start", type=int, default=0, help="boundary corner index")
    p.set_defaults(func=_cmd_exit_fit)

    p = sub.add_parser(
        "heat-fit", parents=[common, out], help="on-diagonal heat kernel decay"
    )
    p.add_argument("system")
    p.add_argument("-m", "--level", type=int, default=6)
    p.add_argument("--laziness", default="1/2", help="hold probability (default 1/2)")
    p.add_argument("--t-min", type=int, default=10)
    p.add_argument("--t-max", type=int, default=1000)
    p.add_argument("--points", type=int, default=30)
    p.set_defaults(func=_cmd_heat_fit)

    p = sub.add_parser(
        "besov-fit",
        parents=[common, out],
        help="critical exponent from oscillation scaling",
    )
    p.add_argument("system")
    p.add_argument("-m", "--level", type=int, default=7)
    p.add_argument("--function", choices=("harmonic", "x", "y"), default="harmonic")
    p.add_argument("--boundary", default=None, help="harmonic boundary values")
    p.add_argument("--r-min", default="1/32", help="window lower edge (default 1/32)")
    p.add_argument("--r-max", default="1/2", help="window upper edge (default 1/2)")
    p.add_argument("--sample", type=int, default=None, help="use N measure samples")
    p.add_argument("--depth", type=int, default=10, help="sampling word length")
    p.set_defaults(func=_cmd_besov_fit)

    p = sub.add_parser(
        "pushforward",
        parents=[common, out],
        help="oscillation invariance under an affine map",
    )
    p.add_argument("system")
    p.add_argument("-m", "--level", type=int, default=6)
    p.add_argument("--scale", default="1/2", help="similarity ratio of the map")
    p.add_argument("--translate", default="0,0", help="translation dx,dy")
    p.add_argument("--function", choices=("harmonic",), default="harmonic")
    p.add_argument("--boundary", default=None)
    p.set_defaults(func=_cmd_pushforward)

    p = sub.add_parser(
        "cut", parents=[common, out], help="components after removing vertices"
    )
    p.add_argument("system")
    p.add_argument("-m", "--level", type=int, default=1)
    p.add_argument(
        "--remove",
        action="append",
        metavar="X,Y",
        help="exact rational point to remove (repeatable)",
    )
    p.add_argument(
        "--remove-interior",
        action="store_true",
        help="remove every non-boundary vertex of the level graph",
    )
    p.set_defaults(func=_cmd_cut)

    p = sub.add_parser(
        "compare", parents=[common, out], help="pairwise dimension audit"
    )
    p.add_argument(
        "systems",
        nargs="*",
        help="zero, one, or two systems (preset or JSON path)",
    )
    p.add_argument(
        "--constants",
        action="append",
        metavar="N,RHO,LAMBDA",
        help="declared constants subject: map count, ratio, energy scale "
        "(repeatable; appended after positional systems)",
    )
    p.set_defaults(func=_cmd_compare)

    return parser


_ERROR_CODES: tuple[tuple[type, str], ...] = (
    (ValidationError, "validation"),
    (BudgetExceeded, "budget"),
    (ConvergenceError, "convergence"),
    (FitError, "fit"),
    (ReductionError, "reduction"),
    (WalkdimError, "computation"),
    (ArithmeticError, "arithmetic"),
    (ValueError, "value"),
)


def _emit_error(code: str, detail: str) -> None:
    print(json.dumps({"error": code, "detail": detail}, indent=2))


def _write_out(path: str, fmt: str, payload: dict, table) -> None:
    if fmt == "json" or table is None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    header, rows = table
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _ParseFailure as exc:
        _emit_error("usage", str(exc))
        return 2
    try:
        payload, table = args.func(args)
    except _ParseFailure as exc:
        _emit_error("config", str(exc))
        return 2
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        _emit_error("file", str(exc))
        return 2
    except tuple(cls for cls, _ in _ERROR_CODES) as exc:
        for cls, code in _ERROR_CODES:
            if isinstance(exc, cls):
                _emit_error(code, str(exc))
                return 1
        raise AssertionError("unreachable")
    out = getattr(args, "out", None)
    if out:
        try:
            _write_out(out, args.format, payload, table)
        except OSError as exc:
            _emit_error("file", str(exc))
            return 1
    print(json.dumps(payload, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
